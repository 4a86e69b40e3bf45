"""Similarity-gated diffusion: user-user and user-content work-list fixpoints.

A diffuser passes the rumor along an out-edge only when the gate admits the
target. The user-user gate compares the sender's topics with the target's; the
user-content gate compares the target's topics with the rumor.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from rumorsim.errors import ConfigurationError, DatasetError
from rumorsim.graph import gen_rows, parse_user_id, read_table
from rumorsim.score_cache import ScoreCache
from rumorsim.similarity import MetricKind

logger = logging.getLogger(__name__)

DECISION_COLUMNS = ['from_user_id', 'to_user_id', 'pass']


class GateMode(str, Enum):
    USER_USER = 'user_user'
    USER_CONTENT = 'user_content'


@dataclass(frozen=True)
class SimilarityGate:
    metric: MetricKind = MetricKind.COSINE
    threshold: float = 0.5
    # (from, to) -> bool, replaces live scoring when present; unlisted edges never pass
    decisions: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'metric', MetricKind.parse(self.metric))
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigurationError(f'threshold must be within [0, 1], got {self.threshold}')


def load_decisions(path):
    frame = read_table(path, DECISION_COLUMNS)
    decisions = {}
    for line_no, (from_raw, to_raw, pass_raw) in gen_rows(frame):
        u = parse_user_id(from_raw, path, line_no, 'from_user_id')
        v = parse_user_id(to_raw, path, line_no, 'to_user_id')
        if pass_raw not in ('0', '1'):
            raise DatasetError(path, f"pass '{pass_raw}' must be 0 or 1", line_no)
        decisions[(u, v)] = pass_raw == '1'
    logger.info('%s: %d precomputed gate decision(s)', path, len(decisions))
    return decisions


class GateJudge:
    """Applies one gate to edges, remembering users whose profile was missing."""

    def __init__(self, gate, profiles, rumor=None, mode=GateMode.USER_USER, cache=None):
        self.gate = gate
        self.mode = GateMode(mode)
        if self.mode is GateMode.USER_CONTENT and rumor is None:
            raise ConfigurationError('user-content diffusion needs rumor content')
        self.cache = cache if cache is not None else ScoreCache(profiles, rumor)
        if self.cache.rumor is None:
            self.cache.rumor = rumor
        self.missing_profiles = set()


    def edge_score(self, u, v):
        if self.mode is GateMode.USER_USER:
            value = self.cache.pair_score(self.gate.metric, u, v)
            if value is None:
                self.missing_profiles.update(w for w in (u, v) if w not in self.cache.profiles)
        else:
            value = self.cache.content_score(self.gate.metric, v)
            if value is None:
                self.missing_profiles.add(v)
        return 0.0 if value is None else value


    def admits(self, u, v):
        decisions = self.gate.decisions
        if decisions is not None:
            return decisions.get((u, v), False)
        return self.edge_score(u, v) >= self.gate.threshold


@dataclass
class DiffuserSet:
    members: set = field(default_factory=set)
    insertion_log: list = field(default_factory=list)
    missing_profiles: set = field(default_factory=set)

    def add(self, u):
        if u in self.members:
            return False
        self.members.add(u)
        self.insertion_log.append(u)
        return True

    @property
    def size(self):
        return len(self.members)

    def __contains__(self, u):
        return u in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.insertion_log)


def check_initials(g, profiles, initials):
    unknown = sorted(u for u in initials if u not in g.nodes)
    if unknown:
        raise ConfigurationError(f'initial diffuser(s) not in graph: {unknown}')
    unknown = sorted(u for u in initials if u not in profiles)
    if unknown:
        raise ConfigurationError(f'initial diffuser(s) without a profile: {unknown}')


def _diffuse(g, judge, initials, rng=None):
    result = DiffuserSet()
    work = deque()
    for u in sorted(initials):
        result.add(u)
        work.append(u)

    while work:
        if rng is not None:
            # any processing order reaches the same members
            u = work[rng.below(len(work))]
            work.remove(u)
        else:
            u = work.popleft()

        for v in g.out_neighbors(u):
            if v in result:
                continue
            if judge.admits(u, v):
                result.add(v)
                work.append(v)

    result.missing_profiles = set(judge.missing_profiles)
    if result.missing_profiles:
        logger.warning('%d reached user(s) had no profile and scored 0', len(result.missing_profiles))
    return result


def diffuse_user_user(g, profiles, initials, gate, cache=None, rng=None):
    check_initials(g, profiles, initials)
    judge = GateJudge(gate, profiles, None, GateMode.USER_USER, cache)
    result = _diffuse(g, judge, initials, rng)
    logger.info('user-user %s >= %g: %d diffuser(s)', gate.metric.value, gate.threshold, result.size)
    return result


def diffuse_user_content(g, profiles, rumor, initials, gate, cache=None, rng=None):
    check_initials(g, profiles, initials)
    judge = GateJudge(gate, profiles, rumor, GateMode.USER_CONTENT, cache)
    result = _diffuse(g, judge, initials, rng)
    logger.info('user-content %s >= %g: %d diffuser(s)', gate.metric.value, gate.threshold, result.size)
    return result


def diffuse(g, profiles, initials, gate, mode=GateMode.USER_USER, rumor=None, cache=None):
    if GateMode(mode) is GateMode.USER_CONTENT:
        return diffuse_user_content(g, profiles, rumor, initials, gate, cache)
    return diffuse_user_user(g, profiles, initials, gate, cache)


def filtered_edge_set(g, profiles, rumor, gate, cache=None):
    mode = GateMode.USER_USER if rumor is None else GateMode.USER_CONTENT
    judge = GateJudge(gate, profiles, rumor, mode, cache)
    return {(u, v) for u, v in g.sorted_edges() if judge.admits(u, v)}
