"""Directed social graph, user profiles and the offline CSV loaders.

An edge (a, b) means information flows from a to b, i.e. b follows a.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import networkx as nx
import pandas as pd

from rumorsim.errors import DatasetError, NotFoundError
from rumorsim.similarity import TopicSet, tokenize_topics

logger = logging.getLogger(__name__)

EDGE_COLUMNS = ['from_user_id', 'to_user_id']
USER_COLUMNS = ['user_id', 'topics', 'created_at', 'is_diffuser']

MAX_USER_ID = 2**64 - 1

TRUE_LABELS = ('1', 'true')
FALSE_LABELS = ('0', 'false')


@dataclass(frozen=True)
class UserProfile:
    id: int
    topics: TopicSet = field(default_factory=TopicSet)
    created_at: int = 0
    observed_diffuser: bool = False


@dataclass(frozen=True)
class RumorContent:
    topics: TopicSet = field(default_factory=TopicSet)


@dataclass(frozen=True)
class LoadStats:
    rows_read: int = 0
    dedup_count: int = 0
    self_loops: int = 0


class SocialGraph:
    def __init__(self, edges=(), nodes=(), load_stats=None):
        digraph = nx.DiGraph()
        digraph.add_nodes_from(nodes)
        for u, v in edges:
            if u == v:
                raise ValueError(f'self-loop on user {u}')
            digraph.add_edge(u, v)

        self._digraph = digraph
        self.load_stats = load_stats or LoadStats()

        # sorted adjacency so every traversal iterates in the same order
        self._out = {u: tuple(sorted(digraph.successors(u))) for u in digraph.nodes}
        self._in = {u: tuple(sorted(digraph.predecessors(u))) for u in digraph.nodes}
        self.nodes = frozenset(digraph.nodes)
        self.edges = frozenset(digraph.edges)


    def with_nodes(self, extra_nodes):
        missing = set(extra_nodes) - self.nodes
        if not missing:
            return self
        return SocialGraph(self.edges, self.nodes | missing, self.load_stats)


    def out_neighbors(self, u):
        try:
            return list(self._out[u])
        except KeyError:
            raise NotFoundError(f'User {u} is not in the graph')


    def in_neighbors(self, u):
        try:
            return list(self._in[u])
        except KeyError:
            raise NotFoundError(f'User {u} is not in the graph')


    def sorted_nodes(self):
        return sorted(self.nodes)


    def sorted_edges(self):
        return sorted(self.edges)


    def to_networkx(self):
        return self._digraph.copy()


    def __contains__(self, u):
        return u in self.nodes


    def __len__(self):
        return len(self.nodes)


    def __eq__(self, other):
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges


    def __repr__(self):
        return f'<SocialGraph nodes={len(self.nodes)} edges={len(self.edges)}>'


def out_neighbors(g, u):
    return g.out_neighbors(u)


def read_table(path, columns):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DatasetError(path, f"missing header, expected '{','.join(columns)}'")
    except pd.errors.ParserError as e:
        raise DatasetError(path, f'unreadable CSV: {e}')
    except UnicodeDecodeError as e:
        raise DatasetError(path, f'not valid UTF-8: {e}')

    header = [c.strip() for c in frame.columns]
    if header != columns:
        raise DatasetError(path, f"bad header '{','.join(header)}', expected '{','.join(columns)}'", 1)
    frame.columns = header
    return frame


def gen_rows(frame):
    # line 1 is the header
    for line_no, row in enumerate(frame.itertuples(index=False), 2):
        values = [str(v).strip() for v in row]
        if not any(values):
            continue
        yield line_no, values


def parse_user_id(value, path, line_no, column):
    try:
        user_id = int(value)
    except ValueError:
        raise DatasetError(path, f"{column} '{value}' is not an integer id", line_no)
    if not 0 <= user_id <= MAX_USER_ID:
        raise DatasetError(path, f'{column} {user_id} is outside the unsigned 64-bit range', line_no)
    return user_id


def load_edges(path):
    frame = read_table(path, EDGE_COLUMNS)

    edges = set()
    rows_read = 0
    dedup_count = 0
    self_loops = 0

    for line_no, (from_raw, to_raw) in gen_rows(frame):
        rows_read += 1
        u = parse_user_id(from_raw, path, line_no, 'from_user_id')
        v = parse_user_id(to_raw, path, line_no, 'to_user_id')

        if u == v:
            self_loops += 1
            continue

        if (u, v) in edges:
            dedup_count += 1
            continue

        edges.add((u, v))

    if self_loops:
        logger.warning('%s: skipped %d self-loop row(s)', path, self_loops)

    stats = LoadStats(rows_read, dedup_count, self_loops)
    graph = SocialGraph(edges, load_stats=stats)
    logger.info('%s: %d rows, %d duplicate edge(s) dropped, %d nodes, %d edges', path, rows_read, dedup_count, len(graph.nodes), len(graph.edges))
    return graph


def write_edges(g, path):
    frame = pd.DataFrame(g.sorted_edges(), columns=EDGE_COLUMNS)
    frame.to_csv(path, index=False, lineterminator='\n')


def _parse_label(value, path, line_no):
    label = value.lower()
    if label in TRUE_LABELS:
        return True
    if label in FALSE_LABELS:
        return False
    raise DatasetError(path, f"is_diffuser '{value}' must be one of 0, 1, true, false", line_no)


def load_users(path, max_time=None):
    frame = read_table(path, USER_COLUMNS)

    profiles = {}
    late = 0

    for line_no, (id_raw, topics_raw, created_raw, label_raw) in gen_rows(frame):
        user_id = parse_user_id(id_raw, path, line_no, 'user_id')
        if user_id in profiles:
            raise DatasetError(path, f'duplicate user_id {user_id}', line_no)

        try:
            created_at = int(created_raw)
        except ValueError:
            raise DatasetError(path, f"created_at '{created_raw}' is not an integer time step", line_no)
        if created_at < 0:
            raise DatasetError(path, f'created_at {created_at} is negative', line_no)

        if max_time is not None and created_at > max_time:
            late += 1

        profiles[user_id] = UserProfile(
            id=user_id,
            topics=tokenize_topics(topics_raw),
            created_at=created_at,
            observed_diffuser=_parse_label(label_raw, path, line_no),
        )

    if late:
        logger.warning('%s: %d user(s) wake up after max_time %d and will never evaluate', path, late, max_time)

    logger.info('%s: %d user profiles', path, len(profiles))
    return profiles


def load_rumor(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except UnicodeDecodeError as e:
        raise DatasetError(path, f'not valid UTF-8: {e}')
    return RumorContent(TopicSet().union(*(tokenize_topics(line) for line in lines)))


@dataclass(frozen=True)
class ValidationReport:
    missing_profiles: tuple = ()
    empty_topics: tuple = ()
    isolated_nodes: tuple = ()

    @property
    def is_empty(self):
        return not (self.missing_profiles or self.empty_topics or self.isolated_nodes)

    def as_dict(self):
        return {
            'missing_profiles': list(self.missing_profiles),
            'empty_topics': list(self.empty_topics),
            'isolated_nodes': list(self.isolated_nodes),
        }


def validate(g, profiles):
    endpoints = {u for edge in g.edges for u in edge}
    missing = sorted(endpoints - set(profiles))
    empty = sorted(user_id for user_id, profile in profiles.items() if not profile.topics)
    isolated = sorted((g.nodes | set(profiles)) - endpoints)
    return ValidationReport(tuple(missing), tuple(empty), tuple(isolated))
