"""Classical diffusion steps (SIR, tipping, independent cascade) and belief exchange.

Every step is synchronous: it reads the states at step start and returns a new
mapping, leaving its input untouched. Influence reaches a node from its
in-neighbors, the users it follows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum

from rumorsim.errors import ConfigurationError, NotFoundError

logger = logging.getLogger(__name__)


class NodeState(str, Enum):
    SUSCEPTIBLE = 'susceptible'
    INFECTED = 'infected'
    RECOVERED = 'recovered' # absorbing


class AdoptionState(str, Enum):
    NOT_ADOPTED = 'not_adopted'
    ADOPTED = 'adopted'


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f'{name} must be within [0, 1], got {value}')


@dataclass(frozen=True)
class SirParams:
    beta: float
    gamma: float

    def __post_init__(self):
        _check_probability('beta', self.beta)
        _check_probability('gamma', self.gamma)


@dataclass(frozen=True)
class TippingParams:
    theta: float

    def __post_init__(self):
        _check_probability('theta', self.theta)


class EdgeProbability:
    def __init__(self, default=0.0, probs=None):
        _check_probability('default edge probability', default)
        self.default = default
        self._probs = {}
        for edge, p in (probs or {}).items():
            _check_probability(f'probability of edge {edge}', p)
            self._probs[tuple(edge)] = p

    def get(self, edge):
        p = self._probs.get(edge, self.default)
        _check_probability(f'probability of edge {edge}', p)
        return p

    def __len__(self):
        return len(self._probs)


def _check_states(g, states, enum_cls):
    missing = [u for u in g.sorted_nodes() if u not in states]
    if missing:
        shown = ', '.join(str(u) for u in missing[:5])
        more = f' (and {len(missing) - 5} more)' if len(missing) > 5 else ''
        raise ConfigurationError(f'No state for node(s) {shown}{more}')
    try:
        return {u: enum_cls(s) for u, s in states.items()}
    except ValueError as e:
        raise ConfigurationError(str(e))


def sir_step(g, states, params, rng):
    states = _check_states(g, states, NodeState)
    new_states = dict(states)

    for v in g.sorted_nodes():
        if states[v] is not NodeState.SUSCEPTIBLE:
            continue
        sources = [u for u in g.in_neighbors(v) if states[u] is NodeState.INFECTED]
        if not sources:
            continue
        # one draw per infected in-neighbor, all drawn so the stream advances the same way
        draws = [rng.random() for _ in sources]
        if any(u < params.beta for u in draws):
            new_states[v] = NodeState.INFECTED

    for u in g.sorted_nodes():
        if states[u] is NodeState.INFECTED and rng.random() < params.gamma:
            new_states[u] = NodeState.RECOVERED

    return new_states


def tipping_step(g, states, params):
    states = _check_states(g, states, AdoptionState)
    new_states = dict(states)

    for v in g.sorted_nodes():
        if states[v] is AdoptionState.ADOPTED:
            continue
        sources = g.in_neighbors(v)
        adopted = sum(1 for u in sources if states[u] is AdoptionState.ADOPTED)
        if adopted and adopted / len(sources) >= params.theta:
            new_states[v] = AdoptionState.ADOPTED

    return new_states


def ic_step(g, states, probs, attempted, rng):
    states = _check_states(g, states, NodeState)
    if not isinstance(probs, EdgeProbability):
        probs = EdgeProbability(probs)

    attempted = set(attempted)
    unknown = attempted - g.edges
    if unknown:
        raise ConfigurationError(f'attempted edges not in graph: {sorted(unknown)[:5]}')

    new_states = dict(states)
    for u in g.sorted_nodes():
        if states[u] is not NodeState.INFECTED:
            continue
        for v in g.out_neighbors(u):
            edge = (u, v)
            if edge in attempted:
                continue
            attempted.add(edge)
            if rng.random() < probs.get(edge) and new_states[v] is NodeState.SUSCEPTIBLE:
                new_states[v] = NodeState.INFECTED
        # one infectious step only
        new_states[u] = NodeState.RECOVERED

    return new_states, frozenset(attempted)


class BeliefKind(str, Enum):
    REGULAR = 'regular'
    FORCEFUL = 'forceful'


REGULAR_EPSILON = 0.5


@dataclass(frozen=True)
class BeliefState:
    beliefs: dict
    kinds: dict = field(default_factory=dict)
    epsilon: float = 0.1 # weight a regular agent keeps when meeting a forceful one

    def __post_init__(self):
        _check_probability('epsilon', self.epsilon)
        for u, x in self.beliefs.items():
            if not 0.0 <= x <= 1.0:
                raise ConfigurationError(f'belief of {u} must be within [0, 1], got {x}')

    def kind_of(self, u):
        return BeliefKind(self.kinds.get(u, BeliefKind.REGULAR))

    def spread(self):
        if not self.beliefs:
            return 0.0
        values = self.beliefs.values()
        return max(values) - min(values)

    def mean(self):
        if not self.beliefs:
            return 0.0
        return sum(self.beliefs.values()) / len(self.beliefs)


def _clamp(x):
    return min(1.0, max(0.0, x))


def _exchange(xi, xj, ki, kj, epsilon):
    if ki is BeliefKind.REGULAR and kj is BeliefKind.REGULAR:
        m = (xi + xj) * REGULAR_EPSILON
        return m, m
    if ki is BeliefKind.REGULAR:
        return _clamp(epsilon * xi + (1 - epsilon) * xj), xj
    if kj is BeliefKind.REGULAR:
        return xi, _clamp(epsilon * xj + (1 - epsilon) * xi)
    return xi, xj


def belief_exchange(state, i, j):
    if i == j:
        raise ConfigurationError(f'belief exchange needs two distinct users, got {i} twice')
    for u in (i, j):
        if u not in state.beliefs:
            raise NotFoundError(f'User {u} has no belief')

    xi, xj = _exchange(state.beliefs[i], state.beliefs[j], state.kind_of(i), state.kind_of(j), state.epsilon)
    beliefs = dict(state.beliefs)
    beliefs[i] = xi
    beliefs[j] = xj
    return replace(state, beliefs=beliefs)


@dataclass(frozen=True)
class BeliefRun:
    state: BeliefState
    mean_trace: list
    spread_trace: list = field(default_factory=list) # only filled with track_spread


def run_belief_process(g, init, iterations, rng, track_spread=False):
    if iterations < 0:
        raise ConfigurationError(f'iterations must be >= 0, got {iterations}')
    if iterations == 0:
        return BeliefRun(init, [])

    edges = g.sorted_edges()
    if not edges:
        raise ConfigurationError('belief process needs at least one edge')
    missing = sorted({u for edge in edges for u in edge} - set(init.beliefs))
    if missing:
        raise NotFoundError(f'User {missing[0]} has no belief')

    beliefs = dict(init.beliefs)
    kinds = {u: init.kind_of(u) for u in beliefs}
    total = sum(beliefs.values())
    n = len(beliefs)

    mean_trace = []
    spread_trace = []
    for _ in range(iterations):
        i, j = edges[rng.below(len(edges))]
        xi, xj = _exchange(beliefs[i], beliefs[j], kinds[i], kinds[j], init.epsilon)
        total += (xi + xj) - (beliefs[i] + beliefs[j])
        beliefs[i] = xi
        beliefs[j] = xj
        mean_trace.append(total / n)
        if track_spread:
            spread_trace.append(max(beliefs.values()) - min(beliefs.values()))

    final = replace(init, beliefs=beliefs)
    logger.debug('belief process: %d rounds, final spread %g', iterations, final.spread())
    return BeliefRun(final, mean_trace, spread_trace)


def initial_beliefs(nodes, initials=(), forceful=(), epsilon=0.1):
    """Seed a belief state: initial diffusers fully believe the rumor, everyone else not at all."""
    nodes = set(nodes)
    unknown = sorted((set(initials) | set(forceful)) - nodes)
    if unknown:
        raise NotFoundError(f'User {unknown[0]} is not in the graph')

    initials = set(initials)
    beliefs = {u: 1.0 if u in initials else 0.0 for u in sorted(nodes)}
    kinds = {u: BeliefKind.FORCEFUL for u in forceful}
    return BeliefState(beliefs, kinds, epsilon)
