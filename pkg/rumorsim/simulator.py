"""Time-stepped agent simulation producing diffusion traces.

In gated models a non-diffuser wakes up at its created_at step, looks at its
in-neighbors, and becomes a diffuser if one of them is a diffuser and the gate
admits the rumor along that edge. Agents woken at the same step run in
ascending id order and see each other's changes immediately.

Classical models (SIR, tipping, IC) ignore wake-up times and step every node
at every tick.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from rumorsim.config import EvaluationPolicy, ModelKind
from rumorsim.errors import ConfigurationError, DatasetError
from rumorsim.gated import GateJudge, GateMode, SimilarityGate, check_initials
from rumorsim.graph import gen_rows, parse_user_id, read_table
from rumorsim.models import AdoptionState, EdgeProbability, NodeState, SirParams, TippingParams, ic_step, sir_step, tipping_step
from rumorsim.outputs import frame_outputs, write_outputs
from rumorsim.rng import RngStream

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ['trial', 'step', 'user_id', 'new_state']


class AgentState(str, Enum):
    DIFFUSER = 'diffuser' # absorbing
    NON_DIFFUSER = 'non_diffuser'


ACTIVE_STATES = frozenset({AgentState.DIFFUSER, NodeState.INFECTED, NodeState.RECOVERED, AdoptionState.ADOPTED})

STATE_ENUMS = {
    ModelKind.GATED_USER_USER: AgentState,
    ModelKind.GATED_USER_CONTENT: AgentState,
    ModelKind.SIR: NodeState,
    ModelKind.IC: NodeState,
    ModelKind.TIPPING: AdoptionState,
}

INITIAL_STATES = {
    AgentState: (AgentState.DIFFUSER, AgentState.NON_DIFFUSER),
    NodeState: (NodeState.INFECTED, NodeState.SUSCEPTIBLE),
    AdoptionState: (AdoptionState.ADOPTED, AdoptionState.NOT_ADOPTED),
}


def is_active(state):
    return state in ACTIVE_STATES


@dataclass
class DiffusionTrace:
    """State deltas of one trial.

    `initial` holds the nodes that start away from `default_state`; `changes[t]`
    lists the (user, new state) pairs applied during step t, in order, and
    `counts[t]` the number of diffusers once step t is done.
    """
    trial: int
    model: ModelKind
    nodes: tuple
    default_state: Enum
    initial: dict = field(default_factory=dict)
    changes: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    final_states: dict = field(default_factory=dict)

    @property
    def max_time(self):
        return len(self.changes) - 1

    @property
    def final_diffusers(self):
        return {u for u, state in self.final_states.items() if is_active(state)}

    def states_at(self, t):
        states = dict.fromkeys(self.nodes, self.default_state)
        states.update(self.initial)
        for step_changes in self.changes[:t + 1]:
            states.update(step_changes)
        return states

    def gen_states(self):
        states = dict.fromkeys(self.nodes, self.default_state)
        states.update(self.initial)
        for t, step_changes in enumerate(self.changes):
            states.update(step_changes)
            yield t, states

    def gen_rows(self):
        # initial states are written as step 0 rows ahead of the step 0 changes
        for u in sorted(self.initial):
            yield self.trial, 0, u, self.initial[u].value
        for t, step_changes in enumerate(self.changes):
            for u, state in step_changes:
                yield self.trial, t, u, state.value


def _finish(trace, states):
    trace.final_states = dict(states)
    return trace


def _wake_times(g, profiles, max_time):
    wake = {}
    late = 0
    for u in g.sorted_nodes():
        profile = profiles.get(u)
        created_at = profile.created_at if profile is not None else 0
        if created_at > max_time:
            late += 1
        wake[u] = created_at
    if late:
        logger.warning('%d agent(s) wake up after max_time %d and never evaluate', late, max_time)
    return wake


def _run_gated(cfg, g, profiles, rumor, trial, gate, cache):
    mode = GateMode.USER_CONTENT if cfg.model is ModelKind.GATED_USER_CONTENT else GateMode.USER_USER
    judge = GateJudge(gate, profiles, rumor, mode, cache)
    check_initials(g, profiles, cfg.initials)

    nodes = tuple(g.sorted_nodes())
    states = dict.fromkeys(nodes, AgentState.NON_DIFFUSER)
    for u in cfg.initials:
        states[u] = AgentState.DIFFUSER

    trace = DiffusionTrace(trial, cfg.model, nodes, AgentState.NON_DIFFUSER, {u: AgentState.DIFFUSER for u in cfg.initials})

    wake = _wake_times(g, profiles, cfg.max_time)
    schedule = {}
    for u in nodes:
        if states[u] is AgentState.NON_DIFFUSER and wake[u] <= cfg.max_time:
            schedule.setdefault(wake[u], []).append(u)

    def activates(u):
        for v in g.in_neighbors(u):
            if states[v] is AgentState.DIFFUSER and judge.admits(v, u):
                return True
        return False

    every_step = cfg.evaluation_policy is EvaluationPolicy.EVERY_STEP
    awake = []
    count = len(cfg.initials)
    changed = True

    for t in range(cfg.max_time + 1):
        woken = schedule.get(t, [])
        if every_step:
            if woken:
                awake = sorted(awake + woken)
            elif not changed:
                # nothing moved last step and nobody new woke up: fixpoint
                trace.changes.append([])
                trace.counts.append(count)
                continue
            candidates = awake
        else:
            candidates = woken

        step_changes = []
        for u in candidates:
            if states[u] is AgentState.NON_DIFFUSER and activates(u):
                states[u] = AgentState.DIFFUSER
                step_changes.append((u, AgentState.DIFFUSER))

        if every_step and step_changes:
            awake = [u for u in awake if states[u] is AgentState.NON_DIFFUSER]

        changed = bool(step_changes)
        count += len(step_changes)
        trace.changes.append(step_changes)
        trace.counts.append(count)

    if judge.missing_profiles:
        logger.warning('trial %d: %d agent(s) without a profile scored 0', trial, len(judge.missing_profiles))
    return _finish(trace, states)


def _run_classical(cfg, g, trial, edge_probs):
    unknown = sorted(u for u in cfg.initials if u not in g.nodes)
    if unknown:
        raise ConfigurationError(f'initial node(s) not in graph: {unknown}')

    enum_cls = STATE_ENUMS[cfg.model]
    seeded_state, default_state = INITIAL_STATES[enum_cls]

    nodes = tuple(g.sorted_nodes())
    states = dict.fromkeys(nodes, default_state)
    for u in cfg.initials:
        states[u] = seeded_state

    trace = DiffusionTrace(trial, cfg.model, nodes, default_state, {u: seeded_state for u in cfg.initials})
    rng = RngStream.for_trial(cfg.seed, trial)

    if cfg.model is ModelKind.SIR:
        params = SirParams(cfg.beta, cfg.gamma)
        step = lambda s: sir_step(g, s, params, rng)
    elif cfg.model is ModelKind.TIPPING:
        params = TippingParams(cfg.theta)
        step = lambda s: tipping_step(g, s, params)
    else:
        probs = edge_probs if edge_probs is not None else EdgeProbability(cfg.ic_default_p)
        attempted = frozenset()

        def step(s):
            nonlocal attempted
            new_states, attempted = ic_step(g, s, probs, attempted, rng)
            return new_states

    count = sum(1 for state in states.values() if is_active(state))
    settled = False

    for t in range(cfg.max_time + 1):
        if settled:
            trace.changes.append([])
            trace.counts.append(count)
            continue

        new_states = step(states)
        step_changes = [(u, new_states[u]) for u in nodes if new_states[u] is not states[u]]
        count += sum(1 for u, state in step_changes if is_active(state) and not is_active(states[u]))
        states = new_states

        trace.changes.append(step_changes)
        trace.counts.append(count)

        if cfg.model is ModelKind.TIPPING:
            settled = not step_changes
        else:
            settled = not any(state is NodeState.INFECTED for state in states.values())

    return _finish(trace, states)


def make_gate(cfg, decisions=None):
    return SimilarityGate(cfg.metric, cfg.threshold, decisions)


def run_simulation(cfg, g, profiles, rumor=None, trial=0, cache=None, decisions=None, edge_probs=None):
    if cfg.model.is_gated:
        gate = make_gate(cfg, decisions)
        trace = _run_gated(cfg, g, profiles, rumor, trial, gate, cache)
    else:
        trace = _run_classical(cfg, g, trial, edge_probs)

    logger.info('trial %d (%s): %d -> %d diffuser(s) over %d step(s)', trial, cfg.model.value, len(trace.initial), trace.counts[-1], cfg.max_time + 1)
    return trace


@dataclass
class TrialsResult:
    traces: list
    curve: list # per-step mean diffuser count across trials


def aggregate_curve(traces):
    if not traces:
        return []
    steps = len(traces[0].counts)
    return [sum(trace.counts[t] for trace in traces) / len(traces) for t in range(steps)]


def run_trials(cfg, g, profiles, rumor=None, cache=None, decisions=None, edge_probs=None):
    traces = [run_simulation(cfg, g, profiles, rumor, trial, cache, decisions, edge_probs) for trial in range(cfg.trials)]
    return TrialsResult(traces, aggregate_curve(traces))


def load_edge_probabilities(path, default):
    frame = read_table(path, ['from_user_id', 'to_user_id', 'p'])
    probs = {}
    for line_no, (from_raw, to_raw, p_raw) in gen_rows(frame):
        u = parse_user_id(from_raw, path, line_no, 'from_user_id')
        v = parse_user_id(to_raw, path, line_no, 'to_user_id')
        try:
            p = float(p_raw)
        except ValueError:
            raise DatasetError(path, f"p '{p_raw}' is not a number", line_no)
        if not 0.0 <= p <= 1.0:
            raise DatasetError(path, f'p {p} is outside [0, 1]', line_no)
        probs[(u, v)] = p
    return EdgeProbability(default, probs)


def read_traces(path, nodes, model, max_time):
    """Rebuild traces from a trace.csv written by the simulate command."""
    model = ModelKind(model)
    enum_cls = STATE_ENUMS[model]
    default_state = INITIAL_STATES[enum_cls][1]
    nodes = tuple(sorted(nodes))

    frame = read_table(path, TRACE_COLUMNS)
    by_trial = {}
    for line_no, (trial_raw, step_raw, user_raw, state_raw) in gen_rows(frame):
        try:
            trial = int(trial_raw)
            step = int(step_raw)
            state = enum_cls(state_raw)
        except ValueError as e:
            raise DatasetError(path, str(e), line_no)
        if not 0 <= step <= max_time:
            raise DatasetError(path, f'step {step} is outside [0, {max_time}]', line_no)
        user_id = parse_user_id(user_raw, path, line_no, 'user_id')
        if user_id not in nodes:
            raise DatasetError(path, f'user {user_id} is not in the graph', line_no)
        by_trial.setdefault(trial, []).append((step, user_id, state))

    traces = []
    for trial in sorted(by_trial):
        trace = DiffusionTrace(trial, model, nodes, default_state)
        trace.changes = [[] for _ in range(max_time + 1)]
        for step, user_id, state in by_trial[trial]:
            trace.changes[step].append((user_id, state))

        states = dict.fromkeys(nodes, default_state)
        for step_changes in trace.changes:
            states.update(step_changes)
            trace.counts.append(sum(1 for state in states.values() if is_active(state)))
        traces.append(_finish(trace, states))
    return traces


def export_frames(trace, g, out_dir):
    return write_outputs(frame_outputs(trace, g), out_dir)
