import random

import pytest

from helpers import random_graph, random_profiles
from rumorsim.config import build_config
from rumorsim.errors import ConfigurationError, DatasetError
from rumorsim.evaluation import diffusion_curve
from rumorsim.gated import SimilarityGate, diffuse_user_user
from rumorsim.graph import SocialGraph, UserProfile
from rumorsim.models import NodeState
from rumorsim.outputs import TraceOutput
from rumorsim.simulator import (
    AgentState, aggregate_curve, export_frames, load_edge_probabilities, read_traces, run_simulation, run_trials,
)
from rumorsim.similarity import TopicSet


def config(**values):
    return build_config({key: str(value) for key, value in values.items()})


def same_topics(*ids, created_at=0):
    return {u: UserProfile(u, TopicSet({'a', 'b'}), created_at) for u in ids}


def test_fixture_once_policy(fixture_graph, fixture_profiles):
    cfg = config(max_time=8, trials=1, initials=1)
    trace = run_simulation(cfg, fixture_graph, fixture_profiles)
    assert trace.counts == [2, 3, 4, 5, 6, 6, 6, 6, 6]
    assert trace.final_diffusers == {1, 2, 3, 5, 7, 9}
    assert trace.changes[1] == [(3, AgentState.DIFFUSER)]


def test_chain_activates_within_one_step():
    g = SocialGraph([(1, 2), (2, 3)])
    trace = run_simulation(config(max_time=3, initials=1), g, same_topics(1, 2, 3))
    assert trace.changes[0] == [(2, AgentState.DIFFUSER), (3, AgentState.DIFFUSER)]
    assert trace.counts == [3, 3, 3, 3]


def test_once_policy_misses_later_diffusers():
    # 3 -> 2 -> 1: user 1 evaluates before 2 has turned
    g = SocialGraph([(3, 2), (2, 1)])
    profiles = same_topics(1, 2, 3)
    once = run_simulation(config(max_time=3, initials=3), g, profiles)
    every = run_simulation(config(max_time=3, initials=3, evaluation_policy='every_step'), g, profiles)
    assert once.final_diffusers == {2, 3}
    assert every.final_diffusers == {1, 2, 3}
    assert every.changes[1] == [(1, AgentState.DIFFUSER)]


def test_gate_passing_nothing_keeps_curve_flat(fixture_graph, fixture_profiles):
    cfg = config(max_time=5, initials='1, 4', threshold=1.0, metric='jaccard')
    trace = run_simulation(cfg, fixture_graph, fixture_profiles)
    assert trace.final_diffusers == {1, 2, 4}
    cfg = config(max_time=5, initials='4, 6', threshold=1.0)
    assert run_simulation(cfg, fixture_graph, fixture_profiles).counts == [2] * 6


def test_late_wake_up_never_evaluates(caplog):
    g = SocialGraph([(1, 2)])
    profiles = same_topics(1)
    profiles[2] = UserProfile(2, TopicSet({'a', 'b'}), created_at=50)
    trace = run_simulation(config(max_time=10, initials=1), g, profiles)
    assert trace.final_diffusers == {1}
    assert 'never evaluate' in caplog.text


def test_unknown_initial(fixture_graph, fixture_profiles):
    with pytest.raises(ConfigurationError):
        run_simulation(config(max_time=3, initials=42), fixture_graph, fixture_profiles)
    with pytest.raises(ConfigurationError):
        run_simulation(config(max_time=3, initials=42, model='sir'), fixture_graph, fixture_profiles)


def test_trace_invariants(fixture_graph, fixture_profiles):
    trace = run_simulation(config(max_time=8, initials=1), fixture_graph, fixture_profiles)
    assert len(trace.counts) == 9
    assert trace.counts == sorted(trace.counts)
    turned = {}
    for t, step_changes in enumerate(trace.changes):
        for u, state in step_changes:
            assert u not in turned
            turned[u] = t
        states = trace.states_at(t)
        assert trace.counts[t] == sum(1 for s in states.values() if s is AgentState.DIFFUSER)
    assert len(fixture_graph.nodes) >= trace.counts[-1] >= 1


def test_every_step_fixpoint_stops_changing(fixture_graph, fixture_profiles):
    trace = run_simulation(config(max_time=20, initials=1, evaluation_policy='every_step'), fixture_graph, fixture_profiles)
    first_quiet = next(t for t, step_changes in enumerate(trace.changes) if not step_changes and t >= 5)
    assert all(not step_changes for step_changes in trace.changes[first_quiet:])


def test_every_step_matches_gated_fixpoint():
    rnd = random.Random(41)
    for _ in range(40):
        n = rnd.randint(2, 200)
        g = random_graph(rnd, n, rnd.choice([0.01, 0.03, 0.06]))
        profiles = random_profiles(rnd, g.nodes)
        profiles = {u: UserProfile(u, p.topics, rnd.randint(0, 5)) for u, p in profiles.items()}
        initials = sorted(rnd.sample(sorted(g.nodes), rnd.randint(1, min(3, n))))
        cfg = config(max_time=n + 10, initials=','.join(map(str, initials)), threshold=0.4,
                     metric='dice', evaluation_policy='every_step')
        trace = run_simulation(cfg, g, profiles)
        expected = diffuse_user_user(g, profiles, set(initials), SimilarityGate('dice', 0.4)).members
        assert trace.final_diffusers == expected


def test_trials_deterministic_for_gated(fixture_graph, fixture_profiles):
    result = run_trials(config(max_time=8, trials=3, initials=1), fixture_graph, fixture_profiles)
    assert len(result.traces) == 3
    assert all(trace.counts == result.traces[0].counts for trace in result.traces)
    assert result.curve == result.traces[0].counts


def test_single_trial_aggregate():
    g = random_graph(random.Random(2), 30, 0.1)
    result = run_trials(config(max_time=10, trials=1, initials=0, model='sir', beta=0.5), g, {})
    assert result.curve == result.traces[0].counts


def test_sir_trials_aggregate_is_mean():
    g = random_graph(random.Random(3), 50, 0.08)
    cfg = config(max_time=12, trials=2, initials='0, 1', model='sir', beta=0.3, gamma=0.2, seed=5)
    result = run_trials(cfg, g, {})
    a, b = (trace.counts for trace in result.traces)
    assert result.curve == [(x + y) / 2 for x, y in zip(a, b)]
    assert aggregate_curve([]) == []


def test_classical_runs_are_reproducible():
    g = random_graph(random.Random(4), 60, 0.05)
    for model in ('sir', 'ic', 'tipping'):
        cfg = config(max_time=15, trials=2, initials='0, 1, 2', model=model, beta=0.4, gamma=0.3, theta=0.2, ic_default_p=0.5, seed=9)
        first = TraceOutput(run_trials(cfg, g, {}).traces).render()
        second = TraceOutput(run_trials(cfg, g, {}).traces).render()
        assert first == second


def test_classical_curves_are_monotone():
    g = random_graph(random.Random(5), 60, 0.05)
    for model in ('sir', 'ic', 'tipping'):
        cfg = config(max_time=15, initials='0, 1', model=model, gamma=0.5, theta=0.1, ic_default_p=0.7)
        trace = run_simulation(cfg, g, {})
        assert trace.counts == sorted(trace.counts)
        assert len(trace.counts) == 16


def test_ic_uses_edge_probabilities(write_csv):
    g = SocialGraph([(1, 2), (1, 3)])
    probs = load_edge_probabilities(write_csv('p.csv', 'from_user_id,to_user_id,p\n1,2,1.0\n'), 0.0)
    trace = run_simulation(config(max_time=3, initials=1, model='ic'), g, {}, edge_probs=probs)
    assert trace.final_states == {1: NodeState.RECOVERED, 2: NodeState.RECOVERED, 3: NodeState.SUSCEPTIBLE}


def test_edge_probabilities_reject_out_of_range(write_csv):
    with pytest.raises(DatasetError, match='outside'):
        load_edge_probabilities(write_csv('p.csv', 'from_user_id,to_user_id,p\n1,2,1.5\n'), 0.1)


def test_trace_reload_rebuilds_states(fixture_graph, fixture_profiles, tmp_path):
    cfg = config(max_time=8, trials=2, initials=1)
    traces = run_trials(cfg, fixture_graph, fixture_profiles).traces
    path = tmp_path / 'trace.csv'
    path.write_text(TraceOutput(traces).render(), encoding='utf-8')

    reloaded = read_traces(path, fixture_graph.nodes, cfg.model, cfg.max_time)
    assert [trace.trial for trace in reloaded] == [0, 1]
    for original, copy in zip(traces, reloaded):
        assert copy.counts == original.counts
        assert copy.final_states == original.final_states
        for t in range(cfg.max_time + 1):
            assert copy.states_at(t) == original.states_at(t)


def test_trace_reload_rejects_unknown_user(fixture_graph, write_csv):
    path = write_csv('trace.csv', 'trial,step,user_id,new_state\n0,0,77,diffuser\n')
    with pytest.raises(DatasetError, match='not in the graph'):
        read_traces(path, fixture_graph.nodes, 'gated_user_user', 8)


def test_export_frames(fixture_graph, fixture_profiles, tmp_path):
    trace = run_simulation(config(max_time=2, initials=1), fixture_graph, fixture_profiles)
    written = export_frames(trace, fixture_graph, tmp_path)
    assert sorted(p.name for p in written) == ['curve.csv', 'frame_0000.dot', 'frame_0001.dot', 'frame_0002.dot']

    curve = (tmp_path / 'curve.csv').read_text().splitlines()
    assert curve == ['step,diffusers', '0,2', '1,3', '2,4']
    assert curve[1:] == [f'{step},{count}' for step, count in diffusion_curve(trace)]

    frame = (tmp_path / 'frame_0001.dot').read_text()
    assert sum(1 for line in frame.splitlines() if 'fillcolor=' in line) == len(fixture_graph.nodes)
    assert '"3" [color=red, fillcolor=red, state="diffuser"];' in frame
    assert '"4" [color=blue, fillcolor=blue, state="non_diffuser"];' in frame
    assert '"1" -> "2";' in frame
