import random

import pytest

from helpers import random_graph, random_profiles
from rumorsim.config import build_config
from rumorsim.errors import ConfigurationError, EmptyEvaluationError
from rumorsim.evaluation import EvalReport, diffusion_curve, eval_rows, evaluate, metric_sweep
from rumorsim.gated import GateMode, SimilarityGate, diffuse_user_user
from rumorsim.graph import SocialGraph, UserProfile
from rumorsim.simulator import run_simulation
from rumorsim.similarity import MetricKind, TopicSet

DEFAULT_METRICS = ['cosine', 'jaccard', 'dice', 'average']


def labeled(profiles, diffusers):
    return {u: UserProfile(u, p.topics, p.created_at, u in diffusers) for u, p in profiles.items()}


def test_perfect_and_inverted_predictions(fixture_profiles):
    observed = {u for u, p in fixture_profiles.items() if p.observed_diffuser}
    perfect = evaluate(observed, fixture_profiles)
    assert perfect.accuracy == 1.0
    assert perfect.error == 0.0

    inverted = evaluate(set(fixture_profiles) - observed, fixture_profiles)
    assert inverted.accuracy == 0.0
    assert inverted.false_pos == len(fixture_profiles) - len(observed)
    assert inverted.false_neg == len(observed)


def test_counts_sum_to_labeled_users(fixture_profiles):
    report = evaluate({1, 4, 8}, fixture_profiles)
    assert report.total == len(fixture_profiles)
    assert (report.true_pos, report.true_neg, report.false_pos, report.false_neg) == (1, 2, 2, 5)
    assert report.accuracy + report.error == pytest.approx(1.0, abs=1e-15)
    assert report.accuracy == pytest.approx(0.3)


def test_empty_evaluation():
    with pytest.raises(EmptyEvaluationError):
        evaluate({1}, {})


def test_as_row():
    row = EvalReport(1, 2, 3, 4, 4, 'cosine', 0.5).as_row()
    assert row == {
        'metric': 'cosine', 'threshold': 0.5, 'tp': 1, 'tn': 2, 'fp': 3, 'fn': 4,
        'accuracy': pytest.approx(0.3), 'predicted_count': 4,
    }


def test_single_metric_sweep_matches_evaluate(fixture_graph, fixture_profiles):
    table = metric_sweep(fixture_graph, fixture_profiles, None, {1}, ['cosine'], 0.5)
    predicted = diffuse_user_user(fixture_graph, fixture_profiles, {1}, SimilarityGate(MetricKind.COSINE, 0.5))
    assert list(table) == ['cosine']
    assert table['cosine'] == evaluate(predicted.members, fixture_profiles, MetricKind.COSINE, 0.5)
    assert table['cosine'].accuracy == 1.0


def test_sweep_needs_metrics(fixture_graph, fixture_profiles):
    with pytest.raises(ConfigurationError):
        metric_sweep(fixture_graph, fixture_profiles, None, {1}, [], 0.5)


def test_sweep_is_ordered_by_accuracy_then_name():
    g = SocialGraph([(1, 2), (1, 3)])
    profiles = {
        1: UserProfile(1, TopicSet({'a', 'b', 'c'}), observed_diffuser=True),
        2: UserProfile(2, TopicSet({'b', 'c', 'd'}), observed_diffuser=True),
        3: UserProfile(3, TopicSet({'x'})),
    }
    # jaccard is 0.5, cosine and dice 2/3, so only the stricter gate misses user 2
    table = metric_sweep(g, profiles, None, {1}, DEFAULT_METRICS, 0.6)
    assert list(table) == ['average', 'cosine', 'dice', 'jaccard']
    assert table['jaccard'].accuracy == pytest.approx(2 / 3)
    assert [row['metric'] for row in eval_rows(table)] == ['average', 'cosine', 'dice', 'jaccard']


def test_identical_profiles_give_identical_rows():
    rnd = random.Random(51)
    g = random_graph(rnd, 40, 0.08)
    profiles = {u: UserProfile(u, TopicSet({'a', 'b'}), observed_diffuser=rnd.random() < 0.5) for u in g.nodes}
    table = metric_sweep(g, profiles, None, {0}, DEFAULT_METRICS, 0.5)
    rows = [{k: v for k, v in report.as_row().items() if k != 'metric'} for report in table.values()]
    assert all(row == rows[0] for row in rows)


def test_self_consistency_on_synthetic_labels():
    rnd = random.Random(53)
    g = random_graph(rnd, 500, 0.006)
    profiles = random_profiles(rnd, g.nodes)
    initials = {0, 1, 2}
    truth = diffuse_user_user(g, profiles, initials, SimilarityGate(MetricKind.COSINE, 0.5)).members
    profiles = labeled(profiles, truth)

    table = metric_sweep(g, profiles, None, initials, DEFAULT_METRICS, 0.5)
    assert table['cosine'].accuracy == 1.0
    for metric in DEFAULT_METRICS:
        predicted = diffuse_user_user(g, profiles, initials, SimilarityGate(metric, 0.5)).members
        assert table[metric] == evaluate(predicted, profiles, MetricKind.parse(metric), 0.5)


def test_user_content_sweep(fixture_graph, fixture_profiles, fixture_rumor):
    table = metric_sweep(fixture_graph, fixture_profiles, fixture_rumor, {1}, ['cosine'], 0.5, GateMode.USER_CONTENT)
    # 2, 3, 5, 7 and 9 all carry the rumor's topics
    assert table['cosine'].predicted_count == 6


def test_diffusion_curve(fixture_graph, fixture_profiles):
    cfg = build_config({'max_time': '8', 'initials': '1'})
    trace = run_simulation(cfg, fixture_graph, fixture_profiles)
    curve = diffusion_curve(trace)
    assert len(curve) == cfg.max_time + 1
    assert curve[0] == (0, 2)
    assert curve[-1] == (8, len(trace.final_diffusers))
    assert [count for _, count in curve] == sorted(count for _, count in curve)


def test_flat_curve():
    g = SocialGraph([(1, 2)])
    profiles = {1: UserProfile(1, TopicSet({'a'})), 2: UserProfile(2, TopicSet({'b'}))}
    trace = run_simulation(build_config({'max_time': '4', 'initials': '1'}), g, profiles)
    assert diffusion_curve(trace) == [(t, 1) for t in range(5)]
