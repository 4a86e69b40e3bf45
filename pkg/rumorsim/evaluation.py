"""Scoring predicted diffusers against the observed labels."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from rumorsim.errors import ConfigurationError, EmptyEvaluationError
from rumorsim.gated import GateMode, SimilarityGate, diffuse
from rumorsim.score_cache import ScoreCache
from rumorsim.similarity import MetricKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalReport:
    true_pos: int
    true_neg: int
    false_pos: int
    false_neg: int
    predicted_count: int = 0
    metric: str = None
    threshold: float = None

    @property
    def total(self):
        return self.true_pos + self.true_neg + self.false_pos + self.false_neg

    @property
    def accuracy(self):
        return (self.true_pos + self.true_neg) / self.total

    @property
    def error(self):
        return 1 - self.accuracy

    def as_row(self):
        return {
            'metric': self.metric,
            'threshold': self.threshold,
            'tp': self.true_pos,
            'tn': self.true_neg,
            'fp': self.false_pos,
            'fn': self.false_neg,
            'accuracy': self.accuracy,
            'predicted_count': self.predicted_count,
        }


def evaluate(predicted, profiles, metric=None, threshold=None):
    # every profile is a labeled node; predicted ids without a profile are unlabeled
    if not profiles:
        raise EmptyEvaluationError('no labeled users to evaluate against')

    predicted = set(predicted)
    tp = tn = fp = fn = 0
    for user_id, profile in profiles.items():
        hit = user_id in predicted
        if profile.observed_diffuser:
            if hit:
                tp += 1
            else:
                fn += 1
        elif hit:
            fp += 1
        else:
            tn += 1

    if isinstance(metric, MetricKind):
        metric = metric.value
    return EvalReport(tp, tn, fp, fn, len(predicted), metric, threshold)


def metric_sweep(g, profiles, rumor, initials, metrics, threshold, mode=GateMode.USER_USER, cache=None, decisions=None):
    if not metrics:
        raise ConfigurationError('metric sweep needs at least one metric')

    cache = cache if cache is not None else ScoreCache(profiles, rumor)
    reports = []
    for metric in dict.fromkeys(MetricKind.parse(m) for m in metrics):
        gate = SimilarityGate(metric, threshold, decisions)
        predicted = diffuse(g, profiles, initials, gate, mode, rumor, cache)
        report = evaluate(predicted.members, profiles, metric, threshold)
        logger.info('%s: accuracy %.10f over %d labeled user(s)', metric.value, report.accuracy, report.total)
        reports.append(report)

    reports.sort(key=lambda r: (-r.accuracy, r.metric))
    return {report.metric: report for report in reports}


def eval_rows(table):
    return [table[metric].as_row() for metric in sorted(table)]


def diffusion_curve(trace):
    return list(enumerate(trace.counts))
