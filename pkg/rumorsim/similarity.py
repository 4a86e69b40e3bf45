"""Topic tokenization and the set/vector/string similarity metrics.

Every set metric works on binary term weights over the union vocabulary of the
two topic sets being compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from rapidfuzz.distance import Levenshtein

from rumorsim.errors import ConfigurationError, UndefinedCorrelationError


TopicSet = frozenset

CANONICAL_SEPARATOR = ', '


class MetricKind(str, Enum):
    COSINE = 'cosine'
    PEARSON = 'pearson'
    JACCARD_SET = 'jaccard'
    JACCARD_VECTOR = 'jaccard_vector'
    DICE = 'dice'
    LEVENSHTEIN = 'levenshtein'
    AVERAGE = 'average' # mean of cosine, set jaccard and dice

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace('-', '_')
        key = {'jaccard_set': 'jaccard', 'avg': 'average'}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ', '.join(m.value for m in cls)
            raise ConfigurationError(f"Unknown similarity metric '{name}'. Expected one of: {valid}")


# the three metrics the average is taken over, in summation order
AVERAGED_METRICS = (MetricKind.COSINE, MetricKind.JACCARD_SET, MetricKind.DICE)


def tokenize_topics(raw):
    if not raw:
        return TopicSet()
    labels = (part.strip().lower() for part in raw.split(','))
    return TopicSet(label for label in labels if label)


def canonical_string(topics):
    return CANONICAL_SEPARATOR.join(sorted(topics))


@dataclass(frozen=True)
class TermVector:
    vocabulary: tuple
    weights: np.ndarray

    def __post_init__(self):
        if len(self.vocabulary) != len(self.weights):
            raise ValueError(f'vocabulary has {len(self.vocabulary)} terms but {len(self.weights)} weights were given')

    @classmethod
    def from_topics(cls, topics, vocabulary):
        weights = np.array([1.0 if term in topics else 0.0 for term in vocabulary], dtype=float)
        return cls(tuple(vocabulary), weights)

    def __len__(self):
        return len(self.vocabulary)


def binary_vectors(a, b):
    vocabulary = tuple(sorted(set(a) | set(b)))
    return TermVector.from_topics(a, vocabulary), TermVector.from_topics(b, vocabulary)


def _weights(v):
    if isinstance(v, TermVector):
        return v.weights
    return np.asarray(v, dtype=float)


def cosine_vectors(v1, v2):
    x = _weights(v1)
    y = _weights(v2)
    norms = math.sqrt(float(np.dot(x, x)) * float(np.dot(y, y)))
    if norms == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(x, y)) / norms))


def cosine(a, b):
    if not a or not b:
        return 0.0
    va, vb = binary_vectors(a, b)
    return cosine_vectors(va, vb)


def pearson(a, b):
    if isinstance(a, TermVector) and isinstance(b, TermVector) and a.vocabulary != b.vocabulary:
        raise ValueError('pearson requires both vectors on the same vocabulary')

    x = _weights(a)
    y = _weights(b)
    if x.shape != y.shape:
        raise ValueError(f'pearson requires equal-length vectors, got {len(x)} and {len(y)}')
    if len(x) < 2:
        raise UndefinedCorrelationError(f'correlation needs at least 2 terms, got {len(x)}')

    xc = x - x.mean()
    yc = y - y.mean()
    if not np.any(xc) or not np.any(yc):
        raise UndefinedCorrelationError('correlation is undefined for a zero-variance vector')
    return cosine_vectors(xc, yc)


def jaccard(a, b, variant='set'):
    if variant == 'set':
        union = len(a | b)
        if union == 0:
            return 0.0
        return len(a & b) / union

    if variant == 'vector':
        if not a and not b:
            return 0.0
        va, vb = binary_vectors(a, b)
        dot = float(np.dot(va.weights, vb.weights))
        # squared norms: this is the form that equals the set variant on binary weights
        denominator = float(np.dot(va.weights, va.weights)) + float(np.dot(vb.weights, vb.weights)) - dot
        return dot / denominator

    raise ValueError(f"Unknown jaccard variant '{variant}'")


def dice(a, b):
    total = len(a) + len(b)
    if total == 0:
        return 0.0
    return 2 * len(a & b) / total


def levenshtein_distance(s1, s2):
    return Levenshtein.distance(s1, s2)


def levenshtein(s1, s2):
    distance = levenshtein_distance(s1, s2)
    longest = max(len(s1), len(s2))
    if longest == 0:
        return distance, 1.0
    return distance, 1.0 - distance / longest


def average(a, b):
    return (cosine(a, b) + jaccard(a, b) + dice(a, b)) / 3


def _topics(item):
    # profiles and rumor content both carry .topics; raw topic sets pass through
    topics = getattr(item, 'topics', item)
    return topics if isinstance(topics, frozenset) else TopicSet(topics)


def score(metric, a, b):
    metric = MetricKind.parse(metric)
    ta = _topics(a)
    tb = _topics(b)

    # empty content scores 0 under every metric
    if not ta or not tb:
        return 0.0

    if metric is MetricKind.COSINE:
        return cosine(ta, tb)
    if metric is MetricKind.JACCARD_SET:
        return jaccard(ta, tb, 'set')
    if metric is MetricKind.JACCARD_VECTOR:
        return jaccard(ta, tb, 'vector')
    if metric is MetricKind.DICE:
        return dice(ta, tb)
    if metric is MetricKind.AVERAGE:
        return average(ta, tb)
    if metric is MetricKind.PEARSON:
        va, vb = binary_vectors(ta, tb)
        return pearson(va, vb)
    if metric is MetricKind.LEVENSHTEIN:
        return levenshtein(canonical_string(ta), canonical_string(tb))[1]

    raise ConfigurationError(f'No scorer for metric {metric}')


def similarity_row(a, b):
    """cosine, jaccard, dice and average for one pair, the columns of sims.csv"""
    ta = _topics(a)
    tb = _topics(b)
    row = {
        'cosine': cosine(ta, tb),
        'jaccard': jaccard(ta, tb),
        'dice': dice(ta, tb),
    }
    row['average'] = (row['cosine'] + row['jaccard'] + row['dice']) / 3
    return row
