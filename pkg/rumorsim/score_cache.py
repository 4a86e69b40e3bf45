import logging

import pandas as pd

from rumorsim.graph import gen_rows, parse_user_id, read_table
from rumorsim.errors import DatasetError
from rumorsim.similarity import MetricKind, score, similarity_row

logger = logging.getLogger(__name__)


class ScoreCache:
    """Memoises similarity scores between users, and between users and the rumor.

    Pair scores can be pre-seeded from a sims.csv table; seeded values win over
    live computation for the four columns that table carries.
    """
    SIMS_COLUMNS = ['from_user_id', 'to_user_id', 'cosine', 'jaccard', 'dice', 'average']
    CONTENT_COLUMNS = ['user_id', 'cosine', 'jaccard', 'dice', 'average']
    SEEDABLE = (MetricKind.COSINE, MetricKind.JACCARD_SET, MetricKind.DICE, MetricKind.AVERAGE)

    def __init__(self, profiles, rumor=None):
        self.profiles = profiles
        self.rumor = rumor
        self.data = {}


    def load(self, path):
        frame = read_table(path, self.SIMS_COLUMNS)
        seeded = 0
        for line_no, values in gen_rows(frame):
            u = parse_user_id(values[0], path, line_no, 'from_user_id')
            v = parse_user_id(values[1], path, line_no, 'to_user_id')
            for metric, raw in zip(self.SEEDABLE, values[2:]):
                try:
                    value = float(raw)
                except ValueError:
                    raise DatasetError(path, f"{metric.value} '{raw}' is not a number", line_no)
                self.data.setdefault(('pair', metric), {})[(u, v)] = value
            seeded += 1
        logger.info('%s: seeded %d pair score row(s)', path, seeded)
        return seeded


    def pair_score(self, metric, u, v):
        # None when either side has no profile
        metric = MetricKind.parse(metric)
        cache = self.data.setdefault(('pair', metric), {})
        cached = cache.get((u, v))
        if cached is not None:
            return cached

        a = self.profiles.get(u)
        b = self.profiles.get(v)
        if a is None or b is None:
            return None

        value = score(metric, a, b)
        cache[(u, v)] = value
        return value


    def content_score(self, metric, u):
        metric = MetricKind.parse(metric)
        cache = self.data.setdefault(('content', metric), {})
        cached = cache.get(u)
        if cached is not None:
            return cached

        profile = self.profiles.get(u)
        if profile is None or self.rumor is None:
            return None

        value = score(metric, profile, self.rumor)
        cache[u] = value
        return value


    def sims_frame(self, edges):
        rows = []
        for u, v in sorted(edges):
            a = self.profiles.get(u)
            b = self.profiles.get(v)
            if a is None or b is None:
                continue
            rows.append({'from_user_id': u, 'to_user_id': v, **similarity_row(a, b)})
        return pd.DataFrame(rows, columns=self.SIMS_COLUMNS)


    def content_sims_frame(self):
        rows = []
        if self.rumor is not None:
            for user_id in sorted(self.profiles):
                rows.append({'user_id': user_id, **similarity_row(self.profiles[user_id], self.rumor)})
        return pd.DataFrame(rows, columns=self.CONTENT_COLUMNS)
