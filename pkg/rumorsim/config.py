"""Flat `key = value` config files, validated by SimulationConfig."""
from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from rumorsim.errors import ConfigurationError
from rumorsim.rng import MAX_SEED
from rumorsim.similarity import MetricKind

logger = logging.getLogger(__name__)


class ModelKind(str, Enum):
    GATED_USER_USER = 'gated_user_user'
    GATED_USER_CONTENT = 'gated_user_content'
    SIR = 'sir'
    TIPPING = 'tipping'
    IC = 'ic'

    @property
    def is_gated(self):
        return self in (ModelKind.GATED_USER_USER, ModelKind.GATED_USER_CONTENT)


class EvaluationPolicy(str, Enum):
    ONCE = 'once' # evaluate only at the wake-up step
    EVERY_STEP = 'every_step' # re-evaluate every step after waking up


DEFAULT_METRICS = (MetricKind.COSINE, MetricKind.JACCARD_SET, MetricKind.DICE, MetricKind.AVERAGE)

PATH_KEYS = ('edges_path', 'users_path', 'rumor_path', 'decisions_path', 'sims_path', 'ic_probs_path', 'output_dir')


def _split(value):
    if isinstance(value, str):
        return [part.strip() for part in value.split(',') if part.strip()]
    return value


def _token(value):
    if isinstance(value, str):
        return value.strip().lower().replace('-', '_')
    return value


class SimulationConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True, protected_namespaces=())

    max_time: int = Field(1296, ge=1)
    trials: int = Field(2, ge=1)
    seed: int = Field(0, ge=0, le=MAX_SEED)

    model: ModelKind = ModelKind.GATED_USER_USER
    metric: MetricKind = MetricKind.COSINE
    threshold: float = Field(0.5, ge=0.0, le=1.0)
    evaluation_policy: EvaluationPolicy = EvaluationPolicy.ONCE
    metrics: Tuple[MetricKind, ...] = DEFAULT_METRICS

    beta: float = Field(0.5, ge=0.0, le=1.0)
    gamma: float = Field(0.0, ge=0.0, le=1.0)
    theta: float = Field(0.5, ge=0.0, le=1.0)
    ic_default_p: float = Field(0.1, ge=0.0, le=1.0)
    epsilon: float = Field(0.1, ge=0.0, le=1.0)

    initials: Tuple[int, ...] = ()
    forceful: Tuple[int, ...] = ()

    edges_path: Optional[Path] = None
    users_path: Optional[Path] = None
    rumor_path: Optional[Path] = None
    decisions_path: Optional[Path] = None
    sims_path: Optional[Path] = None
    ic_probs_path: Optional[Path] = None
    output_dir: Path = Path('out')

    @field_validator('model', 'evaluation_policy', mode='before')
    @classmethod
    def _normalize_token(cls, value):
        return _token(value)

    @field_validator('metric', mode='before')
    @classmethod
    def _parse_metric(cls, value):
        return MetricKind.parse(value)

    @field_validator('metrics', mode='before')
    @classmethod
    def _parse_metrics(cls, value):
        metrics = [MetricKind.parse(m) for m in _split(value)]
        if not metrics:
            raise ValueError('at least one metric is required')
        return metrics

    @field_validator('initials', 'forceful', mode='before')
    @classmethod
    def _parse_ids(cls, value):
        return _split(value)

    @field_validator('initials', 'forceful')
    @classmethod
    def _check_ids(cls, value):
        for user_id in value:
            if not 0 <= user_id <= MAX_SEED:
                raise ValueError(f'user id {user_id} is outside the unsigned 64-bit range')
        return tuple(sorted(set(value)))

    @field_validator(*PATH_KEYS, mode='before')
    @classmethod
    def _empty_path(cls, value):
        if isinstance(value, str) and not value.strip():
            return None
        return value


    def resolve_paths(self, base_dir):
        base_dir = Path(base_dir)
        update = {}
        for key in PATH_KEYS:
            value = getattr(self, key)
            if value is not None and not value.is_absolute():
                update[key] = base_dir / value
        return self.model_copy(update=update)


    def require(self, *keys):
        missing = [key for key in keys if getattr(self, key) is None]
        if missing:
            raise ConfigurationError(f"missing config key(s): {', '.join(missing)}")


    def echo(self):
        return self.model_dump(mode='json')


CONFIG_KEYS = frozenset(SimulationConfig.model_fields)


def parse_config_text(text, source='<config>'):
    raw = {}
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue

        key, sep, value = stripped.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigurationError(f"{source}:{line_no}: expected 'key = value', got '{stripped}'")
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{source}:{line_no}: unknown key '{key}'")
        if key in raw:
            raise ConfigurationError(f"{source}:{line_no}: duplicate key '{key}'")
        raw[key] = value.strip()
    return raw


def _format_validation_error(e):
    problems = []
    for error in e.errors():
        loc = '.'.join(str(part) for part in error['loc'])
        problems.append(f'{loc}: {error["msg"]}')
    return '; '.join(problems)


def build_config(raw, source='<config>'):
    try:
        return SimulationConfig(**raw)
    except ValidationError as e:
        raise ConfigurationError(f'{source}: {_format_validation_error(e)}')


def parse_overrides(pairs):
    overrides = {}
    for pair in pairs or ():
        key, sep, value = pair.partition('=')
        key = key.strip()
        if not sep or key not in CONFIG_KEYS:
            raise ConfigurationError(f"bad override '{pair}', expected a known 'key=value'")
        overrides[key] = value.strip()
    return overrides


def load_config(path, overrides=None):
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ConfigurationError(f'{path}: not valid UTF-8: {e}')
    raw = parse_config_text(text, path)

    raw.update(overrides or {})
    config = build_config(raw, path).resolve_paths(path.parent)
    logger.debug('%s: loaded config for model %s', path, config.model.value)
    return config
