import json
import logging
import time
from pathlib import Path

from rumorsim.config import ModelKind, build_config, load_config
from rumorsim.errors import ConfigurationError
from rumorsim.evaluation import eval_rows, metric_sweep
from rumorsim.gated import GateMode, load_decisions
from rumorsim.graph import load_edges, load_rumor, load_users, validate
from rumorsim.models import initial_beliefs
from rumorsim.outputs import CurveOutput, JsonOutput, TableOutput, TraceOutput, write_outputs
from rumorsim.score_cache import ScoreCache
from rumorsim.simulator import export_frames, load_edge_probabilities, read_traces, run_trials

logger = logging.getLogger(__name__)


class Rumorsim:
    TRACE_FILE = 'trace.csv'
    CURVE_FILE = 'curve.csv'
    SUMMARY_FILE = 'summary.json'
    EVAL_FILE = 'eval.json'
    SIMS_FILE = 'sims.csv'
    CONTENT_SIMS_FILE = 'content_sims.csv'
    VALIDATION_FILE = 'validation.json'

    def __init__(self, config):
        config.require('edges_path')
        self.config = config

        self.profiles = load_users(config.users_path, config.max_time) if config.users_path else {}

        # users only present in the profiles file stay as isolated nodes
        self.graph = load_edges(config.edges_path).with_nodes(self.profiles)

        self.rumor = load_rumor(config.rumor_path) if config.rumor_path else None
        self.decisions = load_decisions(config.decisions_path) if config.decisions_path else None

        self.cache = ScoreCache(self.profiles, self.rumor)
        if config.sims_path:
            self.cache.load(config.sims_path)

        self.edge_probs = None
        if config.ic_probs_path:
            self.edge_probs = load_edge_probabilities(config.ic_probs_path, config.ic_default_p)


    @classmethod
    def from_config_file(cls, path, overrides=None):
        return cls(load_config(path, overrides))


    @property
    def output_path(self):
        return Path(self.config.output_dir)


    def _gate_mode(self):
        if self.config.model is ModelKind.GATED_USER_CONTENT:
            if self.rumor is None:
                raise ConfigurationError('model gated_user_content needs rumor_path')
            return GateMode.USER_CONTENT
        if self.config.model is ModelKind.GATED_USER_USER:
            return GateMode.USER_USER
        raise ConfigurationError(f"evaluation needs a gated model, got '{self.config.model.value}'")


    def simulate(self):
        started = time.perf_counter()
        result = run_trials(self.config, self.graph, self.profiles, self.rumor, self.cache, self.decisions, self.edge_probs)
        runtime = time.perf_counter() - started

        finals = [trace.counts[-1] for trace in result.traces]
        summary = {
            'config': self.config.echo(),
            'nodes': len(self.graph.nodes),
            'edges': len(self.graph.edges),
            'initial_diffusers': len(self.config.initials),
            'final_diffusers': finals,
            'mean_final_diffusers': sum(finals) / len(finals),
            'runtime_seconds': round(runtime, 6),
        }

        outputs = [
            TraceOutput(result.traces, self.TRACE_FILE),
            CurveOutput(enumerate(result.curve), self.CURVE_FILE),
            JsonOutput(self.SUMMARY_FILE, summary),
        ]
        return write_outputs(outputs, self.output_path)


    def evaluate(self):
        mode = self._gate_mode()
        table = metric_sweep(self.graph, self.profiles, self.rumor, self.config.initials, self.config.metrics,
                             self.config.threshold, mode, self.cache, self.decisions)
        for metric, report in table.items():
            logger.info('%-14s accuracy %.4f%%  error %.4f%%  predicted %d', metric, 100 * report.accuracy, 100 * report.error, report.predicted_count)
        return write_outputs([JsonOutput(self.EVAL_FILE, eval_rows(table))], self.output_path)


    def similarity(self):
        outputs = [TableOutput(self.SIMS_FILE, self.cache.sims_frame(self.graph.edges))]
        if self.rumor is not None:
            outputs.append(TableOutput(self.CONTENT_SIMS_FILE, self.cache.content_sims_frame()))
        return write_outputs(outputs, self.output_path)


    def validate(self):
        report = validate(self.graph, self.profiles)
        if report.is_empty:
            logger.info('dataset is consistent')
        else:
            logger.warning('%d edge endpoint(s) without profile, %d empty topic set(s), %d isolated node(s)',
                           len(report.missing_profiles), len(report.empty_topics), len(report.isolated_nodes))
        return report, write_outputs([JsonOutput(self.VALIDATION_FILE, report.as_dict())], self.output_path)


    def export(self, trace_path, out_dir, trial=0):
        traces = read_traces(trace_path, self.graph.nodes, self.config.model, self.config.max_time)
        chosen = [trace for trace in traces if trace.trial == trial]
        if not chosen:
            raise ConfigurationError(f'{trace_path}: no trial {trial} in trace')
        return export_frames(chosen[0], self.graph, out_dir)


    @classmethod
    def for_trace(cls, trace_path, config_path=None, overrides=None):
        # without an explicit config, reuse the one echoed into summary.json beside the trace
        if config_path is not None:
            return cls.from_config_file(config_path, overrides)

        summary_path = Path(trace_path).parent / cls.SUMMARY_FILE
        with open(summary_path, 'r', encoding='utf-8') as f:
            try:
                raw = json.load(f)['config']
            except (ValueError, KeyError) as e:
                raise ConfigurationError(f'{summary_path}: no usable config echo ({e})')
        raw.update(overrides or {})
        return cls(build_config(raw, summary_path))


    def belief_state(self):
        return initial_beliefs(self.graph.nodes, self.config.initials, self.config.forceful, self.config.epsilon)
