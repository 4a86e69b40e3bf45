import json
import logging
from pathlib import Path

import pandas as pd
from mako.lookup import TemplateLookup

from rumorsim.evaluation import diffusion_curve

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / 'templates'

# diffusers red, everyone else blue
STATE_COLORS = {
    'diffuser': 'red',
    'non_diffuser': 'blue',
    'infected': 'red',
    'recovered': 'gray',
    'susceptible': 'blue',
    'adopted': 'red',
    'not_adopted': 'blue',
}

ACTIVE_STATE_NAMES = frozenset({'diffuser', 'infected', 'recovered', 'adopted'})

_templates = None


def get_templates():
    global _templates
    if _templates is None:
        _templates = TemplateLookup(directories=[str(TEMPLATE_DIR)])
    return _templates


class Output:
    use_template = None

    def __init__(self, *components):
        self.components = components

    def get_output_path(self):
        return Path(*self.components)

    @property
    def identifier(self):
        return '/'.join(str(c) for c in self.components)

    def get_context(self):
        return {}

    def render(self):
        template = get_templates().get_template(self.use_template)
        return template.render(**self.get_context())


class FrameOutput(Output):
    use_template = 'frame.dot'

    def __init__(self, step, states, edges, name='diffusion'):
        super().__init__(f'frame_{step:04d}.dot')
        self.step = step
        self.states = states
        self.edges = edges
        self.name = name

    def get_context(self):
        nodes = []
        active = 0
        for user_id in sorted(self.states):
            state = getattr(self.states[user_id], 'value', self.states[user_id])
            color = STATE_COLORS.get(state, 'black')
            if state in ACTIVE_STATE_NAMES:
                active += 1
            nodes.append((user_id, color, state))
        return {
            'name': self.name,
            'label': f'step {self.step}: {active} diffuser(s)',
            'nodes': nodes,
            'edges': self.edges,
        }


class TableOutput(Output):
    def __init__(self, file_name, frame):
        super().__init__(file_name)
        self.frame = frame

    def render(self):
        return self.frame.to_csv(index=False, lineterminator='\n')


class JsonOutput(Output):
    def __init__(self, file_name, data):
        super().__init__(file_name)
        self.data = data

    def render(self):
        return json.dumps(self.data, indent=2, sort_keys=True) + '\n'


def _plain_number(value):
    value = float(value)
    return int(value) if value.is_integer() else value


class CurveOutput(TableOutput):
    COLUMNS = ['step', 'diffusers']

    def __init__(self, curve, file_name='curve.csv'):
        rows = [(step, _plain_number(value)) for step, value in curve]
        # object dtype so whole means print as ints next to fractional ones
        super().__init__(file_name, pd.DataFrame(rows, columns=self.COLUMNS, dtype=object))


class TraceOutput(TableOutput):
    COLUMNS = ['trial', 'step', 'user_id', 'new_state']

    def __init__(self, traces, file_name='trace.csv'):
        rows = [row for trace in traces for row in trace.gen_rows()]
        super().__init__(file_name, pd.DataFrame(rows, columns=self.COLUMNS))


def frame_outputs(trace, g):
    edges = g.sorted_edges()
    for step, states in trace.gen_states():
        yield FrameOutput(step, dict(states), edges, f'trial {trace.trial}')
    yield CurveOutput(diffusion_curve(trace))


def write_outputs(outputs, out_dir):
    out_dir = Path(out_dir)
    written = []
    for output in outputs:
        rendered = output.render()
        if rendered is None:
            continue

        path = out_dir / output.get_output_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(rendered)

        logger.debug('wrote %s', path)
        written.append(path)
    return written
