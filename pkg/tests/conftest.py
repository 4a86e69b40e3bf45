import shutil
from pathlib import Path

import pytest

from rumorsim.config import load_config
from rumorsim.graph import load_edges, load_rumor, load_users

FIXTURES = Path(__file__).parent / 'fixtures'


@pytest.fixture
def fixture_dir(tmp_path):
    """A writable copy of the bundled ten user dataset."""
    target = tmp_path / 'dataset'
    shutil.copytree(FIXTURES, target)
    return target


@pytest.fixture
def fixture_config(fixture_dir):
    return load_config(fixture_dir / 'simulate.cfg')


@pytest.fixture
def fixture_profiles():
    return load_users(FIXTURES / 'users.csv')


@pytest.fixture
def fixture_graph(fixture_profiles):
    return load_edges(FIXTURES / 'edges.csv').with_nodes(fixture_profiles)


@pytest.fixture
def fixture_rumor():
    return load_rumor(FIXTURES / 'rumor.txt')


@pytest.fixture
def write_csv(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return write
