import pytest

from sheafbetti import BUNDLED_FILES, create_app
from sheafbetti.commands.datafiles import load_golden, load_gv
from sheafbetti.engine.solver import invert_to_gv


@pytest.fixture
def app():
    return create_app({'TESTING': True})


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture(scope='session')
def gv_table():
    return load_gv(BUNDLED_FILES['GV_DATA_PATH'])


@pytest.fixture(scope='session')
def omega_hats():
    return {hat.d: hat for hat in load_golden(BUNDLED_FILES['GOLDEN_DATA_PATH'])}


@pytest.fixture(scope='session')
def inverted_gv(omega_hats):
    """GV rows through degree 10, read back from the bundled Omega-hat rows."""
    return invert_to_gv([omega_hats[d] for d in range(1, 11)])
