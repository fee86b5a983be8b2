import os
import sys
import pytest

# Ensure project root is on sys.path for imports when running via pytest
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from app import create_app
from config import TestingConfig


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: execuções na discretização de aceitação (M=512, dt=1e-3)')


@pytest.fixture
def app(tmp_path):
    app = create_app(TestingConfig)
    app.config.update({
        'TESTING': True,
        'OUTPUT_DIR': str(tmp_path / 'out'),
    })
    return app


@pytest.fixture
def runner(app):
    return app.test_cli_runner()
