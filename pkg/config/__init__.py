# Config package for setflow
# This file makes the config directory a Python package

import os
from pathlib import Path
from dotenv import load_dotenv

# Sempre carregar o .env da raiz do projeto
PROJECT_ROOT = Path(__file__).resolve().parent.parent
load_dotenv(dotenv_path=PROJECT_ROOT / '.env')


def _env_int(name, default):
    try:
        return int(os.environ.get(name) or default)
    except ValueError:
        return default


def _env_float(name, default):
    try:
        return float(os.environ.get(name) or default)
    except ValueError:
        return default


class Config:
    # Discretização
    GRID_SIZE = _env_int('SETFLOW_GRID_SIZE', 512)
    DT = _env_float('SETFLOW_DT', 1e-3)
    QUADRATURE = os.environ.get('SETFLOW_QUADRATURE') or 'polygonal'

    # Execução de cenários
    OUTPUT_DIR = os.environ.get('SETFLOW_OUTPUT_DIR') or 'out'
    DEFAULT_SEED = _env_int('SETFLOW_SEED', 20240101)
    JOBS = _env_int('SETFLOW_JOBS', 1)
    SCENARIO_DIR = PROJECT_ROOT / 'scenarios'

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'
    LOG_FILE = os.environ.get('LOG_FILE') or ''


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'DEBUG'


class AcceptanceConfig(Config):
    # Discretização dos critérios de aceitação
    GRID_SIZE = 512
    DT = 1e-3
    QUADRATURE = 'polygonal'


class TestingConfig(Config):
    TESTING = True
    GRID_SIZE = 128
    LOG_LEVEL = 'WARNING'
    LOG_FILE = ''


config = {
    'development': DevelopmentConfig,
    'acceptance': AcceptanceConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
