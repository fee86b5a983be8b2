import logging

from app import create_app
from config import TestingConfig
from extensions import current_run


def _file_config(log_file):
    return type('FileLoggingConfig', (TestingConfig,), {'LOG_LEVEL': 'INFO', 'LOG_FILE': str(log_file)})


def test_library_log_lines_carry_run_id(tmp_path):
    log_file = tmp_path / 'setflow.log'
    app = create_app(_file_config(log_file))
    library_logger = logging.getLogger('setflow')
    logger = logging.getLogger('setflow.runner')

    token = current_run.set('ex51')
    try:
        logger.info('[Runner] ex51: teste')
    finally:
        current_run.reset(token)
    logger.info('[Runner] fora de execução')

    handlers = [h for h in library_logger.handlers if getattr(h, 'baseFilename', None) == str(log_file)]
    assert len(handlers) == 1
    handlers[0].flush()
    lines = log_file.read_text(encoding='utf-8').splitlines()
    assert any('[run:ex51] [Runner] ex51: teste' in line for line in lines)
    assert any('[run:-] [Runner] fora de execução' in line for line in lines)

    library_logger.removeHandler(handlers[0])
    app.logger.removeHandler(handlers[0])
    handlers[0].close()


def test_no_file_handler_without_log_file():
    app = create_app(TestingConfig)
    assert app.config['LOG_FILE'] == ''
    assert logging.getLogger('setflow').level == logging.WARNING
