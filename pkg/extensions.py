import logging
from contextvars import ContextVar
from logging.handlers import RotatingFileHandler

# Cenário em execução (injetado nos registros de log como run_id)
current_run: ContextVar[str] = ContextVar('current_run', default='-')

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s [run:%(run_id)s] %(message)s'

_library_handler: logging.Handler | None = None


class RunIdFilter(logging.Filter):
    def filter(self, record):
        try:
            record.run_id = current_run.get()
        except Exception:
            record.run_id = '-'
        return True


def init_logging(app):
    """Nível do app.logger e do logger da biblioteca; arquivo rotativo se LOG_FILE estiver definido."""
    global _library_handler
    level_name = str(app.config.get('LOG_LEVEL') or 'INFO').upper()
    level = getattr(logging, level_name, logging.INFO)
    app.logger.setLevel(level)
    library_logger = logging.getLogger('setflow')
    library_logger.setLevel(level)

    log_file = str(app.config.get('LOG_FILE') or '')
    if not log_file:
        return None
    if _library_handler is not None:
        library_logger.removeHandler(_library_handler)
        app.logger.removeHandler(_library_handler)
        _library_handler.close()
    handler = RotatingFileHandler(log_file, maxBytes=2*1024*1024, backupCount=5, encoding='utf-8')
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.addFilter(RunIdFilter())
    app.logger.addHandler(handler)
    library_logger.addHandler(handler)
    _library_handler = handler
    return handler

