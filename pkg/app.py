import os
from flask import Flask
from flask.cli import FlaskGroup
from config import Config, config
from extensions import init_logging
from blueprints.scenarios import scenarios_bp
from blueprints.geom import geom_bp


def _config_from_env():
    name = (os.environ.get('SETFLOW_CONFIG') or 'default').lower()
    return config.get(name, config['default'])


def create_app(config_class=Config):
    app = Flask(__name__)
    app.config.from_object(config_class)
    try:
        app.config['TESTING'] = getattr(config_class, 'TESTING', app.config.get('TESTING', False))
    except Exception:
        pass

    # Logging (app.logger + logger da biblioteca setflow)
    init_logging(app)

    # Registrar blueprints (comandos de linha de comando)
    app.register_blueprint(scenarios_bp)
    app.register_blueprint(geom_bp)

    app.logger.debug('setflow: grade=%s dt=%s quadratura=%s', app.config['GRID_SIZE'], app.config['DT'],
                     app.config['QUADRATURE'])
    return app


cli = FlaskGroup(
    name='setflow',
    create_app=lambda: create_app(_config_from_env()),
    add_default_commands=False,
    add_version_option=False,
    load_dotenv=False,
    help='Semifluxos de conjuntos convexos: cenários, certificados e geometria.',
)


if __name__ == '__main__':
    cli()
