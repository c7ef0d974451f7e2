import logging
import os
from logging.handlers import RotatingFileHandler

from config import config

__all__ = ['create_app', 'SimulationApp', '__version__']

__version__ = '0.1.0'

LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'


class SimulationApp:
    """Configuration, logger and registered subcommands of one CLI session"""

    def __init__(self, name='dipolar_eit'):
        self.name = name
        self.config = {}
        self.logger = logging.getLogger(name)
        self.commands = {}

    def config_from_object(self, obj):
        for key in dir(obj):
            if key.isupper():
                self.config[key] = getattr(obj, key)

    @property
    def debug(self):
        return bool(self.config.get('DEBUG'))

    @property
    def testing(self):
        return bool(self.config.get('TESTING'))

    def register_command(self, command):
        if command.name in self.commands:
            raise ValueError(f"Command already registered: {command.name}")
        self.commands[command.name] = command


def _configure_logging(app):
    logger = app.logger
    for handler in list(logger.handlers):
        if getattr(handler, '_dipolar_eit', False):
            logger.removeHandler(handler)
            handler.close()

    level = getattr(logging, app.config.get('LOG_LEVEL', 'INFO'), logging.INFO)
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    stream_handler.setLevel(level)
    stream_handler._dipolar_eit = True
    logger.addHandler(stream_handler)
    logger.setLevel(logging.DEBUG if app.debug else level)

    if not app.debug and not app.testing:
        log_dir = app.config['LOG_DIR']
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)

        file_handler = RotatingFileHandler(
            os.path.join(log_dir, 'dipolar_eit.log'),
            maxBytes=10240000,  # 10MB
            backupCount=10
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler.setLevel(logging.INFO)
        file_handler._dipolar_eit = True
        logger.addHandler(file_handler)
        logger.info('dipolar-eit startup')


def create_app(config_name='development'):
    app = SimulationApp()
    app.config_from_object(config[config_name])

    _configure_logging(app)

    from dipolar_eit.commands.ddi_scan import ddi_scan_cmd
    from dipolar_eit.commands.spectrum import spectrum_cmd
    from dipolar_eit.commands.propagate import propagate_cmd
    from dipolar_eit.commands.multicloud import multicloud_cmd
    from dipolar_eit.commands.diffusion_check import diffusion_check_cmd

    app.register_command(ddi_scan_cmd)
    app.register_command(spectrum_cmd)
    app.register_command(propagate_cmd)
    app.register_command(multicloud_cmd)
    app.register_command(diffusion_check_cmd)

    return app
