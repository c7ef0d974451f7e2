import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    OUTPUT_DIR = os.environ.get('DIPOLAR_EIT_OUTPUT_DIR') or 'output'
    LOG_DIR = os.environ.get('DIPOLAR_EIT_LOG_DIR') or 'logs'
    LOG_LEVEL = os.environ.get('DIPOLAR_EIT_LOG_LEVEL', 'INFO').upper()

    # Grid defaults; CLI flags take precedence
    DEFAULT_NZ = int(os.environ.get('DIPOLAR_EIT_NZ') or 128)
    DEFAULT_STRIDE = int(os.environ.get('DIPOLAR_EIT_STRIDE') or 10)
    DEFAULT_THREADS = int(os.environ.get('DIPOLAR_EIT_THREADS') or 1)

    SWEEP_POINTS = 2000
    SWEEP_RANGE = (-20.0, 20.0)

    DDI_SCAN_POINTS = 1001
    DDI_SCAN_SPAN = 5.0

    LATTICE_Z_POINTS = 201
    DIFFUSION_CLOUDS = 41
    DIFFUSION_SIGMA0 = 5.0

    DEBUG = False
    TESTING = False


class DevelopmentConfig(Config):
    DEBUG = True
    TESTING = False


class ProductionConfig(Config):
    DEBUG = False
    TESTING = False


class TestingConfig(Config):
    TESTING = True
    DEFAULT_NZ = 32
    DEFAULT_STRIDE = 5
    SWEEP_POINTS = 201
    DDI_SCAN_POINTS = 101
    LATTICE_Z_POINTS = 41


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
