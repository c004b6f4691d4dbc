import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration class"""
    # Output
    OUTPUT_DIR = os.getenv('OWC_OUTPUT_DIR', 'results')
    LOG_LEVEL = os.getenv('OWC_LOG_LEVEL', 'INFO')

    # Exhaustive search fan-out
    MAX_WORKERS = int(os.getenv('OWC_MAX_WORKERS', 1))
    CHUNK_SIZE = int(os.getenv('OWC_CHUNK_SIZE', 8192))

    # Objectives closer than this (relative) count as ties
    TIE_RTOL = float(os.getenv('OWC_TIE_RTOL', 1e-9))


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.getenv('OWC_LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """Testing configuration"""
    LOG_LEVEL = os.getenv('OWC_LOG_LEVEL', 'WARNING')
    MAX_WORKERS = int(os.getenv('OWC_MAX_WORKERS', 2))
    CHUNK_SIZE = int(os.getenv('OWC_CHUNK_SIZE', 4096))


class ProductionConfig(Config):
    """Production configuration"""
    LOG_LEVEL = os.getenv('OWC_LOG_LEVEL', 'INFO')


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Get configuration based on OWC_ENV"""
    env = os.getenv('OWC_ENV', 'development')
    return config.get(env, config['default'])
