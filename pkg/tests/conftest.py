"""Shared scenes for the test suite"""
import os

os.environ.setdefault('OWC_ENV', 'testing')

import pytest
from services import config_service

TOY = {
    'name': 'toy',
    'arrays': [{'position': [2.0, 2.0, 3.0], 'ap_pitch_m': 0.4}],
    'users': [[1.8, 1.8, 1.0], [2.2, 2.2, 1.0]],
}


@pytest.fixture(scope='session')
def scenario1():
    return config_service.load_preset('scenario1')


@pytest.fixture(scope='session')
def scenario2():
    return config_service.load_preset('scenario2')


@pytest.fixture(scope='session')
def scene1(scenario1):
    return config_service.build_scene(scenario1)


@pytest.fixture(scope='session')
def scene2(scenario2):
    return config_service.build_scene(scenario2)


@pytest.fixture
def toy_raw():
    """2 users under a single 2x2 array of 0.4 m pitch (12 assignments)"""
    return {
        'name': TOY['name'],
        'arrays': [dict(a) for a in TOY['arrays']],
        'users': [list(u) for u in TOY['users']],
    }


@pytest.fixture
def toy_config(toy_raw):
    return config_service.parse_config(toy_raw)


@pytest.fixture
def toy_scene(toy_config):
    return config_service.build_scene(toy_config)


@pytest.fixture(scope='session')
def beam(scenario1):
    """Default beam: W0 = 2 um, 850 nm, 4 x 5 mW"""
    return scenario1.beam


@pytest.fixture(scope='session')
def receiver(scenario1):
    """Default detector: 40 deg FOV, 55 mm^2, 0.54 A/W, 5 GHz, 4.47 pA/sqrt(Hz)"""
    return scenario1.receiver
