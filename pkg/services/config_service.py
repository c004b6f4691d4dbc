"""Scenario loading: YAML files and built-in presets, strictly validated"""
import copy
import logging
import re
from dataclasses import replace
import yaml
from config.presets import PRESETS
from models.learning import Hyperparams
from models.scenario_config import ArraySpec, ScenarioConfig
from models.scene import RoomGeometry, BeamParams, ReceiverParams, UserPose, Scene
from services import channel_service
from utils.errors import ConfigError, ValidationError
from utils.validators import (
    validate_bool, validate_finite, validate_mapping, validate_non_negative,
    validate_positive, validate_positive_int, validate_vector
)

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = (
    'name', 'room', 'ap_grid', 'arrays', 'beam', 'receiver', 'users',
    'steering', 'threshold_db', 'slot_isolation', 'ql'
)
REQUIRED_KEYS = ('name', 'arrays', 'users')

DEFAULT_ROOM = {
    'width_m': 4.0,
    'length_m': 4.0,
    'height_m': 3.0,
    'rx_plane_height_m': 1.0,
}
DEFAULT_AP_GRID = [2, 2]
DEFAULT_AP_PITCH_M = 0.1
DEFAULT_BEAM = {
    'waist_w0_m': 2e-6,
    'wavelength_m': 850e-9,
    'vcsel_power_w': 5e-3,
    'vcsels_per_ap': 4,
}
DEFAULT_RECEIVER = {
    'fov_half_angle_deg': 40.0,
    'area_m2': 55e-6,
    'responsivity_a_per_w': 0.54,
    'bandwidth_hz': 5e9,
    'nsd_a_per_sqrthz': 4.47e-12,
    'quadrature_points': 8,
}
DEFAULT_STEERING = {
    'enabled': True,
    'max_deg': 4.0,
}
DEFAULT_THRESHOLD_DB = 15.6

QL_KEYS = (
    'alpha', 'gamma', 'epsilon0', 'epsilon_min', 'epsilon_decay', 'max_episodes',
    'convergence_tol', 'window_size', 'rng_seed', 'mode', 'explore_unvisited'
)

NAME_PATTERN = re.compile(r'^[A-Za-z0-9_.-]+$')


class _ScenarioLoader(yaml.SafeLoader):
    """SafeLoader that also reads exponent floats without a dot (5e9, 2e-6)"""


_ScenarioLoader.add_implicit_resolver(
    'tag:yaml.org,2002:float',
    re.compile(r'''^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                    |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                    |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                    |[-+]?\.(?:inf|Inf|INF)
                    |\.(?:nan|NaN|NAN))$''', re.X),
    list('-+0123456789.'))


def load_config(path):
    """
    Load and validate a scenario file

    Args:
        path: Path to a YAML scenario file

    Returns:
        ScenarioConfig

    Raises:
        ConfigError: If the file is missing, does not parse or violates the schema
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = yaml.load(f, Loader=_ScenarioLoader)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}")

    logger.info("Loaded scenario file %s", path)
    return parse_config(raw)


def load_preset(name):
    """
    Built-in scenario by name

    Raises:
        ConfigError: If the preset does not exist
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}' (choose from {', '.join(sorted(PRESETS))})")

    return parse_config(copy.deepcopy(PRESETS[name]))


def resolve_config(config_path=None, preset=None):
    """Scenario from --config or --preset; exactly one must be given"""
    if bool(config_path) == bool(preset):
        raise ConfigError("give exactly one of --config or --preset")

    if config_path:
        return load_config(config_path)
    return load_preset(preset)


def parse_config(raw):
    """
    Validate a raw mapping and fill in defaults

    Args:
        raw: Mapping as read from YAML

    Returns:
        ScenarioConfig

    Raises:
        ConfigError: Naming the dotted key path of the first problem found
    """
    try:
        config = _parse(raw)
        # Build once so geometric invariants (ceiling, footprint) are checked here
        build_scene(config)
    except ConfigError:
        raise
    except ValidationError as e:
        raise ConfigError(e.message) from e

    logger.debug("Scenario %s: %d users, %d arrays of %d APs",
                 config.name, config.n_users, config.n_arrays, config.aps_per_array)
    return config


def _parse(raw):
    validate_mapping(raw, '', TOP_LEVEL_KEYS, REQUIRED_KEYS)

    name = raw['name']
    if not isinstance(name, str) or not NAME_PATTERN.match(name):
        raise ConfigError("must be a non-empty string of letters, digits, '_', '-' or '.'", 'name')

    room = _parse_room(raw.get('room', {}))
    ap_grid = _parse_ap_grid(raw.get('ap_grid', DEFAULT_AP_GRID))
    arrays = _parse_arrays(raw['arrays'])
    beam, vcsel_power_w, vcsels_per_ap = _parse_beam(raw.get('beam', {}))
    receiver = _parse_receiver(raw.get('receiver', {}))
    users = _parse_users(raw['users'])
    steering = _with_defaults(raw.get('steering', {}), 'steering', DEFAULT_STEERING)

    n_aps = len(arrays) * ap_grid[0] * ap_grid[1]
    if len(users) > n_aps:
        raise ConfigError(
            f"{len(users)} users but only {n_aps} access points (K <= L*N required)", 'users')

    return ScenarioConfig(
        name=name,
        room=room,
        ap_grid=ap_grid,
        arrays=arrays,
        beam=beam,
        vcsel_power_w=vcsel_power_w,
        vcsels_per_ap=vcsels_per_ap,
        receiver=receiver,
        users=users,
        steering_enabled=validate_bool(steering['enabled'], 'steering.enabled'),
        max_steer_deg=validate_non_negative(steering['max_deg'], 'steering.max_deg'),
        threshold_db=validate_finite(raw.get('threshold_db', DEFAULT_THRESHOLD_DB), 'threshold_db'),
        slot_isolation=validate_bool(raw.get('slot_isolation', False), 'slot_isolation'),
        ql=_parse_ql(raw.get('ql', {})),
    )


def _with_defaults(section, key_path, defaults, required=()):
    validate_mapping(section, key_path, tuple(defaults), required)
    merged = dict(defaults)
    merged.update(section)
    return merged


def _parse_room(section):
    room = _with_defaults(section, 'room', DEFAULT_ROOM)
    return RoomGeometry(
        width_m=validate_finite(room['width_m'], 'room.width_m'),
        length_m=validate_finite(room['length_m'], 'room.length_m'),
        height_m=validate_finite(room['height_m'], 'room.height_m'),
        rx_plane_height_m=validate_finite(room['rx_plane_height_m'], 'room.rx_plane_height_m'),
    )


def _parse_ap_grid(value):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError("expected [cols, rows]", 'ap_grid')

    cols = validate_positive_int(value[0], 'ap_grid[0]')
    rows = validate_positive_int(value[1], 'ap_grid[1]')
    return (cols, rows)


def _parse_arrays(value):
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of arrays", 'arrays')

    arrays = []
    for i, item in enumerate(value):
        key = f"arrays[{i}]"
        validate_mapping(item, key, ('position', 'ap_pitch_m'), ('position',))
        arrays.append(ArraySpec(
            position=validate_vector(item['position'], f"{key}.position", 3),
            ap_pitch_m=validate_positive(item.get('ap_pitch_m', DEFAULT_AP_PITCH_M), f"{key}.ap_pitch_m"),
        ))
    return tuple(arrays)


def _parse_beam(section):
    beam = _with_defaults(section, 'beam', DEFAULT_BEAM)
    vcsel_power_w = validate_positive(beam['vcsel_power_w'], 'beam.vcsel_power_w')
    vcsels_per_ap = validate_positive_int(beam['vcsels_per_ap'], 'beam.vcsels_per_ap')

    # The VCSELs of one AP are lumped into a single co-located beam
    params = BeamParams(
        waist_w0_m=validate_finite(beam['waist_w0_m'], 'beam.waist_w0_m'),
        wavelength_m=validate_finite(beam['wavelength_m'], 'beam.wavelength_m'),
        total_power_w=vcsel_power_w * vcsels_per_ap,
    )
    return params, vcsel_power_w, vcsels_per_ap


def _parse_receiver(section):
    rx = _with_defaults(section, 'receiver', DEFAULT_RECEIVER)
    return ReceiverParams(
        fov_half_angle_deg=validate_finite(rx['fov_half_angle_deg'], 'receiver.fov_half_angle_deg'),
        area_m2=validate_finite(rx['area_m2'], 'receiver.area_m2'),
        responsivity_a_per_w=validate_finite(rx['responsivity_a_per_w'], 'receiver.responsivity_a_per_w'),
        bandwidth_hz=validate_finite(rx['bandwidth_hz'], 'receiver.bandwidth_hz'),
        nsd_a_per_sqrthz=validate_finite(rx['nsd_a_per_sqrthz'], 'receiver.nsd_a_per_sqrthz'),
        quadrature_points=rx['quadrature_points'],
    )


def _parse_users(value):
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of [x, y, z] positions", 'users')

    return tuple(
        UserPose(user_id=i + 1, position=validate_vector(item, f"users[{i}]", 3))
        for i, item in enumerate(value)
    )


def _parse_ql(section):
    validate_mapping(section, 'ql', QL_KEYS)
    try:
        return Hyperparams(**section)
    except TypeError as e:
        raise ConfigError(str(e), 'ql')


def build_scene(config):
    """
    Lay out every array's APs and assemble the Scene

    Args:
        config: ScenarioConfig

    Returns:
        Scene
    """
    access_points = []
    for array_id, spec in enumerate(config.arrays, start=1):
        access_points.extend(channel_service.ap_layout(
            array_id, spec.position, spec.ap_pitch_m, config.ap_grid))

    return Scene(
        room=config.room,
        beam=config.beam,
        receiver=config.receiver,
        access_points=tuple(access_points),
        users=config.users,
        n_arrays=config.n_arrays,
        aps_per_array=config.aps_per_array,
        max_steer_deg=config.max_steer_deg,
        slot_isolation=config.slot_isolation,
    )


def with_seed(config, seed):
    """Copy of the config whose Q-learning runs use rng_seed=seed"""
    if seed is None:
        return config

    return replace(config, ql=replace(config.ql, rng_seed=seed))
