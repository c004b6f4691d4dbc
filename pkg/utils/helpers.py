"""Utility helper functions"""
import numpy as np


def linear_to_db(value):
    """
    Convert a power ratio to decibels

    Args:
        value: Linear ratio (scalar or array), >= 0

    Returns:
        10*log10(value); zero maps to -inf
    """
    with np.errstate(divide='ignore'):
        result = 10.0 * np.log10(value)

    if np.ndim(result) == 0:
        return float(result)
    return result


def db_to_linear(value_db):
    """Convert decibels to a linear power ratio"""
    result = np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)

    if np.ndim(result) == 0:
        return float(result)
    return result


def bits_to_index(bits):
    """
    Pack a QoS bit vector into a state index

    User 1 is the most significant bit, so (1, 0, 0, 0) -> 8.
    """
    index = 0
    for bit in bits:
        index = (index << 1) | int(bool(bit))
    return index


def index_to_bits(index, n_bits):
    """Unpack a state index into a QoS bit tuple of length n_bits"""
    return tuple((index >> (n_bits - 1 - i)) & 1 for i in range(n_bits))


def steering_label(enabled):
    """Label used in file names and CSV rows for a steering setting"""
    return 'on' if enabled else 'off'


def steering_settings(mode):
    """
    Expand a --steering flag value into the settings to run

    Args:
        mode: 'on', 'off' or 'both'

    Returns:
        Tuple of booleans, unsteered first
    """
    return {
        'off': (False,),
        'on': (True,),
        'both': (False, True),
    }[mode]


def relative_gap(a, b):
    """Relative difference |a-b| / max(|a|, |b|), 0 when both are 0"""
    scale = max(abs(a), abs(b))
    if scale == 0:
        return 0.0
    return abs(a - b) / scale
