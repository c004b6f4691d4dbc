"""Input validation functions"""
import math
from numbers import Real
from utils.errors import ValidationError


def validate_finite(value, key_path):
    """Validate that value is a real, finite number and return it as float"""
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ValidationError(f"expected a number, got {type(value).__name__}", key_path)

    value = float(value)
    if not math.isfinite(value):
        raise ValidationError("must be finite", key_path)

    return value


def validate_positive(value, key_path):
    """Validate a strictly positive finite number"""
    value = validate_finite(value, key_path)

    if value <= 0:
        raise ValidationError(f"must be > 0, got {value}", key_path)

    return value


def validate_non_negative(value, key_path):
    """Validate a finite number >= 0"""
    value = validate_finite(value, key_path)

    if value < 0:
        raise ValidationError(f"must be >= 0, got {value}", key_path)

    return value


def validate_range(value, key_path, low, high, low_inclusive=True, high_inclusive=True):
    """
    Validate that low <= value <= high (bounds optionally exclusive)

    Args:
        value: Number to check
        key_path: Dotted path used in the error message
        low: Lower bound
        high: Upper bound
        low_inclusive: Whether value may equal low
        high_inclusive: Whether value may equal high

    Returns:
        The value as float
    """
    value = validate_finite(value, key_path)

    low_ok = value >= low if low_inclusive else value > low
    high_ok = value <= high if high_inclusive else value < high

    if not (low_ok and high_ok):
        left = '[' if low_inclusive else '('
        right = ']' if high_inclusive else ')'
        raise ValidationError(f"must be in {left}{low}, {high}{right}, got {value}", key_path)

    return value


def validate_positive_int(value, key_path):
    """Validate an integer >= 1"""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {type(value).__name__}", key_path)

    if value < 1:
        raise ValidationError(f"must be >= 1, got {value}", key_path)

    return value


def validate_bool(value, key_path):
    """Validate a boolean flag"""
    if not isinstance(value, bool):
        raise ValidationError(f"expected true/false, got {value!r}", key_path)

    return value


def validate_vector(value, key_path, length):
    """Validate a list of `length` finite numbers and return it as a tuple of floats"""
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise ValidationError(f"expected a list of {length} numbers", key_path)

    return tuple(validate_finite(v, f"{key_path}[{i}]") for i, v in enumerate(value))


def validate_mapping(data, key_path, allowed_keys, required_keys=()):
    """
    Validate a mapping against a strict key set

    Args:
        data: Mapping to validate
        key_path: Dotted path of the mapping ('' for the document root)
        allowed_keys: Keys that may appear
        required_keys: Keys that must appear

    Returns:
        The mapping
    """
    if not isinstance(data, dict):
        raise ValidationError("expected a mapping", key_path or '<root>')

    prefix = f"{key_path}." if key_path else ''

    unknown = sorted(str(k) for k in data if k not in allowed_keys)
    if unknown:
        raise ValidationError("unknown key", prefix + unknown[0])

    missing = [k for k in required_keys if k not in data]
    if missing:
        raise ValidationError("missing required key", prefix + missing[0])

    return data
