"""Room, transmitter and receiver description of an optical wireless cell"""
import math
from dataclasses import dataclass, field, replace
from utils.errors import ValidationError
from utils.validators import (
    validate_positive, validate_non_negative, validate_range, validate_positive_int
)

# Tolerance for "lies on the ceiling / receiving plane" checks (meters)
PLANE_TOL_M = 1e-9


@dataclass(frozen=True)
class RoomGeometry:
    """Empty rectangular room; the receiving plane sits rx_plane_height_m above the floor"""
    width_m: float
    length_m: float
    height_m: float
    rx_plane_height_m: float

    def __post_init__(self):
        validate_positive(self.width_m, 'room.width_m')
        validate_positive(self.length_m, 'room.length_m')
        validate_positive(self.height_m, 'room.height_m')
        validate_range(self.rx_plane_height_m, 'room.rx_plane_height_m', 0.0, self.height_m,
                       low_inclusive=False, high_inclusive=False)

    def contains_xy(self, x, y):
        return -PLANE_TOL_M <= x <= self.width_m + PLANE_TOL_M and \
            -PLANE_TOL_M <= y <= self.length_m + PLANE_TOL_M


@dataclass(frozen=True)
class BeamParams:
    """Gaussian beam of one access point (all of its VCSELs lumped together)"""
    waist_w0_m: float
    wavelength_m: float
    total_power_w: float

    def __post_init__(self):
        validate_positive(self.waist_w0_m, 'beam.waist_w0_m')
        validate_positive(self.wavelength_m, 'beam.wavelength_m')
        validate_positive(self.total_power_w, 'beam.total_power_w')

    @property
    def rayleigh_range_m(self):
        return math.pi * self.waist_w0_m ** 2 / self.wavelength_m

    def scaled(self, factor):
        """Copy with the optical power multiplied by factor"""
        return replace(self, total_power_w=self.total_power_w * factor)


@dataclass(frozen=True)
class ReceiverParams:
    """Photodetector front end"""
    fov_half_angle_deg: float
    area_m2: float
    responsivity_a_per_w: float
    bandwidth_hz: float
    nsd_a_per_sqrthz: float
    quadrature_points: int = 8

    def __post_init__(self):
        validate_range(self.fov_half_angle_deg, 'receiver.fov_half_angle_deg', 0.0, 90.0,
                       low_inclusive=False, high_inclusive=False)
        validate_positive(self.area_m2, 'receiver.area_m2')
        validate_positive(self.responsivity_a_per_w, 'receiver.responsivity_a_per_w')
        validate_positive(self.bandwidth_hz, 'receiver.bandwidth_hz')
        validate_positive(self.nsd_a_per_sqrthz, 'receiver.nsd_a_per_sqrthz')
        validate_positive_int(self.quadrature_points, 'receiver.quadrature_points')

    @property
    def side_m(self):
        """Side of the square, axis-aligned detector aperture"""
        return math.sqrt(self.area_m2)


@dataclass(frozen=True)
class AccessPointPose:
    """One AP: array_id and ap_id are 1-based, position is on the ceiling"""
    array_id: int
    ap_id: int
    position: tuple
    nominal_spot_center: tuple

    @property
    def label(self):
        return f"{self.array_id}:{self.ap_id}"


@dataclass(frozen=True)
class UserPose:
    """Receiver on the receiving plane with an upward-facing detector"""
    user_id: int
    position: tuple
    normal: tuple = field(default=(0.0, 0.0, 1.0))


@dataclass(frozen=True)
class Scene:
    """
    Everything the channel and SINR models need for one evaluation

    access_points is ordered array-major: index j belongs to array
    j // aps_per_array + 1 and AP j % aps_per_array + 1.
    """
    room: RoomGeometry
    beam: BeamParams
    receiver: ReceiverParams
    access_points: tuple
    users: tuple
    n_arrays: int
    aps_per_array: int
    max_steer_deg: float = 4.0
    slot_isolation: bool = False

    def __post_init__(self):
        validate_positive_int(self.n_arrays, 'arrays')
        validate_positive_int(self.aps_per_array, 'ap_grid')
        validate_non_negative(self.max_steer_deg, 'steering.max_deg')

        if len(self.access_points) != self.n_arrays * self.aps_per_array:
            raise ValidationError(
                f"expected {self.n_arrays * self.aps_per_array} access points, "
                f"got {len(self.access_points)}", 'arrays')

        for j, ap in enumerate(self.access_points):
            key = f"arrays[{j // self.aps_per_array}]"
            expected = (j // self.aps_per_array + 1, j % self.aps_per_array + 1)
            if (ap.array_id, ap.ap_id) != expected:
                raise ValidationError(f"access point {j} is out of array-major order", key)
            if abs(ap.position[2] - self.room.height_m) > PLANE_TOL_M:
                raise ValidationError("access points must sit on the ceiling", f"{key}.position")
            if not self.room.contains_xy(*ap.nominal_spot_center):
                raise ValidationError(f"spot center of AP {ap.label} lies outside the room", key)

        for i, user in enumerate(self.users):
            key = f"users[{i}]"
            if user.user_id != i + 1:
                raise ValidationError("user ids must be 1..K in order", key)
            if abs(user.position[2] - self.room.rx_plane_height_m) > PLANE_TOL_M:
                raise ValidationError("users must lie on the receiving plane", key)
            if not self.room.contains_xy(user.position[0], user.position[1]):
                raise ValidationError("user lies outside the room footprint", key)

    @property
    def n_users(self):
        return len(self.users)

    @property
    def n_aps(self):
        return len(self.access_points)

    def ap_index(self, array_id, ap_id):
        """Flat 0-based index of (array_id, ap_id)"""
        if not (1 <= array_id <= self.n_arrays and 1 <= ap_id <= self.aps_per_array):
            raise ValidationError(f"no access point {array_id}:{ap_id}")
        return (array_id - 1) * self.aps_per_array + (ap_id - 1)

    def with_users(self, users):
        """Copy of the scene with a different user population"""
        return replace(self, users=tuple(users))

    def with_beam(self, beam):
        return replace(self, beam=beam)
