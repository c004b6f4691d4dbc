"""Gaussian-beam line-of-sight channel between ceiling APs and floor receivers"""
import logging
import math
from functools import lru_cache
import numpy as np
from models.scene import AccessPointPose
from utils.errors import ValidationError
from utils.validators import validate_non_negative

logger = logging.getLogger(__name__)


def ap_layout(array_id, array_position, pitch_m, grid=(2, 2)):
    """
    Place the APs of one array on a grid centered on the array position

    Args:
        array_id: 1-based array index
        array_position: (x, y, z) of the array on the ceiling
        pitch_m: Spacing between neighbouring APs
        grid: (cols, rows); AP ids run row-major with x varying fastest

    Returns:
        List of AccessPointPose, beams pointing straight down
    """
    cols, rows = grid
    x0, y0, z0 = array_position
    aps = []

    for row in range(rows):
        for col in range(cols):
            x = x0 + (col - (cols - 1) / 2.0) * pitch_m
            y = y0 + (row - (rows - 1) / 2.0) * pitch_m
            aps.append(AccessPointPose(
                array_id=array_id,
                ap_id=row * cols + col + 1,
                position=(x, y, z0),
                nominal_spot_center=(x, y),
            ))

    return aps


def beam_radius(beam, axial_distance_m):
    """
    Gaussian beam radius W(d) = W0 * sqrt(1 + (d / z_R)^2)

    Args:
        beam: BeamParams
        axial_distance_m: Distance from the waist along the beam axis

    Returns:
        1/e^2 radius in meters
    """
    d = validate_non_negative(axial_distance_m, 'axial_distance_m')
    z_r = beam.rayleigh_range_m
    return beam.waist_w0_m * math.sqrt(1.0 + (d / z_r) ** 2)


def beam_intensity(beam, axial_distance_m, radial_offset_m):
    """
    Transverse intensity I(r, d) = 2P / (pi W^2) * exp(-2 r^2 / W^2)

    Args:
        beam: BeamParams
        axial_distance_m: Distance from the waist
        radial_offset_m: Distance from the beam axis; scalar or array, >= 0

    Returns:
        Intensity in W/m^2 (same shape as radial_offset_m)
    """
    w = beam_radius(beam, axial_distance_m)
    r = np.asarray(radial_offset_m, dtype=float)

    if not np.all(np.isfinite(r)):
        raise ValidationError("must be finite", "radial_offset_m")
    if np.any(r < 0):
        raise ValidationError("must be >= 0", "radial_offset_m")

    peak = 2.0 * beam.total_power_w / (math.pi * w ** 2)
    intensity = peak * np.exp(-2.0 * r ** 2 / w ** 2)

    if intensity.ndim == 0:
        return float(intensity)
    return intensity


def incidence_angle_deg(ap, user):
    """Angle between the user's upward normal and the user-to-AP line of sight"""
    dx = ap.position[0] - user.position[0]
    dy = ap.position[1] - user.position[1]
    dz = ap.position[2] - user.position[2]
    distance = math.sqrt(dx * dx + dy * dy + dz * dz)

    nx, ny, nz = user.normal
    cos_angle = (dx * nx + dy * ny + dz * nz) / distance
    return math.degrees(math.acos(max(-1.0, min(1.0, cos_angle))))


def received_optical_power(beam, ap, spot_center_xy, user, rx):
    """
    Optical power collected by a user's detector from one AP

    The detector is a square of side sqrt(area) centered on the user; the
    beam intensity is integrated over it by midpoint quadrature with the
    radial offset measured from spot_center_xy. Incidence beyond the FOV
    half-angle yields exactly zero.

    Args:
        beam: BeamParams of the AP
        ap: AccessPointPose (used for the FOV gate and the vertical drop)
        spot_center_xy: Where the beam axis meets the receiving plane
        user: UserPose on the receiving plane
        rx: ReceiverParams

    Returns:
        Received optical power in watts
    """
    if incidence_angle_deg(ap, user) > rx.fov_half_angle_deg:
        return 0.0

    drop = ap.position[2] - user.position[2]
    n = rx.quadrature_points
    side = rx.side_m

    # Midpoints of an n x n grid over the aperture
    offsets = (np.arange(n) + 0.5) / n * side - side / 2.0
    xs = user.position[0] + offsets - spot_center_xy[0]
    ys = user.position[1] + offsets - spot_center_xy[1]
    r = np.sqrt(xs[:, None] ** 2 + ys[None, :] ** 2)

    cell_area = (side / n) ** 2
    return float(np.sum(beam_intensity(beam, drop, r)) * cell_area)


def electrical_signal_power(optical_power_w, rx):
    """Photocurrent power (R * P)^2 in A^2"""
    p = validate_non_negative(optical_power_w, 'optical_power_w')
    return (rx.responsivity_a_per_w * p) ** 2


def thermal_noise_power(rx):
    """Preamplifier thermal noise NSD^2 * B in A^2"""
    return rx.nsd_a_per_sqrthz ** 2 * rx.bandwidth_hz


def steered_spot_center(ap, user, max_steer_deg):
    """
    Beam-axis footprint after tilting the beam toward a user

    Users inside the steerable cone get the spot centered on them; otherwise
    the spot moves from the nominal center toward the user by
    drop * tan(max_steer_deg).

    Args:
        ap: AccessPointPose
        user: UserPose the beam is steered toward
        max_steer_deg: Largest tilt away from the nominal axis

    Returns:
        (x, y) of the spot center on the receiving plane
    """
    max_steer_deg = validate_non_negative(max_steer_deg, 'max_steer_deg')
    cx, cy = ap.nominal_spot_center
    dx = user.position[0] - cx
    dy = user.position[1] - cy
    distance = math.hypot(dx, dy)

    if max_steer_deg == 0.0 or distance == 0.0:
        return (cx, cy)

    drop = ap.position[2] - user.position[2]
    reach = drop * math.tan(math.radians(max_steer_deg))
    if distance <= reach:
        return (user.position[0], user.position[1])

    scale = reach / distance
    return (cx + dx * scale, cy + dy * scale)


def link_power(scene, ap_index, target_user, victim_user, steering_enabled):
    """
    Electrical power received by victim_user from one AP whose beam serves target_user

    Args:
        scene: Scene
        ap_index: Flat 0-based AP index
        target_user: UserPose the AP is steered toward (ignored when steering is off)
        victim_user: UserPose receiving the power
        steering_enabled: Whether beams are re-pointed toward their users

    Returns:
        Power in A^2
    """
    ap = scene.access_points[ap_index]
    if steering_enabled:
        spot = steered_spot_center(ap, target_user, scene.max_steer_deg)
    else:
        spot = ap.nominal_spot_center

    optical = received_optical_power(scene.beam, ap, spot, victim_user, scene.receiver)
    return electrical_signal_power(optical, scene.receiver)


@lru_cache(maxsize=64)
def link_power_tensor(scene, steering_enabled):
    """
    Electrical power from every AP to every user for every possible served user

    Args:
        scene: Scene (hashable, immutable)
        steering_enabled: Whether beams are steered toward their served user

    Returns:
        Read-only array P of shape (APs, K, K); P[j, u, k] is the power user
        k receives from AP j while AP j serves user u
    """
    n_aps, n_users = scene.n_aps, scene.n_users
    tensor = np.zeros((n_aps, n_users, n_users), dtype=float)

    for j in range(n_aps):
        if steering_enabled:
            for u, target in enumerate(scene.users):
                for k, victim in enumerate(scene.users):
                    tensor[j, u, k] = link_power(scene, j, target, victim, True)
        else:
            # Unsteered power does not depend on who is served
            for k, victim in enumerate(scene.users):
                tensor[j, :, k] = link_power(scene, j, victim, victim, False)

    logger.debug("Built %dx%dx%d link tensor (steering=%s)", n_aps, n_users, n_users, steering_enabled)

    tensor.setflags(write=False)
    return tensor
