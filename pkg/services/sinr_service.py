"""SINR evaluation of user to AP assignments"""
import logging
import numpy as np
from models.assignment import SinrRow, SinrReport, Violation
from models.scene import UserPose
from services import channel_service
from utils.errors import AssignmentError
from utils.helpers import linear_to_db
from utils.validators import validate_positive

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD_DB = 15.6


def check_assignment(assignment, scene):
    """
    Reject assignments that do not fit the scene or reuse an AP

    Raises:
        AssignmentError: On wrong user count, unknown AP or a shared AP
    """
    if assignment.n_users != scene.n_users:
        raise AssignmentError(
            f"assignment covers {assignment.n_users} users, scene has {scene.n_users}")

    seen = {}
    for k, pair in enumerate(assignment.pairs, start=1):
        if pair is None:
            continue
        array_id, ap_id = pair
        if not (1 <= array_id <= scene.n_arrays and 1 <= ap_id <= scene.aps_per_array):
            raise AssignmentError(f"user {k} is assigned to unknown access point {array_id}:{ap_id}")
        if pair in seen:
            raise AssignmentError(
                f"access point {array_id}:{ap_id} serves both user {seen[pair]} and user {k}")
        seen[pair] = k


def active_aps(assignment):
    """
    Access points that currently serve a user

    Args:
        assignment: Assignment with no AP shared between users

    Returns:
        Set of (array_id, ap_id)

    Raises:
        AssignmentError: If two users share an AP
    """
    active = set()
    for k, pair in enumerate(assignment.pairs, start=1):
        if pair is None:
            continue
        if pair in active:
            raise AssignmentError(f"access point {pair[0]}:{pair[1]} serves more than one user (user {k})")
        active.add(tuple(pair))
    return active


def sinr_matrix(scene, actions, steering_enabled):
    """
    Vectorized per-user SINR for a batch of assignments

    Idle APs contribute nothing; every other active AP is interference, its
    beam steered toward its own user when steering is enabled. With
    scene.slot_isolation, APs of the serving array are not counted.

    Args:
        scene: Scene
        actions: int array (A, K) of flat AP indices, -1 for unassigned
        steering_enabled: Whether beams are steered

    Returns:
        Tuple (signal, interference, noise, sinr_linear); the first, second
        and last are (A, K) arrays, noise is a float. Unassigned users get 0.
    """
    actions = np.atleast_2d(np.asarray(actions, dtype=np.int64))
    tensor = channel_service.link_power_tensor(scene, steering_enabled)
    noise = channel_service.thermal_noise_power(scene.receiver)

    n_users = scene.n_users
    users = np.arange(n_users)
    assigned = actions >= 0
    safe = np.where(assigned, actions, 0)

    # contrib[a, u, k]: power at user k from the AP serving user u
    contrib = tensor[safe, users[None, :]] * assigned[:, :, None]
    signal = contrib[:, users, users] * assigned

    off_diagonal = ~np.eye(n_users, dtype=bool)
    mask = np.broadcast_to(off_diagonal, contrib.shape)
    if scene.slot_isolation:
        array_of = safe // scene.aps_per_array
        same_array = array_of[:, :, None] == array_of[:, None, :]
        mask = mask & ~same_array

    interference = np.where(mask, contrib, 0.0).sum(axis=1) * assigned
    with np.errstate(divide='ignore', invalid='ignore'):
        sinr = np.where(assigned, signal / (interference + noise), 0.0)

    return signal, interference, noise, sinr


def evaluate_assignment(assignment, scene, steering_enabled):
    """
    Full SINR report for an assignment (rows for assigned users only)

    Args:
        assignment: Assignment
        scene: Scene
        steering_enabled: Whether beams are steered toward their users

    Returns:
        SinrReport
    """
    check_assignment(assignment, scene)
    flat = assignment.to_flat(scene.aps_per_array)
    signal, interference, noise, sinr = sinr_matrix(scene, [flat], steering_enabled)

    rows = []
    for k, pair in enumerate(assignment.pairs):
        if pair is None:
            continue
        rows.append(SinrRow(
            user_id=k + 1,
            array_id=pair[0],
            ap_id=pair[1],
            signal_a2=float(signal[0, k]),
            interference_a2=float(interference[0, k]),
            noise_a2=float(noise),
            sinr_linear=float(sinr[0, k]),
            sinr_db=linear_to_db(float(sinr[0, k])),
        ))

    total = float(np.sum([row.sinr_linear for row in rows]))
    return SinrReport(
        rows=tuple(rows),
        sum_sinr_linear=total,
        sum_sinr_db=linear_to_db(total),
        sum_user_sinr_db=float(np.sum([row.sinr_db for row in rows])),
        steering_enabled=steering_enabled,
    )


def sinr_of_user(user_id, assignment, scene, steering_enabled):
    """
    SINR row of one user

    Raises:
        AssignmentError: If the user is not assigned
    """
    assignment.serving(user_id)
    return evaluate_assignment(assignment, scene, steering_enabled).row(user_id)


def sum_sinr(assignment, scene, steering_enabled):
    """
    Objective value: sum of linear per-user SINR

    Raises:
        AssignmentError: If any user is unassigned
    """
    require_complete(assignment)
    return evaluate_assignment(assignment, scene, steering_enabled).sum_sinr_linear


def require_complete(assignment):
    """Raise AssignmentError naming the first unassigned user, if any"""
    if not assignment.is_complete:
        missing = [k for k, pair in enumerate(assignment.pairs, start=1) if pair is None]
        raise AssignmentError(f"user {missing[0]} is not assigned to any access point")


def qos_vector(report, threshold_db=DEFAULT_THRESHOLD_DB):
    """QoS bit per report row: 1 iff sinr_db >= threshold_db"""
    return tuple(1 if row.sinr_db >= threshold_db else 0 for row in report.rows)


def is_feasible(assignment, report, threshold_db=DEFAULT_THRESHOLD_DB):
    """
    Check the single-AP, exclusive-AP and minimum-SINR constraints

    Args:
        assignment: Assignment to check
        report: SinrReport for the assigned users, or None to skip the SINR check
        threshold_db: Minimum SINR per user

    Returns:
        Tuple (feasible, violations)
    """
    violations = []

    for k, pair in enumerate(assignment.pairs, start=1):
        if pair is None:
            violations.append(Violation(
                constraint='user_unassigned',
                message=f"user {k} is not assigned to exactly one access point",
                user_id=k,
            ))

    users_by_ap = {}
    for k, pair in enumerate(assignment.pairs, start=1):
        if pair is not None:
            users_by_ap.setdefault(tuple(pair), []).append(k)

    for ap, users in sorted(users_by_ap.items()):
        if len(users) > 1:
            violations.append(Violation(
                constraint='ap_shared',
                message=f"access point {ap[0]}:{ap[1]} serves users {users}",
                ap=ap,
            ))

    if report is not None:
        for row in report.rows:
            if not row.sinr_db >= threshold_db:
                violations.append(Violation(
                    constraint='sinr_below_threshold',
                    message=f"user {row.user_id} has {row.sinr_db:.2f} dB < {threshold_db} dB",
                    user_id=row.user_id,
                    ap=(row.array_id, row.ap_id),
                ))

    return len(violations) == 0, violations


def steering_gain(assignment, scene):
    """
    A fixed assignment evaluated without and then with steering

    The assignment is chosen once; steering is only applied afterwards.

    Returns:
        Tuple (unsteered SinrReport, steered SinrReport)
    """
    return evaluate_assignment(assignment, scene, False), evaluate_assignment(assignment, scene, True)


def probe_coverage(scene, grid_step_m, steering_enabled):
    """
    Best single-user SINR over the receiving plane

    A lone probe receiver is placed at the center of every grid cell; with
    no other user there is no interference, so SINR is the strongest AP's
    power over the noise.

    Args:
        scene: Scene (its users are ignored)
        grid_step_m: Cell size in meters
        steering_enabled: Whether the serving beam is steered toward the probe

    Returns:
        List of dicts with x, y, best_ap ('array:ap') and sinr_db
    """
    step = validate_positive(grid_step_m, 'grid_step_m')
    noise = channel_service.thermal_noise_power(scene.receiver)
    z = scene.room.rx_plane_height_m

    xs = np.arange(step / 2.0, scene.room.width_m, step)
    ys = np.arange(step / 2.0, scene.room.length_m, step)
    logger.info("Sweeping a %dx%d probe grid (step %g m, steering=%s)",
                len(xs), len(ys), step, steering_enabled)

    cells = []
    for x in xs:
        for y in ys:
            probe = UserPose(user_id=1, position=(float(x), float(y), z))
            powers = [
                channel_service.link_power(scene, j, probe, probe, steering_enabled)
                for j in range(scene.n_aps)
            ]
            best = int(np.argmax(powers))
            cells.append({
                'x': float(x),
                'y': float(y),
                'best_ap': scene.access_points[best].label,
                'sinr_db': linear_to_db(powers[best] / noise),
            })

    return cells
