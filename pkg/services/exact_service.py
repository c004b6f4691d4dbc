"""Exhaustive search for the optimal user to AP assignment"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from config.config import get_config
from models.assignment import Assignment
from models.solution import OptimalSolution
from services import sinr_service
from utils.errors import InfeasibleProblemError
from utils.validators import validate_positive_int

config = get_config()
logger = logging.getLogger(__name__)


def count_assignments(n_users, n_arrays, aps_per_array):
    """Number of injective user -> AP mappings, (L*N)! / (L*N - K)!"""
    _check_sizes(n_users, n_arrays, aps_per_array)
    return math.perm(n_arrays * aps_per_array, n_users)


def _check_sizes(n_users, n_arrays, aps_per_array):
    validate_positive_int(n_users, 'users')
    validate_positive_int(n_arrays, 'arrays')
    validate_positive_int(aps_per_array, 'ap_grid')

    if n_users > n_arrays * aps_per_array:
        raise InfeasibleProblemError(
            f"{n_users} users cannot each get an exclusive AP out of "
            f"{n_arrays * aps_per_array} (K <= L*N violated)")


def enumerate_assignments(n_users, n_arrays, aps_per_array):
    """
    Every complete assignment with no shared AP, exactly once

    Order is lexicographic in the flat AP index of user 1, then user 2, ...
    (user 1 varies slowest).

    Args:
        n_users: K
        n_arrays: L
        aps_per_array: N

    Yields:
        Assignment

    Raises:
        InfeasibleProblemError: If K > L*N
    """
    _check_sizes(n_users, n_arrays, aps_per_array)
    for flat in itertools.permutations(range(n_arrays * aps_per_array), n_users):
        yield Assignment.from_flat(flat, aps_per_array)


def assignment_matrix(n_users, n_arrays, aps_per_array):
    """
    Same enumeration as enumerate_assignments as an int array (A, K) of flat AP indices
    """
    _check_sizes(n_users, n_arrays, aps_per_array)
    flat = itertools.permutations(range(n_arrays * aps_per_array), n_users)
    matrix = np.array(list(flat), dtype=np.int64).reshape(-1, n_users)
    return matrix


def score_actions(scene, actions, steering_enabled, threshold_db, max_workers=None, chunk_size=None):
    """
    Objective and QoS feasibility of every action, evaluated chunk by chunk

    Chunks may run on a thread pool; results are reassembled in chunk order
    so the output does not depend on the number of workers.

    Args:
        scene: Scene
        actions: int array (A, K)
        steering_enabled: Whether beams are steered
        threshold_db: Minimum per-user SINR
        max_workers: Thread count (defaults to config)
        chunk_size: Actions per chunk (defaults to config)

    Returns:
        Tuple (objective, feasible, sinr) with shapes (A,), (A,), (A, K)
    """
    max_workers = max_workers or config.MAX_WORKERS
    chunk_size = chunk_size or config.CHUNK_SIZE

    # Build the cached tensor once before fanning out
    sinr_service.sinr_matrix(scene, actions[:1], steering_enabled)

    def evaluate(start):
        chunk = actions[start:start + chunk_size]
        _, _, _, sinr = sinr_service.sinr_matrix(scene, chunk, steering_enabled)
        return sinr

    starts = range(0, len(actions), chunk_size)
    if max_workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(evaluate, starts))
    else:
        parts = [evaluate(start) for start in starts]

    sinr = np.concatenate(parts, axis=0)
    objective = sinr.sum(axis=1)
    # An undefined objective never wins the maximization
    objective = np.where(np.isnan(objective), -np.inf, objective)
    # Compare in dB so the inclusive threshold matches the per-user QoS bits
    with np.errstate(divide='ignore'):
        feasible = np.all(10.0 * np.log10(sinr) >= threshold_db, axis=1)

    logger.debug("Scored %d actions in %d chunks", len(actions), len(parts))
    return objective, feasible, sinr


def count_ties(objective, best, rtol=None):
    """Number of objectives equal to best within rtol (relative)"""
    rtol = config.TIE_RTOL if rtol is None else rtol
    return int(np.count_nonzero(np.abs(objective - best) <= rtol * abs(best)))


def solve_exact(scene, steering_enabled, threshold_db=sinr_service.DEFAULT_THRESHOLD_DB,
                max_workers=None, chunk_size=None):
    """
    Maximize the sum of linear SINR over all valid assignments

    Among assignments where every user meets threshold_db the first
    maximizer in enumeration order wins. If no assignment meets the
    threshold, the unconstrained maximizer is returned flagged infeasible.

    Args:
        scene: Scene
        steering_enabled: Whether beams are steered toward their users
        threshold_db: Minimum per-user SINR
        max_workers: Thread fan-out for scoring
        chunk_size: Actions per scoring chunk

    Returns:
        OptimalSolution

    Raises:
        InfeasibleProblemError: If K > L*N
    """
    actions = assignment_matrix(scene.n_users, scene.n_arrays, scene.aps_per_array)
    logger.info("Searching %d assignments (K=%d, L=%d, N=%d, steering=%s)",
                len(actions), scene.n_users, scene.n_arrays, scene.aps_per_array, steering_enabled)

    objective, feasible, _ = score_actions(
        scene, actions, steering_enabled, threshold_db, max_workers, chunk_size)
    n_feasible = int(np.count_nonzero(feasible))

    if n_feasible > 0:
        candidates = np.where(feasible, objective, -np.inf)
        pool = objective[feasible]
    else:
        logger.warning("No assignment meets %.1f dB for every user; returning the unconstrained optimum",
                       threshold_db)
        candidates = objective
        pool = objective

    best_index = int(np.argmax(candidates))
    best = float(objective[best_index])

    assignment = Assignment.from_flat(actions[best_index], scene.aps_per_array)
    report = sinr_service.evaluate_assignment(assignment, scene, steering_enabled)

    solution = OptimalSolution(
        assignment=assignment,
        report=report,
        objective_linear=report.sum_sinr_linear,
        feasible_wrt_threshold=n_feasible > 0,
        n_enumerated=len(actions),
        n_feasible=n_feasible,
        n_ties=count_ties(pool, best),
        action_index=best_index,
        steering_enabled=steering_enabled,
    )

    logger.info("Optimum %s: objective %.6g (%.2f dB), %d feasible, %d tied",
                assignment.pairs, solution.objective_linear, solution.objective_db,
                n_feasible, solution.n_ties)
    return solution
