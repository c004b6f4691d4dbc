"""Tabular Q-learning for user to AP allocation"""
import logging
import numpy as np
from models.learning import (
    ActionSpace, QTable, State, TrainReport, EPISODIC, CONTINUING
)
from services import exact_service, sinr_service
from utils.helpers import bits_to_index

logger = logging.getLogger(__name__)

# Algorithm
# 1. Build the constraint-filtered action space and a zero Q-table (2^K x |A|).
# 2. Start from the all-zeros QoS state.
# 3. For each episode:
#       pick an action epsilon-greedily, observe reward and next state,
#       Q(s,a) <- (1-alpha) Q(s,a) + alpha [r + gamma max Q(s',.)]
#       (the bootstrap term is 0 in episodic mode),
#       move to s' (continuing) or back to the start state (episodic),
#       decay epsilon.
# 4. Stop once a window of updates changes no Q-value by more than the
#    tolerance and every action has been tried, or at max_episodes.
# 5. The policy is argmax_a Q(s, a).


def build_action_space(n_users, n_arrays, aps_per_array):
    """
    All assignments with one AP per user and no shared AP

    Args:
        n_users: K
        n_arrays: L
        aps_per_array: N

    Returns:
        ActionSpace in enumeration order

    Raises:
        InfeasibleProblemError: If K > L*N
    """
    matrix = exact_service.assignment_matrix(n_users, n_arrays, aps_per_array)
    matrix.setflags(write=False)
    return ActionSpace(matrix=matrix, aps_per_array=aps_per_array)


class AllocationEnvironment:
    """
    Static environment: reward and next state depend only on the action

    Rewards (sum of linear SINR) and next-state indices (QoS bits) are
    computed for every action up front, so a step is a table lookup.
    """

    def __init__(self, action_space, rewards, next_states, n_users):
        self.action_space = action_space
        self.rewards = rewards
        self.next_states = next_states
        self.n_users = n_users

    @classmethod
    def from_scene(cls, scene, steering_enabled, threshold_db=sinr_service.DEFAULT_THRESHOLD_DB):
        action_space = build_action_space(scene.n_users, scene.n_arrays, scene.aps_per_array)
        rewards, _, sinr = exact_service.score_actions(
            scene, action_space.matrix, steering_enabled, threshold_db)

        with np.errstate(divide='ignore'):
            bits = (10.0 * np.log10(sinr) >= threshold_db).astype(np.int64)
        weights = 1 << np.arange(scene.n_users - 1, -1, -1)
        next_states = bits @ weights

        logger.info("Environment ready: %d actions, reward range [%.4g, %.4g]",
                    len(action_space), rewards.min(), rewards.max())
        return cls(action_space, rewards, next_states, scene.n_users)

    @property
    def n_states(self):
        return 2 ** self.n_users

    @property
    def n_actions(self):
        return len(self.action_space)

    def step(self, action_index):
        """(reward, next_state_index) of an action"""
        return float(self.rewards[action_index]), int(self.next_states[action_index])


def env_step(action, scene, steering_enabled, threshold_db=sinr_service.DEFAULT_THRESHOLD_DB):
    """
    Reward and next state of taking an assignment as the action

    Args:
        action: Complete Assignment
        scene: Scene
        steering_enabled: Whether beams are steered
        threshold_db: QoS threshold for the next-state bits

    Returns:
        Tuple (reward, State)

    Raises:
        AssignmentError: If any user is unassigned
    """
    sinr_service.require_complete(action)
    report = sinr_service.evaluate_assignment(action, scene, steering_enabled)
    return report.sum_sinr_linear, State(sinr_service.qos_vector(report, threshold_db))


def select_action(q, state, epsilon, rng, explore_unvisited=False):
    """
    Epsilon-greedy action choice

    A uniform draw z above epsilon exploits (argmax, lowest index on ties);
    otherwise a uniformly random action is explored. With explore_unvisited
    the draw is restricted to actions never tried in this state while any
    remain.

    Args:
        q: QTable
        state: State index
        epsilon: Exploration factor in [0, 1]
        rng: numpy Generator
        explore_unvisited: Draw among untried actions first (off by default)

    Returns:
        Action index
    """
    z = rng.random()
    if z > epsilon:
        return int(np.argmax(q.values[state]))

    if explore_unvisited:
        untried = np.flatnonzero(q.visit_counts[state] == 0)
        if untried.size:
            return int(untried[rng.integers(untried.size)])

    return int(rng.integers(q.n_actions))


def q_update(q, s, a, reward, s_next, hp):
    """
    Bellman update of one entry

    Q(s,a) <- (1-alpha) Q(s,a) + alpha [r + gamma max_a' Q(s',a')];
    in episodic mode every step is terminal and the bootstrap term is 0.

    Returns:
        The new Q(s, a)
    """
    if hp.mode == CONTINUING:
        target = reward + hp.gamma * float(np.max(q.values[s_next]))
    else:
        target = reward

    new_value = (1.0 - hp.alpha) * q.values[s, a] + hp.alpha * target
    q.values[s, a] = new_value
    q.visit_counts[s, a] += 1
    return float(new_value)


def extract_policy(q, state):
    """Greedy action argmax_a Q(state, a), lowest index on ties"""
    index = state.index if isinstance(state, State) else int(state)
    return int(np.argmax(q.values[index]))


def policy_state(q, hp, n_users):
    """
    State whose row the reported policy is read from

    Episodic training only ever acts from the all-zeros state. In continuing
    mode the greedy action is the same in every well-trained row, so the most
    visited row is used.
    """
    if hp.mode == EPISODIC:
        return State.initial(n_users)
    busiest = int(np.argmax(q.visit_counts.sum(axis=1)))
    return State.from_index(busiest, n_users)


def train_environment(env, hp, on_window=None):
    """
    Run Q-learning on a prepared environment

    Args:
        env: AllocationEnvironment
        hp: Hyperparams
        on_window: Optional callback(episode, max_abs_delta) per window

    Returns:
        Tuple (QTable, episodes_run, converged, final_epsilon, trace)
    """
    rng = np.random.default_rng(hp.rng_seed)
    q = QTable.zeros(env.n_states, env.n_actions)

    start_state = bits_to_index(State.initial(env.n_users).qos_bits)
    state = start_state
    epsilon = hp.epsilon0

    tried = np.zeros(env.n_actions, dtype=bool)
    n_tried = 0
    reward_scale = 0.0
    window_max = 0.0
    window_count = 0
    trace = []
    converged = False
    episode = 0

    logger.info("Training: %d states x %d actions, mode=%s, alpha=%g, gamma=%g",
                env.n_states, env.n_actions, hp.mode, hp.alpha, hp.gamma)

    for episode in range(1, hp.max_episodes + 1):
        action = select_action(q, state, epsilon, rng, explore_unvisited=hp.explore_unvisited)
        reward, next_state = env.step(action)

        old_value = q.values[state, action]
        new_value = q_update(q, state, action, reward, next_state, hp)

        if not tried[action]:
            tried[action] = True
            n_tried += 1
        reward_scale = max(reward_scale, abs(reward))
        window_max = max(window_max, abs(new_value - old_value))
        window_count += 1

        state = next_state if hp.mode == CONTINUING else start_state
        epsilon = max(hp.epsilon_min, epsilon * hp.epsilon_decay)

        if window_count == hp.window_size:
            trace.append((episode, window_max))
            if on_window is not None:
                on_window(episode, window_max)
            logger.debug("episode %d: max |dQ| %.3g, epsilon %.4f, tried %d/%d",
                         episode, window_max, epsilon, n_tried, env.n_actions)

            settled = window_max == 0.0 or window_max < hp.convergence_tol * reward_scale
            if settled and n_tried == env.n_actions:
                converged = True
                break

            window_max = 0.0
            window_count = 0

    logger.info("Training stopped after %d episodes (converged=%s, epsilon=%.4f)",
                episode, converged, epsilon)
    return q, episode, converged, epsilon, tuple(trace)


def train(scene, hp, steering_enabled, threshold_db=sinr_service.DEFAULT_THRESHOLD_DB):
    """
    Learn an allocation for a scene

    Args:
        scene: Scene
        hp: Hyperparams
        steering_enabled: Whether beams are steered
        threshold_db: QoS threshold defining the states

    Returns:
        Tuple (QTable, TrainReport)
    """
    env = AllocationEnvironment.from_scene(scene, steering_enabled, threshold_db)
    q, episodes, converged, epsilon, trace = train_environment(env, hp)

    greedy_index = extract_policy(q, policy_state(q, hp, scene.n_users))
    assignment = env.action_space[greedy_index]
    report = sinr_service.evaluate_assignment(assignment, scene, steering_enabled)
    meets_threshold, _ = sinr_service.is_feasible(assignment, report, threshold_db)

    train_report = TrainReport(
        episodes_run=episodes,
        converged=converged,
        final_epsilon=epsilon,
        greedy_action_index=greedy_index,
        greedy_assignment=assignment,
        greedy_objective_linear=report.sum_sinr_linear,
        meets_threshold=meets_threshold,
        mode=hp.mode,
        q_delta_trace=trace,
    )
    return q, train_report

