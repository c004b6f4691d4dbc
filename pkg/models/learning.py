"""Q-learning data structures: states, action space, hyperparameters, Q-table"""
from dataclasses import dataclass, field
import numpy as np
from models.assignment import Assignment
from utils.errors import ValidationError
from utils.helpers import bits_to_index, index_to_bits
from utils.validators import (
    validate_range, validate_positive, validate_positive_int, validate_bool
)

EPISODIC = 'episodic'
CONTINUING = 'continuing'


@dataclass(frozen=True)
class State:
    """QoS bit vector, user 1 first"""
    qos_bits: tuple

    @property
    def index(self):
        return bits_to_index(self.qos_bits)

    @classmethod
    def from_index(cls, index, n_users):
        if not 0 <= index < 2 ** n_users:
            raise ValidationError(f"state index {index} out of range for {n_users} users")
        return cls(index_to_bits(index, n_users))

    @classmethod
    def initial(cls, n_users):
        """No user served yet"""
        return cls((0,) * n_users)


@dataclass(frozen=True, eq=False)
class ActionSpace:
    """
    Assignments satisfying the single-AP and exclusive-AP constraints

    matrix[i] holds the flat AP index of every user for action i, in the
    same order as exhaustive enumeration.
    """
    matrix: np.ndarray
    aps_per_array: int

    def __len__(self):
        return int(self.matrix.shape[0])

    def __getitem__(self, index):
        return Assignment.from_flat(self.matrix[index], self.aps_per_array)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def n_users(self):
        return int(self.matrix.shape[1])


@dataclass(frozen=True)
class Hyperparams:
    alpha: float = 1.0
    gamma: float = 0.9
    epsilon0: float = 1.0
    epsilon_min: float = 0.01
    epsilon_decay: float = 0.99999
    max_episodes: int = 500_000
    convergence_tol: float = 1e-6
    window_size: int = 1000
    rng_seed: int = 2024
    mode: str = EPISODIC
    explore_unvisited: bool = True

    def __post_init__(self):
        validate_range(self.alpha, 'ql.alpha', 0.0, 1.0, low_inclusive=False)
        validate_range(self.gamma, 'ql.gamma', 0.0, 1.0, high_inclusive=False)
        validate_range(self.epsilon0, 'ql.epsilon0', 0.0, 1.0)
        validate_range(self.epsilon_min, 'ql.epsilon_min', 0.0, self.epsilon0)
        validate_range(self.epsilon_decay, 'ql.epsilon_decay', 0.0, 1.0, low_inclusive=False)
        validate_positive_int(self.max_episodes, 'ql.max_episodes')
        validate_positive(self.convergence_tol, 'ql.convergence_tol')
        validate_positive_int(self.window_size, 'ql.window_size')
        validate_bool(self.explore_unvisited, 'ql.explore_unvisited')
        if isinstance(self.rng_seed, bool) or not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            raise ValidationError("must be a non-negative integer", 'ql.rng_seed')
        if self.mode not in (EPISODIC, CONTINUING):
            raise ValidationError(f"must be '{EPISODIC}' or '{CONTINUING}'", 'ql.mode')


@dataclass
class QTable:
    """Dense Q-values over (2^K states) x (|A| actions), zero-initialized"""
    values: np.ndarray
    visit_counts: np.ndarray

    @classmethod
    def zeros(cls, n_states, n_actions):
        return cls(
            values=np.zeros((n_states, n_actions), dtype=float),
            visit_counts=np.zeros((n_states, n_actions), dtype=np.int64),
        )

    @property
    def n_states(self):
        return int(self.values.shape[0])

    @property
    def n_actions(self):
        return int(self.values.shape[1])


@dataclass(frozen=True)
class TrainReport:
    episodes_run: int
    converged: bool
    final_epsilon: float
    greedy_action_index: int
    greedy_assignment: Assignment
    greedy_objective_linear: float
    meets_threshold: bool
    mode: str
    q_delta_trace: tuple = field(default=())
