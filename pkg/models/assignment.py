"""User to access point association and its SINR evaluation"""
from dataclasses import dataclass
from typing import Optional
from utils.errors import AssignmentError


@dataclass(frozen=True)
class Assignment:
    """
    Association of users to access points

    pairs[k] is the (array_id, ap_id) serving user k+1, or None when the
    user is unassigned. Equivalent to the binary tensor x[k, l, n].
    """
    pairs: tuple

    @classmethod
    def from_flat(cls, ap_indices, aps_per_array):
        """
        Build an assignment from flat 0-based AP indices

        Args:
            ap_indices: Iterable of flat AP indices, -1 for unassigned
            aps_per_array: N, number of APs per array

        Returns:
            Assignment
        """
        pairs = []
        for j in ap_indices:
            j = int(j)
            if j < 0:
                pairs.append(None)
            else:
                pairs.append((j // aps_per_array + 1, j % aps_per_array + 1))
        return cls(tuple(pairs))

    def to_flat(self, aps_per_array):
        """Flat 0-based AP index per user, -1 for unassigned"""
        return tuple(
            -1 if pair is None else (pair[0] - 1) * aps_per_array + (pair[1] - 1)
            for pair in self.pairs
        )

    def to_tensor(self, n_arrays, aps_per_array):
        """Binary nested list x[k][l][n]"""
        tensor = [[[0] * aps_per_array for _ in range(n_arrays)] for _ in self.pairs]
        for k, pair in enumerate(self.pairs):
            if pair is not None:
                tensor[k][pair[0] - 1][pair[1] - 1] = 1
        return tensor

    @property
    def n_users(self):
        return len(self.pairs)

    @property
    def is_complete(self):
        return all(pair is not None for pair in self.pairs)

    def serving(self, user_id):
        """(array_id, ap_id) serving user_id (1-based)"""
        if not 1 <= user_id <= len(self.pairs):
            raise AssignmentError(f"user {user_id} does not exist")

        pair = self.pairs[user_id - 1]
        if pair is None:
            raise AssignmentError(f"user {user_id} is not assigned to any access point")
        return pair


@dataclass(frozen=True)
class SinrRow:
    """Per-user evaluation; powers are electrical (A^2)"""
    user_id: int
    array_id: int
    ap_id: int
    signal_a2: float
    interference_a2: float
    noise_a2: float
    sinr_linear: float
    sinr_db: float


@dataclass(frozen=True)
class SinrReport:
    """Rows for every assigned user plus the aggregate objective"""
    rows: tuple
    sum_sinr_linear: float
    sum_sinr_db: float
    sum_user_sinr_db: float
    steering_enabled: bool

    def row(self, user_id):
        for row in self.rows:
            if row.user_id == user_id:
                return row
        raise AssignmentError(f"report has no row for user {user_id}")

    @property
    def sinr_db(self):
        return tuple(row.sinr_db for row in self.rows)


@dataclass(frozen=True)
class Violation:
    """One failed constraint of an assignment"""
    constraint: str
    message: str
    user_id: Optional[int] = None
    ap: Optional[tuple] = None
