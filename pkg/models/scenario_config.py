"""Validated scenario description as loaded from YAML or a preset"""
from dataclasses import dataclass
from models.learning import Hyperparams
from models.scene import RoomGeometry, BeamParams, ReceiverParams


@dataclass(frozen=True)
class ArraySpec:
    """Ceiling array: center position and spacing of its AP grid"""
    position: tuple
    ap_pitch_m: float = 0.1


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    room: RoomGeometry
    ap_grid: tuple
    arrays: tuple
    beam: BeamParams
    vcsel_power_w: float
    vcsels_per_ap: int
    receiver: ReceiverParams
    users: tuple
    steering_enabled: bool
    max_steer_deg: float
    threshold_db: float
    slot_isolation: bool
    ql: Hyperparams

    @property
    def n_users(self):
        return len(self.users)

    @property
    def n_arrays(self):
        return len(self.arrays)

    @property
    def aps_per_array(self):
        return self.ap_grid[0] * self.ap_grid[1]

    @property
    def default_steering(self):
        """--steering value used when the flag is not given"""
        return 'both' if self.steering_enabled else 'off'
