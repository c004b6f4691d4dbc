"""Built-in scenarios of the reference deployment (four ceiling arrays, four users)"""

_ARRAYS = [
    {'position': [1.0, 1.0, 3.0], 'ap_pitch_m': 0.1},
    {'position': [1.0, 3.0, 3.0], 'ap_pitch_m': 0.1},
    {'position': [3.0, 1.0, 3.0], 'ap_pitch_m': 0.1},
    {'position': [3.0, 3.0, 3.0], 'ap_pitch_m': 0.1},
]

# One user under each array
SCENARIO1 = {
    'name': 'scenario1',
    'arrays': _ARRAYS,
    'users': [
        [1.0, 1.0, 1.0],
        [1.0, 3.0, 1.0],
        [3.0, 1.0, 1.0],
        [3.0, 3.0, 1.0],
    ],
}

# All users crowded around array 4
SCENARIO2 = {
    'name': 'scenario2',
    'arrays': _ARRAYS,
    'users': [
        [3.5, 3.5, 1.0],
        [3.5, 2.5, 1.0],
        [2.5, 3.5, 1.0],
        [2.5, 2.5, 1.0],
    ],
}

PRESETS = {
    'scenario1': SCENARIO1,
    'scenario2': SCENARIO2,
}
