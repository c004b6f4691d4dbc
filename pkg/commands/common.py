"""Arguments and scenario resolution shared by every command"""
from config.config import get_config
from services import config_service
from utils.helpers import steering_settings

config = get_config()

STEERING_CHOICES = ('on', 'off', 'both')


def add_scenario_arguments(parser):
    """--config/--preset, --steering, --seed and --out"""
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--config', dest='config_path', help='YAML scenario file')
    source.add_argument('--preset', help='built-in scenario (scenario1, scenario2)')

    parser.add_argument('--steering', choices=STEERING_CHOICES, default=None,
                        help='beam steering settings to run (default: both, or off if the scenario disables steering)')
    parser.add_argument('--seed', type=int, default=None, help='Q-learning rng seed')
    parser.add_argument('--out', default=None, help=f'output directory (default: {config.OUTPUT_DIR})')


def load_scenario(args):
    """ScenarioConfig for parsed arguments, with --seed applied"""
    scenario = config_service.resolve_config(args.config_path, args.preset)
    return config_service.with_seed(scenario, args.seed)


def resolve_steering(scenario, steering):
    """Steering settings to run, unsteered first"""
    return steering_settings(steering or scenario.default_steering)


def resolve_out_dir(out_dir):
    return out_dir or config.OUTPUT_DIR
