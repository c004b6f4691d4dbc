"""heatmap: best-AP SINR of a lone probe swept over the receiving plane"""
from commands.common import add_scenario_arguments, load_scenario, resolve_out_dir, resolve_steering
from services import config_service, report_service, sinr_service
from utils.helpers import steering_label

DEFAULT_GRID_STEP_M = 0.1


def register(subparsers):
    parser = subparsers.add_parser('heatmap', help='probe SINR map over the receiving plane')
    add_scenario_arguments(parser)
    parser.add_argument('--grid-step', type=float, default=DEFAULT_GRID_STEP_M, help='cell size in meters')
    parser.set_defaults(handler=run)


def run(args):
    scenario = load_scenario(args)
    cmd_heatmap(scenario, args.grid_step, args.steering, args.out)
    return 0


def cmd_heatmap(scenario, grid_step_m=DEFAULT_GRID_STEP_M, steering=None, out_dir=None):
    """
    Write heatmap_<name>_<on|off>.csv for each steering setting

    Returns:
        Dict mapping steering_enabled to the list of cells
    """
    scene = config_service.build_scene(scenario)
    maps = {}

    for enabled in resolve_steering(scenario, steering):
        cells = sinr_service.probe_coverage(scene, grid_step_m, enabled)
        path = report_service.write_heatmap(resolve_out_dir(out_dir), scenario.name, enabled, cells)
        maps[enabled] = cells
        print(f"[{scenario.name}] steering {steering_label(enabled)}: {len(cells)} cells -> {path}")

    return maps
