"""solve: exhaustive search for the optimal assignment"""
from commands.common import add_scenario_arguments, load_scenario, resolve_out_dir, resolve_steering
from services import config_service, exact_service, report_service
from utils.helpers import steering_label


def register(subparsers):
    parser = subparsers.add_parser('solve', help='optimal assignment by exhaustive search')
    add_scenario_arguments(parser)
    parser.set_defaults(handler=run)


def run(args):
    scenario = load_scenario(args)
    cmd_solve(scenario, args.steering, args.out)
    return 0


def cmd_solve(scenario, steering=None, out_dir=None):
    """
    Solve a scenario for each steering setting and write exact_<name>.csv

    Args:
        scenario: ScenarioConfig
        steering: 'on', 'off', 'both' or None for the scenario default
        out_dir: Output directory (defaults to config)

    Returns:
        List of OptimalSolution, unsteered first
    """
    scene = config_service.build_scene(scenario)
    solutions = [
        exact_service.solve_exact(scene, enabled, scenario.threshold_db)
        for enabled in resolve_steering(scenario, steering)
    ]

    report_service.write_exact(resolve_out_dir(out_dir), scenario.name, solutions, scenario.threshold_db)

    for solution in solutions:
        print(f"[{scenario.name}] steering {steering_label(solution.steering_enabled)}: "
              f"{format_assignment(solution.assignment)}  "
              f"sum SINR {solution.objective_linear:.6g} ({solution.objective_db:.2f} dB), "
              f"feasible={solution.feasible_wrt_threshold}, ties={solution.n_ties}")

    return solutions


def format_assignment(assignment):
    """'u1->1:1 u2->2:1 ...'"""
    return ' '.join(
        f"u{k}->{'-' if pair is None else f'{pair[0]}:{pair[1]}'}"
        for k, pair in enumerate(assignment.pairs, start=1)
    )
