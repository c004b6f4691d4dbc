"""train: Q-learning allocation checked against the exact optimum"""
from commands.common import add_scenario_arguments, load_scenario, resolve_out_dir, resolve_steering
from commands.solve import format_assignment
from config.config import get_config
from services import config_service, exact_service, qlearning_service, report_service, sinr_service
from utils.helpers import relative_gap, steering_label

config = get_config()


def register(subparsers):
    parser = subparsers.add_parser('train', help='learn an assignment with tabular Q-learning')
    add_scenario_arguments(parser)
    parser.set_defaults(handler=run)


def run(args):
    scenario = load_scenario(args)
    cmd_train(scenario, args.steering, args.out)
    return 0


def train_and_check(scenario, scene, steering_enabled):
    """
    Train one steering setting and compare against solve_exact

    Returns:
        Tuple (steering_enabled, TrainReport, SinrReport, OptimalSolution, matches_exact)
    """
    solution = exact_service.solve_exact(scene, steering_enabled, scenario.threshold_db)
    _, train_report = qlearning_service.train(scene, scenario.ql, steering_enabled, scenario.threshold_db)

    sinr_report = sinr_service.evaluate_assignment(train_report.greedy_assignment, scene, steering_enabled)
    matches = relative_gap(train_report.greedy_objective_linear, solution.objective_linear) <= config.TIE_RTOL
    return steering_enabled, train_report, sinr_report, solution, matches


def cmd_train(scenario, steering=None, out_dir=None):
    """
    Train for each steering setting and write the ql_<name> CSVs

    Args:
        scenario: ScenarioConfig
        steering: 'on', 'off', 'both' or None for the scenario default
        out_dir: Output directory (defaults to config)

    Returns:
        List of (steering_enabled, TrainReport, SinrReport, OptimalSolution, matches_exact)
    """
    scene = config_service.build_scene(scenario)
    runs = [
        train_and_check(scenario, scene, enabled)
        for enabled in resolve_steering(scenario, steering)
    ]

    report_service.write_ql(resolve_out_dir(out_dir), scenario.name, runs, scenario.threshold_db)

    for enabled, train_report, _, solution, matches in runs:
        print(f"[{scenario.name}] steering {steering_label(enabled)}: "
              f"{format_assignment(train_report.greedy_assignment)} after {train_report.episodes_run} episodes "
              f"(converged={train_report.converged})")
        print(f"    greedy objective {train_report.greedy_objective_linear:.10g}, "
              f"exact {solution.objective_linear:.10g}: "
              f"{'matches exact optimum' if matches else 'DOES NOT match exact optimum'}")

    return runs
