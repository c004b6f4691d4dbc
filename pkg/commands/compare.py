"""compare: per-user and sum SINR of exact search against Q-learning"""
from commands.common import add_scenario_arguments, load_scenario, resolve_out_dir, resolve_steering
from commands.train import train_and_check
from services import config_service, report_service, sinr_service
from utils.helpers import steering_label

STEERED_AFTER = '_steered_after'


def register(subparsers):
    parser = subparsers.add_parser('compare', help='exact search vs Q-learning, with and without steering')
    add_scenario_arguments(parser)
    parser.set_defaults(handler=run)


def run(args):
    scenario = load_scenario(args)
    cmd_compare(scenario, args.steering, args.out)
    return 0


def cmd_compare(scenario, steering=None, out_dir=None):
    """
    Run both methods on every steering setting and write compare_<name>.csv

    When the unsteered setting runs, each method's unsteered assignment is
    also re-evaluated with steering switched on, under the method names
    exact_steered_after and ql_steered_after.

    Returns:
        Dict mapping (method, steering_enabled) to SinrReport
    """
    scene = config_service.build_scene(scenario)
    reports = {}
    rows = []

    for enabled in resolve_steering(scenario, steering):
        _, train_report, ql_report, solution, _ = train_and_check(scenario, scene, enabled)
        reports[('exact', enabled)] = solution.report
        reports[('ql', enabled)] = ql_report
        rows.extend(report_service.compare_rows('exact', solution.report))
        rows.extend(report_service.compare_rows('ql', ql_report))

        if not enabled:
            for method, assignment in (('exact', solution.assignment), ('ql', train_report.greedy_assignment)):
                _, steered = sinr_service.steering_gain(assignment, scene)
                reports[(method + STEERED_AFTER, True)] = steered
                rows.extend(report_service.compare_rows(method + STEERED_AFTER, steered))

    report_service.write_compare(resolve_out_dir(out_dir), scenario.name, rows)

    for (method, enabled), report in reports.items():
        per_user = ', '.join(f"{db:.2f}" for db in report.sinr_db)
        print(f"[{scenario.name}] {method:5s} steering {steering_label(enabled)}: "
              f"per-user dB [{per_user}]  sum {report.sum_sinr_db:.2f} dB")

    return reports
