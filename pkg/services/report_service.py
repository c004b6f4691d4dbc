"""CSV emission of solver, training and comparison results"""
import logging
import os
import pandas as pd
from utils.errors import OutputError
from utils.helpers import steering_label

logger = logging.getLogger(__name__)

SINR_COLUMNS = [
    'steering', 'user_id', 'array', 'ap', 'signal_a2', 'interference_a2',
    'noise_a2', 'sinr_db', 'qos_bit',
]
EXACT_SUMMARY_COLUMNS = [
    'steering', 'objective_linear', 'objective_db', 'feasible',
    'n_enumerated', 'n_feasible', 'n_ties',
]
QL_SUMMARY_COLUMNS = [
    'steering', 'mode', 'episodes_run', 'converged', 'final_epsilon',
    'greedy_action_index', 'greedy_objective_linear', 'exact_objective_linear',
    'matches_exact', 'meets_threshold',
]
TRACE_COLUMNS = ['episode', 'max_abs_delta']
COMPARE_COLUMNS = ['method', 'steering', 'user_id', 'array', 'ap', 'sinr_linear', 'sinr_db']
HEATMAP_COLUMNS = ['x', 'y', 'best_ap', 'sinr_db']


def write_csv(rows, columns, path):
    """
    Write rows (list of dicts) with a fixed header

    Raises:
        OutputError: If the directory or file cannot be written
    """
    frame = pd.DataFrame(rows, columns=columns)
    try:
        os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
        frame.to_csv(path, index=False, lineterminator='\n')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}")

    logger.info("Wrote %d rows to %s", len(frame), path)
    return path


def sinr_rows(report, threshold_db):
    """Per-user rows of a SinrReport in the exact/QL CSV layout"""
    label = steering_label(report.steering_enabled)
    return [
        {
            'steering': label,
            'user_id': row.user_id,
            'array': row.array_id,
            'ap': row.ap_id,
            'signal_a2': row.signal_a2,
            'interference_a2': row.interference_a2,
            'noise_a2': row.noise_a2,
            'sinr_db': row.sinr_db,
            'qos_bit': 1 if row.sinr_db >= threshold_db else 0,
        }
        for row in report.rows
    ]


def write_exact(out_dir, name, solutions, threshold_db):
    """
    exact_<name>.csv and exact_<name>_summary.csv

    Args:
        out_dir: Output directory
        name: Scenario name
        solutions: OptimalSolution per steering setting, in run order
        threshold_db: QoS threshold for the qos_bit column

    Returns:
        Tuple of written paths
    """
    rows = []
    summary = []
    for solution in solutions:
        rows.extend(sinr_rows(solution.report, threshold_db))
        summary.append({
            'steering': steering_label(solution.steering_enabled),
            'objective_linear': solution.objective_linear,
            'objective_db': solution.objective_db,
            'feasible': solution.feasible_wrt_threshold,
            'n_enumerated': solution.n_enumerated,
            'n_feasible': solution.n_feasible,
            'n_ties': solution.n_ties,
        })

    return (
        write_csv(rows, SINR_COLUMNS, os.path.join(out_dir, f"exact_{name}.csv")),
        write_csv(summary, EXACT_SUMMARY_COLUMNS, os.path.join(out_dir, f"exact_{name}_summary.csv")),
    )


def write_ql(out_dir, name, runs, threshold_db):
    """
    ql_<name>.csv, ql_<name>_summary.csv and one trace file per steering setting

    Args:
        out_dir: Output directory
        name: Scenario name
        runs: List of (steering_enabled, TrainReport, SinrReport, OptimalSolution, matches_exact)
        threshold_db: QoS threshold for the qos_bit column

    Returns:
        List of written paths
    """
    rows = []
    summary = []
    paths = []

    for steering_enabled, train_report, sinr_report, solution, matches in runs:
        label = steering_label(steering_enabled)
        rows.extend(sinr_rows(sinr_report, threshold_db))
        summary.append({
            'steering': label,
            'mode': train_report.mode,
            'episodes_run': train_report.episodes_run,
            'converged': train_report.converged,
            'final_epsilon': train_report.final_epsilon,
            'greedy_action_index': train_report.greedy_action_index,
            'greedy_objective_linear': train_report.greedy_objective_linear,
            'exact_objective_linear': solution.objective_linear,
            'matches_exact': matches,
            'meets_threshold': train_report.meets_threshold,
        })

        trace = [{'episode': e, 'max_abs_delta': d} for e, d in train_report.q_delta_trace]
        paths.append(write_csv(trace, TRACE_COLUMNS, os.path.join(out_dir, f"ql_{name}_trace_{label}.csv")))

    paths.insert(0, write_csv(summary, QL_SUMMARY_COLUMNS, os.path.join(out_dir, f"ql_{name}_summary.csv")))
    paths.insert(0, write_csv(rows, SINR_COLUMNS, os.path.join(out_dir, f"ql_{name}.csv")))
    return paths


def compare_rows(method, report):
    """Per-user rows plus the two aggregate rows of one (method, steering) run"""
    label = steering_label(report.steering_enabled)
    rows = [
        {
            'method': method,
            'steering': label,
            'user_id': row.user_id,
            'array': row.array_id,
            'ap': row.ap_id,
            'sinr_linear': row.sinr_linear,
            'sinr_db': row.sinr_db,
        }
        for row in report.rows
    ]

    # dB of the linear sum, and the sum of per-user dB values
    rows.append({'method': method, 'steering': label, 'user_id': 'sum', 'array': '', 'ap': '',
                 'sinr_linear': report.sum_sinr_linear, 'sinr_db': report.sum_sinr_db})
    rows.append({'method': method, 'steering': label, 'user_id': 'sum_db', 'array': '', 'ap': '',
                 'sinr_linear': '', 'sinr_db': report.sum_user_sinr_db})
    return rows


def write_compare(out_dir, name, rows):
    return write_csv(rows, COMPARE_COLUMNS, os.path.join(out_dir, f"compare_{name}.csv"))


def write_heatmap(out_dir, name, steering_enabled, rows):
    label = steering_label(steering_enabled)
    return write_csv(rows, HEATMAP_COLUMNS, os.path.join(out_dir, f"heatmap_{name}_{label}.csv"))
