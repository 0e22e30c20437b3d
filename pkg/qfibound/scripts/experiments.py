"""
The experiment runners behind the command line.

Each runner splits its work into units ``(index, ...)`` that are executed by
``helper.run_units``; a unit derives its randomness from ``seed ^ index`` (or
from a documented key), so the tables do not depend on the worker count.
"""
import multiprocessing
import os
from collections import defaultdict

import numpy as np

from . import helper
from ..core import circuits, states, vqse, io
from ..core import qfi as qfi_
from ..core import fidelity as fid
from ..core.optimize import maximize, merge_results
from ..utils import stats
from ..utils.misc import as_list, derive_seed, ceil_log2


def build_generator(config, n):
    if config.encoding['generator'] == 'random':
        return circuits.random_generator(n, config.seed)
    return circuits.magnetometry(n)


def build_state(config, n, purity, seed, G=None):
    kind = config.state['kind']
    if kind == 'ghz':
        return states.ghz(n)
    if kind == 'zero':
        return states.basis_state(n)
    if kind == 'maximally_mixed':
        return states.maximally_mixed(n)
    if kind == 'optimal':
        G = build_generator(config, n) if G is None else G
        spectrum = states.random_spectrum_with_purity(2 ** n, purity, np.random.default_rng(seed))
        return states.optimal_mixed_probe(spectrum, G)
    return states.random_state_with_purity(n, purity, seed)


def vqse_layers(config, n):
    return config.vqse['layers'] or ceil_log2(n)


def layers_for(n, log_base):
    if str(log_base) == '2':
        return ceil_log2(n)
    return max(1, int(np.ceil(qfi_.logarithm(n, log_base) - 1e-12)))


def open_run(config, experiment, tables):
    """
    Output paths and locks for the run; starts the log.

    'table' is written to <experiment>.csv, any other table to
    <experiment>.<name>.csv.
    """
    out_paths, locks = dict(), dict()
    for name in tables:
        filename = '%s.csv' % experiment if name == 'table' else '%s.%s.csv' % (experiment, name)
        out_paths[name] = os.path.join(config.out_path, filename)
        locks[name] = multiprocessing.Lock()
    out_paths['log'] = os.path.join(config.out_path, '%s.log' % experiment)
    locks['log'] = multiprocessing.Lock()
    with open(out_paths['log'], 'w') as f:
        f.write(helper.decor_message(experiment))
    print('Writing results of', experiment, 'to', config.out_path)
    return out_paths, locks


def close_run(out_paths):
    with open(out_paths['log'], 'a+') as f:
        f.write(helper.decor_message('successfully finished'))


def cost_H(rho_alpha, G, theta, delta, m):
    """max(TQFI lower, SSQFI lower) of a probe."""
    rho_theta, rho_error = qfi_.encoded_pair(rho_alpha, G, theta, delta)
    t = fid.truncate(rho_theta, rho_error, m)
    tqfi_lower = qfi_.induced_bound(fid.generalized_fidelity(t), delta)
    ssqfi_lower = qfi_.induced_bound(np.sqrt(fid.super_fidelity(rho_theta, rho_error)), delta)
    return max(tqfi_lower, ssqfi_lower)


def cost_tqfi_lower(rho_alpha, G, theta, delta, m):
    rho_theta, rho_error = qfi_.encoded_pair(rho_alpha, G, theta, delta)
    return qfi_.tqfi_bounds(rho_theta, rho_error, m, delta)[0]


# estimate

def execute_estimate(index, config, n, purity, state_index, m, out_paths, locks):
    G = build_generator(config, n)
    rho = build_state(config, n, purity, derive_seed(config.seed, state_index), G)
    rho_theta, rho_error = qfi_.encoded_pair(rho, G, config.theta, config.delta)
    eigenpairs, reference, calls, history = None, None, 0, []
    if config.bounds['eigensolver'] == 'vqse':
        ansatz = circuits.build_hw_efficient(n, vqse_layers(config, n))
        optimizer = vqse.vqse_optimizer_config(seed=derive_seed(config.seed, index),
                                               max_iters=config.vqse['max_iters'],
                                               restarts=config.vqse['restarts'],
                                               learning_rate=config.vqse['learning_rate'])
        mode = 'shots' if config.shots_mode else config.vqse['mode']
        result = vqse.run_vqse(rho_theta, m, ansatz, optimizer, config.n_runs, derive_seed(config.seed, index), mode)
        eigenpairs = (result.eigenvectors(), result.eigenvalue_estimates)
        reference = result.dephased_state()
        calls = result.calls
        history = [[state_index, purity, m, iteration, cost] for iteration, cost in result.cost_history_rows()]
    report = qfi_.bounds_report(rho_theta, rho_error, m, config.delta, G=G, eigenpairs=eigenpairs,
                                reference=reference).check()
    helper.log_line('state %d purity %s m %d: H=%.6g J=%.6g' % (state_index, purity, m, report.H_delta,
                                                               report.J_delta), out_paths['log'], locks)
    return index, [state_index, n, purity] + report.to_row() + [calls], history


def run_estimate(config):
    """
    Bounds for every (state, purity, m) setting. With the VQSE eigensolver the
    cost history of every training goes to estimate.vqse_history.csv.
    """
    with_vqse = config.bounds['eigensolver'] == 'vqse'
    out_paths, locks = open_run(config, 'estimate', ['table', 'vqse_history'] if with_vqse else ['table'])
    if with_vqse:
        ansatz = circuits.build_hw_efficient(config.n, vqse_layers(config, config.n))
        helper.log_line('vqse ansatz %s' % ansatz.describe(), out_paths['log'], locks)
    units = []
    for state_index in range(config.state['count']):
        for purity in as_list(config.purity):
            for m in as_list(config.m):
                units.append((len(units), config, config.n, purity, state_index, m, out_paths))
    results = helper.run_units(execute_estimate, units, config.workers, locks)
    rows = [row for _, row, _ in results]
    meta = io.metadata(config, 'estimate')
    io.write_table(out_paths['table'], ['state', 'n', 'purity'] + qfi_.BoundsReport.header() + ['vqse_calls'],
                   rows, meta)
    if with_vqse:
        history = [line for _, _, lines in results for line in lines]
        io.write_table(out_paths['vqse_history'], ['state', 'purity', 'm', 'iteration', 'cost'], history, meta)
    close_run(out_paths)
    return rows


# optimize, m-sweep, purity-sweep

def execute_restart(index, config, setting, restart, out_paths, locks):
    purity, m = setting
    n = config.n
    G = build_generator(config, n)
    rho_in = build_state(config, n, purity, config.seed, G)
    ansatz = circuits.build_hw_efficient(n, config.layers)

    def objective(alpha):
        return cost_H(circuits.apply(ansatz, alpha, rho_in), G, config.theta, config.delta, m)

    result = maximize(objective, ansatz.param_count, config.optimizer, restart_indices=[restart])
    helper.log_line('purity %s m %d restart %d: best cost %.6g' % (purity, m, restart, result.best_value),
                    out_paths['log'], locks)
    return index, setting, result


def optimum_report(config, setting, result):
    """Bounds of the probe prepared by the best parameters."""
    purity, m = setting
    n = config.n
    G = build_generator(config, n)
    rho_in = build_state(config, n, purity, config.seed, G)
    ansatz = circuits.build_hw_efficient(n, config.layers)
    probe = circuits.apply(ansatz, result.best_params, rho_in)
    rho_theta, rho_error = qfi_.encoded_pair(probe, G, config.theta, config.delta)
    report = qfi_.bounds_report(rho_theta, rho_error, m, config.delta, G=G).check()
    ceiling = qfi_.max_qfi_mixed(rho_in.spectrum().eigenvalues / rho_in.trace, G)
    return [n, purity, m, result.best_value, result.restart_index, result.n_calls, ceiling] + report.to_row()


def run_optimize(config, experiment='optimize', settings=None):
    """
    Train the probe circuit for every (purity, m) setting; restarts are the
    work units. Returns {setting: (OptResult, optimum row)}.
    """
    if settings is None:
        settings = [(as_list(config.purity)[0], as_list(config.m)[0])]
    out_paths, locks = open_run(config, experiment, ['table', 'history'])
    ansatz = circuits.build_hw_efficient(config.n, config.layers)
    helper.log_line('ansatz %s' % ansatz.describe(), out_paths['log'], locks)
    units = []
    for setting in settings:
        for restart in range(config.optimizer.restarts):
            units.append((len(units), config, setting, restart, out_paths))
    results = helper.run_units(execute_restart, units, config.workers, locks)

    grouped = defaultdict(list)
    for _, setting, result in results:
        grouped[tuple(setting)].append(result)
    outcome, rows, history = {}, [], []
    for setting in settings:
        merged = merge_results(grouped[tuple(setting)])
        row = optimum_report(config, setting, merged)
        outcome[tuple(setting)] = (merged, row)
        rows.append(row)
        history += [[setting[0], setting[1]] + list(r) for r in merged.history_rows()]
        print('purity', setting[0], 'm', setting[1], 'best cost', merged.best_value)

    meta = io.metadata(config, experiment)
    io.write_table(out_paths['table'],
                   ['n', 'purity', 'm', 'best_cost', 'restart_index', 'n_calls', 'max_qfi'] + qfi_.BoundsReport.header(),
                   rows, meta)
    io.write_table(out_paths['history'], ['purity', 'm'] + io.COST_HISTORY_HEADER, history, meta)
    if config.save_params:
        io.save_params_to_hdf5({'purity_%s_m_%d' % s: outcome[s][0] for s in outcome},
                               os.path.join(config.out_path, 'params', '%s.hdf5' % experiment))
    close_run(out_paths)
    return outcome


def run_m_sweep(config):
    purity = as_list(config.purity)[0]
    return run_optimize(config, 'm-sweep', [(purity, m) for m in config.sweep['m_values']])


def run_purity_sweep(config):
    m = as_list(config.m)[0]
    return run_optimize(config, 'purity-sweep', [(p, m) for p in config.sweep['purities']])


# variance-scan

def execute_variance(index, config, n, delta, out_paths, locks):
    scan = config.variance_scan
    layers = layers_for(n, scan['layers_log_base'])
    G = circuits.magnetometry(n)
    if scan['state'] == 'random':
        rho_in = states.random_state_with_purity(n, as_list(config.purity)[0], derive_seed(config.seed, n))
    else:
        rho_in = states.basis_state(n)
    ansatz = circuits.build_hw_efficient(n, layers)
    m = min(as_list(config.m)[0], 2 ** n)
    # Keyed by n so every delta sees the same parameter pairs.
    rng = np.random.default_rng(derive_seed(config.seed, n))
    differences = []
    for _ in range(scan['samples']):
        alpha, alpha_prime = rng.uniform(0., 2. * np.pi, (2, ansatz.param_count))
        c = cost_tqfi_lower(circuits.apply(ansatz, alpha, rho_in), G, config.theta, delta, m)
        c_prime = cost_tqfi_lower(circuits.apply(ansatz, alpha_prime, rho_in), G, config.theta, delta, m)
        differences.append((c - c_prime) / n ** 2)
    variance = float(np.var(differences, ddof=1))
    helper.log_line('n %d delta %s: var %.6g' % (n, delta, variance), out_paths['log'], locks)
    return index, [n, delta, layers, scan['samples'], variance]


def run_variance_scan(config):
    scan = config.variance_scan
    out_paths, locks = open_run(config, 'variance-scan', ['table', 'slopes'])
    units = []
    for n in scan['n_values']:
        for delta in scan['deltas']:
            units.append((len(units), config, n, delta, out_paths))
    rows = [row for _, row in helper.run_units(execute_variance, units, config.workers, locks)]

    slopes = []
    for delta in scan['deltas']:
        selected = [row for row in rows if row[1] == delta]
        slope, intercept, rvalue = stats.fit_log_slope([row[0] for row in selected], [row[4] for row in selected])
        slopes.append([delta, slope, intercept, rvalue])
        print('delta', delta, 'slope of ln Var vs n', slope)
    meta = io.metadata(config, 'variance-scan')
    io.write_table(out_paths['table'], io.VARIANCE_HEADER, rows, meta)
    io.write_table(out_paths['slopes'], io.SLOPE_HEADER, slopes, meta)
    close_run(out_paths)
    return rows, slopes


# bound-compare

def compare_purities(n, count):
    """``count`` evenly spaced purities strictly inside (1/n, 1)."""
    return list(np.linspace(1. / n, 1., count + 2)[1:-1])


def execute_compare(index, config, n, purity, out_paths, locks):
    compare = config.bound_compare
    dx2 = compare['dx2']
    G = circuits.magnetometry(n)
    if compare['spectrum'] == 'depolarized':
        spectrum = states.depolarized_spectrum(2 ** n, purity)
    else:
        spectrum = states.random_spectrum_with_purity(2 ** n, purity,
                                                      np.random.default_rng(derive_seed(config.seed, index)))
    rho = states.optimal_mixed_probe(spectrum, G)
    rho_theta, rho_error = qfi_.encoded_pair(rho, G, config.theta, dx2)
    m = min(compare['m'], 2 ** n)
    tqfi = qfi_.tqfi_bounds(rho_theta, rho_error, m, dx2)
    ssqfi = qfi_.ssqfi_bounds(rho_theta, rho_error, dx2)
    H, J = qfi_.dynamics_agnostic_bounds(tqfi, ssqfi)
    K = qfi_.strata_count(n, compare['t'], compare['log_base'])
    loss = qfi_.purity_loss_bound(rho, G, config.theta, dx2, K, rng_seed=derive_seed(config.seed, index),
                                  sampling=compare['sampling'])
    exact = qfi_.exact_qfi(rho_theta, G)
    helper.log_line('n %d purity %.4f: H=%.6g purity loss=%.6g' % (n, purity, H, loss.L_stratified),
                    out_paths['log'], locks)
    return index, [n, purity, tqfi[0], ssqfi[0], H, J, loss.L_stratified, exact, K]


def run_bound_compare(config):
    compare = config.bound_compare
    out_paths, locks = open_run(config, 'bound-compare', ['table'])
    units = []
    for n in compare['n_values']:
        for purity in compare_purities(n, compare['n_purities']):
            units.append((len(units), config, n, purity, out_paths))
    rows = [row for _, row in helper.run_units(execute_compare, units, config.workers, locks)]
    io.write_table(out_paths['table'], io.COMPARE_HEADER, rows, io.metadata(config, 'bound-compare'))
    close_run(out_paths)
    return rows


RUNNERS = {'estimate': run_estimate,
           'optimize': run_optimize,
           'm-sweep': run_m_sweep,
           'purity-sweep': run_purity_sweep,
           'variance-scan': run_variance_scan,
           'bound-compare': run_bound_compare}
