import csv
import os

import h5py
import numpy as np
import pandas
import ujson

from .. import __version__
from ..utils.errors import MalformedCSV

COST_HISTORY_HEADER = ['restart', 'iteration', 'cost']
VARIANCE_HEADER = ['n', 'delta', 'layers', 'samples', 'var_delta_C_over_n2']
SLOPE_HEADER = ['delta', 'slope', 'intercept', 'rvalue']
COMPARE_HEADER = ['n', 'purity', 'tqfi_lower', 'ssqfi_lower', 'H', 'J', 'purity_loss', 'exact', 'strata']


def metadata(config, command, **extra):
    """Ordered (key, value) pairs heading every output table."""
    items = [('version', 'v' + __version__),
             ('command', command),
             ('seed', config.seed),
             ('layers_log_base', config.variance_scan['layers_log_base']),
             ('strata_log_base', config.bound_compare['log_base']),
             ('final_cnot_brick', True),
             ('optimizer_iteration', 'one objective evaluation (cobyla, nelder_mead) or one step (grad_descent)'),
             ('vqse_n_runs', config.vqse['n_runs'] if config.shots_mode or config.vqse['mode'] == 'shots' else 'exact')]
    items += sorted(extra.items())
    items.append(('config', ujson.dumps(config.to_dict(), sort_keys=True)))
    return items


def write_table(filepath, header, rows, meta=()):
    with open(filepath, 'w', newline='') as f:
        for key, value in meta:
            f.write('# %s: %s\n' % (key, value))
        writer = csv.writer(f, delimiter=',')
        writer.writerow(header)
        writer.writerows(rows)
    return filepath


def read_table(filepath):
    """Table body as a DataFrame, metadata block skipped."""
    if not os.path.exists(filepath):
        raise MalformedCSV('%s does not exist' % filepath)
    try:
        df = pandas.read_csv(filepath, comment='#')
    except (pandas.errors.EmptyDataError, pandas.errors.ParserError) as err:
        raise MalformedCSV('%s: %s' % (filepath, err))
    if len(df) == 0:
        raise MalformedCSV('%s has no data rows' % filepath)
    return df


def read_metadata(filepath):
    meta = {}
    with open(filepath, 'r') as f:
        for line in f:
            if not line.startswith('# '):
                break
            key, _, value = line[2:].rstrip('\n').partition(': ')
            meta[key] = value
    return meta


def save_params_to_hdf5(runs, params_filepath):
    """
    Parameters
    ----------
    runs: dict
        name -> OptResult.
    """
    with h5py.File(params_filepath, 'a') as f:
        for name, result in runs.items():
            if name in f:
                del f[name]
            group = f.create_group(name)
            group.create_dataset('best_params', data=np.asarray(result.best_params, dtype=float))
            group.create_dataset('history', data=np.asarray(result.history, dtype=float))
            group.attrs['best_value'] = result.best_value
            group.attrs['restart_index'] = result.restart_index
            group.attrs['n_calls'] = result.n_calls


def load_params(params_filepath):
    runs = {}
    with h5py.File(params_filepath, 'r') as f:
        for name, group in f.items():
            runs[name] = {'best_params': group['best_params'][:],
                          'history': group['history'][:],
                          'best_value': float(group.attrs['best_value']),
                          'restart_index': int(group.attrs['restart_index'])}
    return runs
