import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from ..core import io
from ..utils.errors import MalformedCSV

PLOT_KINDS = ('cost', 'bounds', 'variance')
BOUND_SERIES = ['tqfi_lower', 'ssqfi_lower', 'H', 'J', 'purity_loss', 'exact']


def _require(df, columns, csv_path):
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise MalformedCSV('%s lacks columns %s' % (csv_path, missing))


def _plot_cost(df, csv_path):
    _require(df, ['iteration', 'cost'], csv_path)
    keys = [c for c in ('purity', 'm') if c in df.columns]
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = df.groupby(keys) if keys else [((), df)]
    for key, group in groups:
        # Mean best-so-far cost over restarts.
        curve = group.groupby('iteration')['cost'].mean()
        key = key if isinstance(key, tuple) else (key,)
        label = ', '.join('%s=%s' % kv for kv in zip(keys, key)) or 'cost'
        ax.plot(curve.index.values, curve.values, label=label)
    ax.set_xlabel('iteration')
    ax.set_ylabel('cost')
    ax.legend(frameon=False)
    return fig


def _plot_bounds(df, csv_path):
    _require(df, ['n', 'purity'], csv_path)
    series = [c for c in BOUND_SERIES if c in df.columns]
    if not series:
        raise MalformedCSV('%s has no bound columns' % csv_path)
    sizes = sorted(df['n'].unique())
    fig, axes = plt.subplots(1, len(sizes), figsize=(4 * len(sizes), 4), squeeze=False)
    for ax, n in zip(axes[0], sizes):
        panel = df[df['n'] == n].sort_values('purity')
        for column in series:
            ax.plot(panel['purity'].values, panel[column].values, marker='o', markersize=3, label=column)
        ax.set_title('n = %d' % n)
        ax.set_xlabel('purity')
    axes[0][0].set_ylabel('QFI bound')
    axes[0][-1].legend(frameon=False)
    return fig


def _plot_variance(df, csv_path):
    _require(df, ['n', 'delta', 'var_delta_C_over_n2'], csv_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    for delta, group in df.groupby('delta'):
        group = group.sort_values('n')
        ax.semilogy(group['n'].values, group['var_delta_C_over_n2'].values, marker='o', label='delta=%s' % delta)
    ax.set_xlabel('n')
    ax.set_ylabel('var_delta_C_over_n2')
    ax.legend(frameon=False)
    return fig


def plot(csv_path, kind, out_path=None):
    """
    Render a result table as an SVG. The output carries no timestamp and a
    fixed hash salt, so equal tables give equal files.
    """
    if kind not in PLOT_KINDS:
        raise ValueError('plot kind %r is not one of %s' % (kind, PLOT_KINDS))
    df = io.read_table(csv_path)
    fig = {'cost': _plot_cost, 'bounds': _plot_bounds, 'variance': _plot_variance}[kind](df, csv_path)
    if out_path is None:
        out_path = os.path.splitext(csv_path)[0] + '.svg'
    with matplotlib.rc_context({'svg.hashsalt': 'qfibound', 'svg.fonttype': 'none'}):
        fig.savefig(out_path, format='svg', metadata={'Date': None})
    plt.close(fig)
    return out_path
