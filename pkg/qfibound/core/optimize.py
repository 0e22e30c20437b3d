"""
Classical optimizers of the hybrid loop.

Every method maximizes. COBYLA and Nelder-Mead come from
``scipy.optimize.minimize``; one iteration is one objective evaluation, which
is how scipy counts their budget. Gradient descent takes one step per
iteration with a caller-supplied (parameter-shift) gradient.
"""
from collections import defaultdict

import numpy as np
import scipy.optimize

from ..utils.errors import ConfigError, ObjectiveEvaluationFailure
from ..utils.misc import derive_seed

METHODS = ('cobyla', 'nelder_mead', 'grad_descent')


class OptimizerConfig(object):
    """
    Settings of one optimizer. Unknown keywords raise TypeError, invalid
    values raise ConfigError naming the field.
    """

    def __init__(self, method='cobyla', max_iters=200, restarts=30, initial_step=0.5, learning_rate=0.1, seed=0,
                 convergence_tol=1e-8):
        if method not in METHODS:
            raise ConfigError('optimizer.method: %r is not one of %s' % (method, METHODS))
        if max_iters < 1:
            raise ConfigError('optimizer.max_iters: must be >= 1')
        if restarts < 1:
            raise ConfigError('optimizer.restarts: must be >= 1')
        if initial_step <= 0 or learning_rate <= 0:
            raise ConfigError('optimizer.initial_step and optimizer.learning_rate must be positive')
        self.method = method
        self.max_iters = max_iters
        self.restarts = restarts
        self.initial_step = initial_step
        self.learning_rate = learning_rate
        self.seed = seed
        self.convergence_tol = convergence_tol

    def to_dict(self):
        return dict(vars(self))


class OptResult(object):
    """
    Outcome of one or more restarts. ``history`` is the best-so-far value per
    iteration of the winning restart; every restart keeps its own history.
    """

    def __init__(self, best_params, best_value, history, restart_index, n_calls=0, restart_values=None,
                 restart_histories=None):
        self.best_params = best_params
        self.best_value = best_value
        self.history = history
        self.restart_index = restart_index
        self.n_calls = n_calls
        self.restart_values = restart_values if restart_values is not None else {}
        self.restart_histories = restart_histories if restart_histories is not None else {}

    def history_rows(self):
        """(restart, iteration, cost) rows, restarts in index order."""
        rows = []
        for r in sorted(self.restart_histories):
            rows += [(r, i, value) for i, value in enumerate(self.restart_histories[r])]
        return rows


class BudgetLedger(object):
    """Tally of quantum-circuit calls per category; multiply by shots for totals."""

    def __init__(self):
        self.counts = defaultdict(int)

    def add(self, category, circuits):
        self.counts[category] += int(circuits)

    def total(self, shots=1):
        return shots * sum(self.counts.values())


class _Tracker(object):
    def __init__(self, objective, restart_index):
        self.objective = objective
        self.restart_index = restart_index
        self.n_calls = 0
        self.best_value = -np.inf
        self.best_params = None
        self.history = []

    def __call__(self, x):
        try:
            value = float(self.objective(x))
        except ObjectiveEvaluationFailure:
            raise
        except Exception as err:
            raise ObjectiveEvaluationFailure(repr(err), restart_index=self.restart_index) from err
        if not np.isfinite(value):
            raise ObjectiveEvaluationFailure('objective returned %r' % value, restart_index=self.restart_index)
        self.n_calls += 1
        if value > self.best_value:
            self.best_value = value
            self.best_params = np.array(x, dtype=float)
        self.history.append(self.best_value)
        return value


def initial_point(n_params, seed, restart_index):
    rng = np.random.default_rng(derive_seed(seed, restart_index))
    return rng.uniform(0., 2. * np.pi, n_params)


def grad_descent_step(objective, params, lr, gradient=None, ledger=None):
    """
    One ascent step params + lr * grad(objective).

    ``gradient`` maps params to the gradient of ``objective``; with the
    parameter-shift rule it costs 2p circuit evaluations, which go to the
    ledger under 'gradient'.
    """
    if gradient is None:
        raise ValueError('gradient descent needs a gradient function')
    params = np.asarray(params, dtype=float)
    grad = np.asarray(gradient(params), dtype=float)
    if ledger is not None:
        ledger.add('gradient', 2 * params.size)
    return params + lr * grad


def run_restart(objective, n_params, config, restart_index, gradient=None, ledger=None):
    x0 = initial_point(n_params, config.seed, restart_index)
    tracker = _Tracker(objective, restart_index)
    if config.method == 'cobyla':
        scipy.optimize.minimize(lambda x: -tracker(x), x0, method='COBYLA', tol=config.convergence_tol,
                                options={'maxiter': config.max_iters, 'rhobeg': config.initial_step})
    elif config.method == 'nelder_mead':
        scipy.optimize.minimize(lambda x: -tracker(x), x0, method='Nelder-Mead',
                                options={'maxfev': config.max_iters, 'xatol': config.convergence_tol,
                                         'fatol': config.convergence_tol})
    else:
        x = x0
        tracker(x)
        for _ in range(config.max_iters):
            try:
                x = grad_descent_step(objective, x, config.learning_rate, gradient=gradient, ledger=ledger)
            except ObjectiveEvaluationFailure:
                raise
            except Exception as err:
                raise ObjectiveEvaluationFailure(repr(err), restart_index=restart_index) from err
            tracker(x)
    # scipy may overshoot its evaluation budget by the final point.
    history = tracker.history[:config.max_iters + 1]
    return OptResult(tracker.best_params, tracker.best_value, history, restart_index,
                     n_calls=tracker.n_calls,
                     restart_values={restart_index: tracker.best_value},
                     restart_histories={restart_index: history})


def merge_results(results):
    """Best over restarts; ties go to the lowest restart index."""
    results = sorted(results, key=lambda r: r.restart_index)
    best = results[0]
    for result in results[1:]:
        if result.best_value > best.best_value:
            best = result
    merged = OptResult(best.best_params, best.best_value, best.history, best.restart_index,
                       n_calls=sum(r.n_calls for r in results))
    for result in results:
        merged.restart_values.update(result.restart_values)
        merged.restart_histories.update(result.restart_histories)
    return merged


def maximize(objective, n_params, config, gradient=None, restart_indices=None, ledger=None):
    """
    Maximize ``objective`` over restarts with uniform [0, 2pi) starting points.

    Parameters
    ----------
    objective: callable
        Parameter vector -> real.
    n_params: int
    config: OptimizerConfig
    gradient: callable, optional
        Required for grad_descent.
    restart_indices: iterable of int, optional
        Subset of restarts to run (default all); lets workers split restarts
        without changing their seeds.
    ledger: BudgetLedger, optional

    Returns
    -------
    OptResult
    """
    if restart_indices is None:
        restart_indices = range(config.restarts)
    results = [run_restart(objective, n_params, config, r, gradient=gradient, ledger=ledger)
               for r in restart_indices]
    return merge_results(results)
