"""
Variational state eigensolver.

A circuit V(beta) is trained to minimize Tr[H V rho V^dagger] for a diagonal
H whose low energies are non-degenerate. Once trained, the m most populated
computational basis states z_i give eigenvalue estimates (their populations)
and eigenvector estimates V^dagger |z_i>.
"""
import numpy as np

from . import circuits
from .optimize import OptimizerConfig, BudgetLedger, maximize
from .states import DensityMatrix
from ..utils.errors import DegenerateLowSpectrum, DimMismatch, MOutOfRange

INV_GOLDEN = 0.6180339887
ENERGY_GAP = 1e-12
VQSE_MODES = ('exact', 'shots')


class DiagHamiltonian(object):
    """
    H = sum_i q_i z_i with q_i = 1 + (i - 1) g / n, g the inverse golden ratio.

    Raises DegenerateLowSpectrum when the m lowest energies are not pairwise
    distinct.
    """

    def __init__(self, n, m, gap=INV_GOLDEN):
        self.n = n
        self.m = m
        self.weights = 1. + np.arange(n) * gap / n
        bits = (np.arange(2 ** n)[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
        self.energies = bits @ self.weights
        self.labels = np.argsort(self.energies, kind='stable')
        self._check(bits)

    def _check(self, bits):
        if self.m > len(self.energies):
            raise MOutOfRange('m = %d exceeds dimension %d' % (self.m, len(self.energies)))
        if self.n <= 10:
            candidates = self.energies
        else:
            # Low energies live at low Hamming weight.
            weight = int(np.ceil(np.log2(max(self.m, 1)))) + 1
            candidates = self.energies[bits.sum(axis=1) <= weight]
        lowest = np.sort(candidates)[:self.m]
        if np.any(np.diff(lowest) <= ENERGY_GAP):
            raise DegenerateLowSpectrum('the %d lowest energies of the %d-qubit Hamiltonian are degenerate'
                                        % (self.m, self.n))

    def energy(self, bitstring):
        return float(np.dot(self.weights, [int(b) for b in bitstring]))


def vqse_cost(H, V, beta, rho):
    if rho.n_qubits != H.n:
        raise DimMismatch('Hamiltonian on %d qubits, state on %d' % (H.n, rho.n_qubits))
    rotated = circuits.apply(V, beta, rho)
    return float(np.dot(H.energies, np.diag(rotated.mat).real))


class VqseResult(object):
    """
    Trained diagonalizing circuit and its readout.

    ``populations`` are the diagonal of V rho V^dagger (or their sampled
    frequencies); ``labels`` are the m most populated basis states.
    """

    def __init__(self, beta_opt, eigenvalue_estimates, labels, ansatz, cost_history, n_runs, mode, calls=0,
                 populations=None):
        self.beta_opt = beta_opt
        self.eigenvalue_estimates = eigenvalue_estimates
        self.labels = labels
        self.ansatz = ansatz
        self.cost_history = cost_history
        self.n_runs = n_runs
        self.mode = mode
        self.calls = calls
        self.populations = populations

    def eigenvectors(self):
        """Columns V^dagger |z_i> for the reported labels."""
        U = circuits.unitary(self.ansatz, self.beta_opt)
        return U.conj().T[:, self.labels]

    def dephased_state(self):
        """
        V^dagger diag(populations) V: the state whose principal eigenpairs are
        the reported estimates. Truncated fidelities built from the estimates
        are bounds on its fidelity.
        """
        U = circuits.unitary(self.ansatz, self.beta_opt)
        return DensityMatrix((U.conj().T * self.populations) @ U, check=False)

    def cost_history_rows(self):
        return [(i, cost) for i, cost in enumerate(self.cost_history)]


def vqse_optimizer_config(seed=0, max_iters=200, restarts=30, learning_rate=0.1):
    return OptimizerConfig(method='grad_descent', max_iters=max_iters, restarts=restarts,
                           learning_rate=learning_rate, seed=seed)


def run_vqse(rho, m, ansatz, optimizer_config, n_runs, rng_seed, mode='exact'):
    """
    Train the diagonalizing circuit and read out the m principal eigenpairs.

    Parameters
    ----------
    rho: DensityMatrix
    m: int
    ansatz: Ansatz
        V(beta), on the qubits of rho.
    optimizer_config: OptimizerConfig
    n_runs: int
        Measurement shots of the readout in 'shots' mode.
    rng_seed: int
        Seed of the readout sampling.
    mode: 'exact' or 'shots'

    Returns
    -------
    VqseResult
    """
    if mode not in VQSE_MODES:
        raise ValueError('unknown VQSE mode %r' % mode)
    if not 1 <= m <= rho.dim:
        raise MOutOfRange('m = %d outside [1, %d]' % (m, rho.dim))
    H = DiagHamiltonian(rho.n_qubits, m)

    def cost(beta):
        return vqse_cost(H, ansatz, beta, rho)

    def objective(beta):
        return -cost(beta)

    def gradient(beta):
        return -circuits.param_shift_gradient(cost, ansatz, beta)

    ledger = BudgetLedger()
    result = maximize(objective, ansatz.param_count, optimizer_config, gradient=gradient, ledger=ledger)

    rotated = circuits.apply(ansatz, result.best_params, rho)
    populations = np.clip(np.diag(rotated.mat).real, 0., None)
    if mode == 'shots':
        rng = np.random.default_rng(rng_seed)
        populations = rng.multinomial(n_runs, populations / populations.sum()) / n_runs
    labels = np.argsort(-populations, kind='stable')[:m]
    return VqseResult(beta_opt=result.best_params,
                      eigenvalue_estimates=populations[labels].copy(),
                      labels=labels,
                      ansatz=ansatz,
                      cost_history=[-value for value in result.history],
                      n_runs=n_runs if mode == 'shots' else 0,
                      mode=mode,
                      calls=ledger.total(),
                      populations=populations)
