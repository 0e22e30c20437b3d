import numpy as np
import pytest
from hypothesis import settings

from qfibound.core import circuits, states

# Eigendecompositions make single examples slow on a cold start.
settings.register_profile('qfibound', deadline=None, max_examples=25)
settings.load_profile('qfibound')


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def sum_z2():
    return circuits.magnetometry(2)


@pytest.fixture
def mixed2():
    """A random two-qubit state of purity 0.8."""
    return states.random_state_with_purity(2, 0.8, 7)


@pytest.fixture
def small_yaml(tmp_path):
    text = """
seed: 3
workers: 1
state: {n: 2, purity: 0.9, kind: random, count: 1}
encoding: {theta: 0.3, delta: 0.1, generator: sum_z}
bounds: {m: 2, eigensolver: exact}
ansatz: {layers: 1}
optimizer: {method: cobyla, max_iters: 15, restarts: 2}
vqse: {max_iters: 5, restarts: 1, n_runs: 2000}
sweep: {m_values: [1, 2], purities: [0.8, 0.9]}
variance_scan: {n_values: [2, 3], deltas: [0.1], samples: 6}
bound_compare: {n_values: [2], n_purities: 2, t: 0, m: 2}
"""
    path = tmp_path / 'config.yml'
    path.write_text(text)
    return str(path)
