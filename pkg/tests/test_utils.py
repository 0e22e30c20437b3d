import numpy as np
import pytest

from qfibound.utils import misc, stats
from qfibound.utils.errors import ObjectiveEvaluationFailure, ConfigError


def test_makedirs(tmp_path):
    paths = misc.makedirs(str(tmp_path / 'out'), sub_dirs=['params', 'figures'])
    assert sorted(paths) == ['figures', 'params']
    assert all((tmp_path / 'out' / name).is_dir() for name in paths)


@pytest.mark.parametrize('n,expected', [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)])
def test_ceil_log2(n, expected):
    assert misc.ceil_log2(n) == expected


def test_derive_seed():
    assert misc.derive_seed(5, 3) == 6
    assert misc.derive_seed(5, 0) == 5


def test_stratified_nodes_are_symmetric():
    nodes = stats.stratified_normal_nodes(0.3, 0.04, 7)
    np.testing.assert_allclose(nodes - 0.3, -(nodes - 0.3)[::-1], atol=1e-12)
    assert nodes[3] == pytest.approx(0.3)


def test_binomial_std_error():
    assert stats.binomial_std_error(0.5, 100) == pytest.approx(0.05)
    assert stats.binomial_std_error(1., 100) == 0.


def test_fit_log_slope():
    x = np.arange(2, 8)
    slope, intercept, rvalue = stats.fit_log_slope(x, 3. * np.exp(-0.7 * x))
    assert slope == pytest.approx(-0.7)
    assert intercept == pytest.approx(np.log(3.))
    assert rvalue == pytest.approx(-1.)


def test_error_hierarchy():
    assert issubclass(ConfigError, ValueError)
    err = ObjectiveEvaluationFailure('boom', restart_index=4)
    assert str(err) == 'restart 4: boom'
    assert err.restart_index == 4
