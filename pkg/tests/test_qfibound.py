"""End-to-end runs of the command line on a tiny configuration."""
import os

import pytest

from qfibound.core import io
from qfibound.scripts import experiments, helper
from qfibound.scripts.qfibound import run_command, get_args
from qfibound.utils.errors import DegenerateLowSpectrum, NegativeSpectrum, NonPSDTMatrix, NumericalInconsistency


def run(small_yaml, out, *command):
    return run_command(list(command) + ['--config', small_yaml, '--out', str(out)])


class TestExperiments:

    def test_estimate(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'estimate') == 0
        df = io.read_table(str(tmp_path / 'estimate.csv'))
        assert len(df) == 1
        assert (df['H_delta'] <= df['I_delta'] + 1e-8).all()
        assert (df['I_delta'] <= df['J_delta'] + 1e-8).all()
        assert helper.is_successful(str(tmp_path / 'estimate.log'))

    def test_estimate_with_vqse(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'estimate', '--shots') == 0
        config_path = tmp_path / 'vqse.yml'
        config_path.write_text(open(small_yaml).read().replace('eigensolver: exact', 'eigensolver: vqse'))
        assert run_command(['estimate', '--config', str(config_path), '--out', str(tmp_path / 'vqse')]) == 0
        df = io.read_table(str(tmp_path / 'vqse' / 'estimate.csv'))
        assert df['eigensolver'].tolist() == ['vqse']
        assert (df['vqse_calls'] > 0).all()
        history = io.read_table(str(tmp_path / 'vqse' / 'estimate.vqse_history.csv'))
        assert len(history) > 0
        assert history['m'].unique().tolist() == [2]
        assert 'param_count' in open(str(tmp_path / 'vqse' / 'estimate.log')).read()

    def test_estimate_list_of_m(self, small_yaml, tmp_path):
        config_path = tmp_path / 'list.yml'
        config_path.write_text(open(small_yaml).read().replace('m: 2,', 'm: [1, 2],'))
        assert run_command(['estimate', '--config', str(config_path), '--out', str(tmp_path / 'list')]) == 0
        df = io.read_table(str(tmp_path / 'list' / 'estimate.csv'))
        assert df['m'].tolist() == [1, 2]
        assert (df['vqse_calls'] == 0).all()

    def test_optimize_with_params(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'optimize', '--save_params') == 0
        table = io.read_table(str(tmp_path / 'optimize.csv'))
        history = io.read_table(str(tmp_path / 'optimize.history.csv'))
        assert len(history) <= table['n_calls'].iloc[0]
        assert sorted(history['restart'].unique()) == [0, 1]
        assert table['best_cost'].iloc[0] <= table['max_qfi'].iloc[0] + 1e-6
        assert os.path.exists(tmp_path / 'params' / 'optimize.hdf5')

    def test_optimize_independent_of_workers(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path / 'one', 'optimize', '--workers', '1') == 0
        assert run(small_yaml, tmp_path / 'two', 'optimize', '--workers', '2') == 0
        one = io.read_table(str(tmp_path / 'one' / 'optimize.csv'))
        two = io.read_table(str(tmp_path / 'two' / 'optimize.csv'))
        assert one['best_cost'].tolist() == two['best_cost'].tolist()

    def test_m_sweep(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'm-sweep') == 0
        assert io.read_table(str(tmp_path / 'm-sweep.csv'))['m'].tolist() == [1, 2]

    def test_purity_sweep(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'purity-sweep') == 0
        assert io.read_table(str(tmp_path / 'purity-sweep.csv'))['purity'].tolist() == [0.8, 0.9]

    def test_variance_scan(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'variance-scan') == 0
        df = io.read_table(str(tmp_path / 'variance-scan.csv'))
        assert df['n'].tolist() == [2, 3]
        assert (df['var_delta_C_over_n2'] > 0).all()
        slopes = io.read_table(str(tmp_path / 'variance-scan.slopes.csv'))
        assert len(slopes) == 1

    def test_bound_compare(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'bound-compare') == 0
        df = io.read_table(str(tmp_path / 'bound-compare.csv'))
        assert len(df) == 2
        assert (df['strata'] == 3).all()
        assert (df['tqfi_lower'] <= df['exact'] + 1e-6).all()
        assert io.read_metadata(str(tmp_path / 'bound-compare.csv'))['strata_log_base'] == 'e'


class TestCommandLine:

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / 'bad.yml'
        path.write_text('bounds: {m: 99}\n')
        assert run_command(['estimate', '--config', str(path), '--out', str(tmp_path)]) == 2
        assert 'ERROR' in capsys.readouterr().err

    @pytest.mark.parametrize('error,code', [
        (NumericalInconsistency('sub-fidelity radicand -1.000e-03 is negative'), 3),
        (NonPSDTMatrix('T-matrix eigenvalue -1.000e-03'), 3),
        (NegativeSpectrum('eigenvalue -1.000e-03'), 3),
        (DegenerateLowSpectrum('no gap below m'), 2),
    ])
    def test_error_exit_codes(self, small_yaml, tmp_path, monkeypatch, capsys, error, code):
        def failing(config):
            raise error
        monkeypatch.setitem(experiments.RUNNERS, 'estimate', failing)
        assert run(small_yaml, tmp_path, 'estimate') == code
        assert str(error) in capsys.readouterr().err

    def test_list_entry_out_of_range(self, tmp_path, capsys):
        path = tmp_path / 'bad.yml'
        path.write_text('bounds: {m: [1, 99]}\n')
        assert run_command(['estimate', '--config', str(path), '--out', str(tmp_path)]) == 2
        assert 'bounds.m' in capsys.readouterr().err

    def test_defaults(self, capsys):
        assert run_command(['defaults']) == 0
        assert 'variance_scan' in capsys.readouterr().out

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            get_args([])

    def test_plot_requires_kind(self):
        with pytest.raises(SystemExit):
            get_args(['plot', '--csv', 'table.csv'])

    @pytest.mark.parametrize('experiment,table,kind', [
        ('bound-compare', 'bound-compare.csv', 'bounds'),
        ('variance-scan', 'variance-scan.csv', 'variance'),
        ('m-sweep', 'm-sweep.history.csv', 'cost'),
    ])
    def test_plot(self, small_yaml, tmp_path, experiment, table, kind):
        assert run(small_yaml, tmp_path, experiment) == 0
        csv_path = str(tmp_path / table)
        svg_path = str(tmp_path / 'figure.svg')
        assert run_command(['plot', '--csv', csv_path, '--kind', kind, '--out', svg_path]) == 0
        first = open(svg_path).read()
        assert first.startswith('<?xml')
        assert run_command(['plot', '--csv', csv_path, '--kind', kind, '--out', svg_path]) == 0
        assert open(svg_path).read() == first

    def test_plot_wrong_table(self, small_yaml, tmp_path):
        assert run(small_yaml, tmp_path, 'variance-scan') == 0
        csv_path = str(tmp_path / 'variance-scan.csv')
        assert run_command(['plot', '--csv', csv_path, '--kind', 'bounds']) == 2
