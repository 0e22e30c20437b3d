import pytest
import yaml

from qfibound.core.configurator import Configurator
from qfibound.utils.errors import ConfigError


def write(tmp_path, text):
    path = tmp_path / 'config.yml'
    path.write_text(text)
    return str(path)


class TestDefaults:

    def test_defaults_without_file(self, tmp_path):
        config = Configurator().to_experiment_config('estimate', out=str(tmp_path / 'out'))
        assert (config.n, config.m, config.theta, config.delta) == (4, 4, 0.3, 0.1)
        assert config.optimizer.method == 'cobyla'
        assert config.optimizer.max_iters == 200
        assert config.optimizer.restarts == 30
        assert config.n_runs == 1000000
        assert config.variance_scan['samples'] == 200
        assert (tmp_path / 'out' / 'params').is_dir()

    def test_defaults_document_round_trips(self):
        document = yaml.safe_load(Configurator().defaults())
        assert document['state']['n'] == 4
        assert document['optimizer']['restarts'] == 30
        assert document['bound_compare']['t'] == 200


class TestOverrides:

    def test_file_values(self, small_yaml, tmp_path):
        config = Configurator(small_yaml).to_experiment_config('optimize', out=str(tmp_path))
        assert config.seed == 3
        assert config.n == 2
        assert config.optimizer.seed == 3
        assert config.optimizer.max_iters == 15
        assert config.sweep['m_values'] == [1, 2]
        assert config.vqse['learning_rate'] == 0.1

    def test_command_line_wins(self, small_yaml, tmp_path):
        config = Configurator(small_yaml).to_experiment_config('optimize', seed=9, workers=2, out=str(tmp_path),
                                                               shots=True, save_params=True)
        assert (config.seed, config.workers, config.shots_mode, config.save_params) == (9, 2, True, True)
        assert config.optimizer.seed == 9

    def test_to_dict_is_plain(self, small_yaml, tmp_path):
        document = Configurator(small_yaml).to_experiment_config('estimate', out=str(tmp_path)).to_dict()
        assert document['optimizer']['method'] == 'cobyla'


class TestErrors:

    @pytest.mark.parametrize('text,name', [
        ('bounds: {m: 40}', 'bounds.m'),
        ('bounds: {m: [1, 40]}', 'bounds.m'),
        ('bounds: {m: [1, two]}', 'bounds.m'),
        ('sweep: {m_values: [1, 40]}', 'sweep.m_values'),
        ('sweep: {m_values: 0}', 'sweep.m_values'),
        ('state: {n: 2, purity: 0.1}', 'state.purity'),
        ('state: {kind: thermal}', 'state.kind'),
        ('encoding: {delta: 0}', 'encoding.delta'),
        ('optimizer: {method: adam}', 'optimizer.method'),
        ('bound_compare: {log_base: 3}', 'bound_compare.log_base'),
        ('vqse: {mode: tomography}', 'vqse.mode'),
    ])
    def test_invalid_field_is_named(self, tmp_path, text, name):
        with pytest.raises(ConfigError, match=name):
            Configurator(write(tmp_path, text)).to_experiment_config('estimate', out=str(tmp_path))

    def test_list_of_m(self, tmp_path):
        config = Configurator(write(tmp_path, 'bounds: {m: [1, 2, 4]}')).to_experiment_config('estimate', out=str(tmp_path))
        assert config.m == [1, 2, 4]

    def test_unknown_optimizer_key(self, tmp_path):
        with pytest.raises(ConfigError, match='optimizer'):
            Configurator(write(tmp_path, 'optimizer: {momentum: 0.9}')).to_experiment_config('estimate',
                                                                                           out=str(tmp_path))

    def test_unknown_experiment(self, tmp_path):
        with pytest.raises(ConfigError, match='experiment'):
            Configurator().to_experiment_config('tomography', out=str(tmp_path))

    def test_section_must_be_mapping(self, tmp_path):
        with pytest.raises(ConfigError, match='state'):
            Configurator(write(tmp_path, 'state: [1, 2]')).to_experiment_config('estimate', out=str(tmp_path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            Configurator(str(tmp_path / 'absent.yml'))

    def test_top_level_must_be_mapping(self, tmp_path):
        with pytest.raises(ConfigError):
            Configurator(write(tmp_path, '- 1\n- 2\n'))
