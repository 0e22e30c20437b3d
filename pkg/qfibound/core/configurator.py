import copy
import os

import numpy as np
import yaml

from .optimize import OptimizerConfig
from ..utils import misc
from ..utils.misc import as_list
from ..utils.errors import ConfigError

EXPERIMENTS = ('estimate', 'optimize', 'm-sweep', 'purity-sweep', 'variance-scan', 'bound-compare')
STATE_KINDS = ('random', 'ghz', 'zero', 'maximally_mixed', 'optimal')
GENERATORS = ('sum_z', 'random')


class ExperimentConfig(object):
    """
    Validated settings of one run; every field is echoed into the output metadata.

    ``bounds['m']``, ``state['purity']`` may be a value or a list of values;
    the estimate experiment runs every combination.
    """

    def __init__(self, experiment, out_path, seed=0, workers=1, shots_mode=False, save_params=False,
                 state=None, encoding=None, bounds=None, ansatz=None, optimizer=None, vqse=None, sweep=None,
                 variance_scan=None, bound_compare=None):
        self.experiment = experiment
        self.out_path = out_path
        self.seed = seed
        self.workers = workers
        self.shots_mode = shots_mode
        self.save_params = save_params
        self.state = state or {}
        self.encoding = encoding or {}
        self.bounds = bounds or {}
        self.ansatz = ansatz or {}
        self.optimizer = optimizer or OptimizerConfig()
        self.vqse = vqse or {}
        self.sweep = sweep or {}
        self.variance_scan = variance_scan or {}
        self.bound_compare = bound_compare or {}

    @property
    def n(self):
        return self.state['n']

    @property
    def theta(self):
        return self.encoding['theta']

    @property
    def delta(self):
        return self.encoding['delta']

    @property
    def m(self):
        return self.bounds['m']

    @property
    def purity(self):
        return self.state['purity']

    @property
    def layers(self):
        return self.ansatz['layers']

    @property
    def n_runs(self):
        return self.vqse['n_runs']

    @property
    def samples(self):
        return self.variance_scan['samples']

    def to_dict(self):
        document = {key: copy.deepcopy(value) for key, value in vars(self).items() if key != 'optimizer'}
        document['optimizer'] = self.optimizer.to_dict()
        return document

    def validate(self):
        def require(ok, name, message):
            if not ok:
                raise ConfigError('%s: %s' % (name, message))

        def numbers(value):
            values = as_list(value)
            return all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values) and len(values) > 0

        require(self.experiment in EXPERIMENTS, 'experiment', '%r is not one of %s' % (self.experiment, EXPERIMENTS))
        require(self.workers >= 1, 'workers', 'must be >= 1')
        n = self.state['n']
        require(isinstance(n, int) and 1 <= n <= 10, 'state.n', 'must be an integer in [1, 10]')
        require(self.state['kind'] in STATE_KINDS, 'state.kind', 'must be one of %s' % (STATE_KINDS,))
        require(numbers(self.state['purity']), 'state.purity', 'must be a number or a list of numbers')
        purities = np.asarray(as_list(self.state['purity']), dtype=float)
        require(np.all((purities >= 1. / 2 ** n - 1e-12) & (purities <= 1.)), 'state.purity',
                'must lie in [1/2^n, 1]')
        require(self.state['count'] >= 1, 'state.count', 'must be >= 1')
        require(self.encoding['delta'] != 0, 'encoding.delta', 'must be non-zero')
        require(self.encoding['generator'] in GENERATORS, 'encoding.generator', 'must be one of %s' % (GENERATORS,))
        require(numbers(self.bounds['m']), 'bounds.m', 'must be an integer or a list of integers')
        require(all(1 <= m <= 2 ** n for m in as_list(self.bounds['m'])), 'bounds.m', 'must lie in [1, 2^n]')
        require(self.bounds['eigensolver'] in ('exact', 'vqse'), 'bounds.eigensolver', "must be 'exact' or 'vqse'")
        require(self.ansatz['layers'] >= 1, 'ansatz.layers', 'must be >= 1')
        require(self.vqse['mode'] in ('exact', 'shots'), 'vqse.mode', "must be 'exact' or 'shots'")
        require(self.vqse['n_runs'] >= 1, 'vqse.n_runs', 'must be >= 1')
        require(numbers(self.sweep['m_values']), 'sweep.m_values', 'must be a list of integers')
        require(all(1 <= m <= 2 ** n for m in as_list(self.sweep['m_values'])), 'sweep.m_values', 'must lie in [1, 2^n]')
        require(all(0 < p <= 1 for p in self.sweep['purities']), 'sweep.purities', 'must lie in (0, 1]')
        require(min(self.variance_scan['n_values']) >= 2, 'variance_scan.n_values', 'must be >= 2')
        require(self.variance_scan['samples'] >= 2, 'variance_scan.samples', 'must be >= 2')
        require(all(d != 0 for d in self.variance_scan['deltas']), 'variance_scan.deltas', 'must be non-zero')
        require(min(self.bound_compare['n_values']) >= 2, 'bound_compare.n_values', 'must be >= 2')
        require(self.bound_compare['dx2'] > 0, 'bound_compare.dx2', 'must be positive')
        require(self.bound_compare['t'] >= 0, 'bound_compare.t', 'must be >= 0')
        require(str(self.bound_compare['log_base']) in ('e', '2', '10'), 'bound_compare.log_base',
                "must be 'e', 2 or 10")
        require(self.bound_compare['spectrum'] in ('random', 'depolarized'), 'bound_compare.spectrum',
                "must be 'random' or 'depolarized'")
        return self


class Configurator(object):
    """
    Reads a YAML configuration; every section getter fills in defaults.
    A missing file path means defaults only.
    """

    def __init__(self, config_filepath=None):
        self.filepath = None
        self.yaml = {}
        if config_filepath is not None:
            self.filepath = os.path.abspath(config_filepath)
            try:
                with open(self.filepath, 'r') as f:
                    self.yaml = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as err:
                raise ConfigError('cannot read %s: %s' % (config_filepath, err))
            if not isinstance(self.yaml, dict):
                raise ConfigError('%s: top level must be a mapping' % config_filepath)

    def _section(self, name):
        section = self.yaml.get(name) or {}
        if not isinstance(section, dict):
            raise ConfigError('%s: must be a mapping' % name)
        return dict(section)

    def get_paths(self, out=None):
        paths = {}
        paths['out_dir'] = os.path.abspath(out or self.yaml.get('out', 'qfibound_out'))
        paths.update(misc.makedirs(paths['out_dir'], sub_dirs=['params']))
        return paths

    def get_state(self):
        state = self._section('state')
        state.setdefault('n', 4)
        state.setdefault('purity', 0.95)
        state.setdefault('kind', 'random')
        state.setdefault('count', 1)
        return state

    def get_encoding(self):
        encoding = self._section('encoding')
        encoding.setdefault('theta', 0.3)
        encoding.setdefault('delta', 0.1)
        encoding.setdefault('generator', 'sum_z')
        return encoding

    def get_bounds(self):
        bounds = self._section('bounds')
        bounds.setdefault('m', 4)
        bounds.setdefault('eigensolver', 'exact')
        return bounds

    def get_ansatz(self):
        ansatz = self._section('ansatz')
        ansatz.setdefault('layers', 3)
        return ansatz

    def get_optimizer(self, seed=0):
        optimizer = self._section('optimizer')
        optimizer.setdefault('seed', seed)
        try:
            return OptimizerConfig(**optimizer)
        except TypeError as err:
            raise ConfigError('optimizer: %s' % err)

    def get_vqse(self):
        vqse = self._section('vqse')
        vqse.setdefault('mode', 'exact')
        vqse.setdefault('n_runs', 1000000)
        vqse.setdefault('layers', None)
        vqse.setdefault('max_iters', 200)
        vqse.setdefault('restarts', 30)
        vqse.setdefault('learning_rate', 0.1)
        return vqse

    def get_sweep(self):
        sweep = self._section('sweep')
        sweep.setdefault('m_values', [1, 2, 3, 4])
        sweep.setdefault('purities', [0.75, 0.80, 0.85, 0.90, 0.95])
        return sweep

    def get_variance_scan(self):
        scan = self._section('variance_scan')
        scan.setdefault('n_values', [2, 3, 4, 5, 6, 7, 8])
        scan.setdefault('deltas', [0.1, 0.5, 1.0])
        scan.setdefault('samples', 200)
        scan.setdefault('state', 'zero')
        scan.setdefault('layers_log_base', 2)
        return scan

    def get_bound_compare(self):
        compare = self._section('bound_compare')
        compare.setdefault('n_values', [4, 6])
        compare.setdefault('n_purities', 8)
        compare.setdefault('dx2', 0.1)
        compare.setdefault('m', 4)
        compare.setdefault('t', 200)
        compare.setdefault('log_base', 'e')
        compare.setdefault('spectrum', 'random')
        compare.setdefault('sampling', 'stratified')
        return compare

    def to_experiment_config(self, experiment, seed=None, workers=None, out=None, shots=None, save_params=False):
        """Command line values override the file."""
        seed = self.yaml.get('seed', 0) if seed is None else seed
        try:
            config = ExperimentConfig(
                experiment=experiment,
                out_path=self.get_paths(out)['out_dir'],
                seed=int(seed),
                workers=int(self.yaml.get('workers', 1) if workers is None else workers),
                shots_mode=bool(shots or self.yaml.get('shots_mode', False)),
                save_params=bool(save_params),
                state=self.get_state(),
                encoding=self.get_encoding(),
                bounds=self.get_bounds(),
                ansatz=self.get_ansatz(),
                optimizer=self.get_optimizer(int(seed)),
                vqse=self.get_vqse(),
                sweep=self.get_sweep(),
                variance_scan=self.get_variance_scan(),
                bound_compare=self.get_bound_compare()).validate()
        except (TypeError, ValueError) as err:
            if isinstance(err, ConfigError):
                raise
            raise ConfigError(str(err))
        return config

    def defaults(self):
        """The fully defaulted document, as YAML text."""
        document = {'out': 'qfibound_out', 'seed': 0, 'workers': 1, 'shots_mode': False,
                    'state': self.get_state(), 'encoding': self.get_encoding(), 'bounds': self.get_bounds(),
                    'ansatz': self.get_ansatz(), 'optimizer': self.get_optimizer().to_dict(),
                    'vqse': self.get_vqse(), 'sweep': self.get_sweep(),
                    'variance_scan': self.get_variance_scan(), 'bound_compare': self.get_bound_compare()}
        return yaml.safe_dump(document, sort_keys=False, default_flow_style=None)
