import copy
import json

import pytest
from taxstop import ConfigError
from taxstop.cli import load_run_config
from taxstop.cli import parse_run_config
from taxstop.cli.config import override

MINIMAL = {
    'market': {'mu': 0.026, 'sigma': 0.25, 'r': 0.03},
    'tax': {'alpha': 0.3, 'p0': 100},
    'horizon_t': 3,
    'x0': 180,
}


def _with(path, value):
    doc = copy.deepcopy(MINIMAL)
    node = doc
    *parents, key = path.split('.')
    for name in parents:
        node = node.setdefault(name, {})
    node[key] = value
    return doc


class TestParse:
    def test_defaults(self):
        config = parse_run_config(MINIMAL)
        assert config.methods == ('lattice',)
        assert config.grid.n_x == 801
        assert config.mc.antithetic
        assert config.sigmas == ()

    def test_reference_file(self, configs):
        config = load_run_config(configs / 'reference.json')
        assert config.spec.x0 == 180
        assert config.lattice.n_steps == 1000
        assert config.mc.seed == 7
        assert config.methods == ('lattice', 'mc')
        assert config.sigmas == (0.1, 0.25, 0.4)

    def test_echo_round_trip(self, configs):
        config = load_run_config(configs / 'reference.json')
        echo = json.loads(json.dumps(config.to_dict()))
        assert parse_run_config(echo) == config
        assert echo['grid']['eps_stop'] == 1e-7


class TestErrors:
    @pytest.mark.parametrize(
        'path, value, field',
        [
            ('tax.alpha', 1.0, 'tax.alpha'),
            ('tax.alpha', -0.1, 'tax.alpha'),
            ('tax.p0', 0, 'tax.p0'),
            ('market.sigma', -0.2, 'market.sigma'),
            ('market.r', 'high', 'market.r'),
            ('horizon_t', 0, 'horizon_t'),
            ('grid.n_x', 2, 'grid.n_x'),
            ('grid.n_x', 80.5, 'grid.n_x'),
            ('grid.eps_stop', 0.0, 'grid.eps_stop'),
            ('lattice.n_steps', 0, 'lattice.n_steps'),
            ('mc.n_paths', 1001, 'mc.n_paths'),
            ('mc.seed', -3, 'mc.seed'),
            ('mc.antithetic', 1, 'mc.antithetic'),
            ('mc.estimator', 'median', 'mc.estimator'),
            ('methods', ['pde'], 'methods'),
            ('sweep.sigma', [0.1, -0.1], 'sweep.sigma'),
            ('market.kappa', 1.0, 'market.kappa'),
            ('extra', {}, 'extra'),
        ],
    )
    def test_field_paths(self, path, value, field):
        with pytest.raises(ConfigError) as exc_info:
            parse_run_config(_with(path, value))
        assert exc_info.value.field == field
        assert str(exc_info.value).startswith(f'[{field}] ')

    def test_missing_key(self):
        doc = copy.deepcopy(MINIMAL)
        del doc['market']['mu']
        with pytest.raises(ConfigError) as exc_info:
            parse_run_config(doc)
        assert exc_info.value.field == 'market.mu'

    def test_not_an_object(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_run_config(_with('market', [0.1]))
        assert exc_info.value.field == 'market'

    def test_unknown_key_file(self, configs):
        with pytest.raises(ConfigError) as exc_info:
            load_run_config(configs / 'unknown_key.json')
        assert exc_info.value.field == 'market.kappa'

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError) as exc_info:
            load_run_config(tmp_path / 'missing.json')
        assert exc_info.value.field == '<file>'
        bad = tmp_path / 'bad.json'
        bad.write_text('{"market": ')
        with pytest.raises(ConfigError):
            load_run_config(bad)


class TestOverride:
    def test_monte_carlo(self, configs):
        config = load_run_config(configs / 'reference.json')
        changed = override(config, n_paths=500, seed=None)
        assert changed.mc.n_paths == 500
        assert changed.mc.seed == 7
        assert config.mc.n_paths == 20000

    def test_invalid(self, configs):
        config = load_run_config(configs / 'reference.json')
        with pytest.raises(ConfigError) as exc_info:
            override(config, n_paths=3)
        assert exc_info.value.field == 'mc.n_paths'

    def test_sigmas(self, configs):
        config = load_run_config(configs / 'sell.json')
        assert override(config, sigmas=(0.2,)).sigmas == (0.2,)
