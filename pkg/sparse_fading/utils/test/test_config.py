import os
import tempfile
from unittest import TestCase

from sparse_fading.errors import ConfigError
from sparse_fading.utils.config import (DEFAULT_CONFIG, load_config,
                                        parse_value, write_key_values)
from sparse_fading.utils.parser import config_overrides, parse_args
from sparse_fading.utils.seeding import derive_seed


class TestConfig(TestCase):
    def test_parse_value(self):
        assert parse_value(' 3 ') == 3
        assert parse_value('1e-3') == 1e-3
        assert parse_value('None') is None
        assert parse_value('TRUE') is True
        assert parse_value('[1, 2]') == (1, 2)
        assert parse_value('fading') == 'fading'

    def test_precedence(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'run.cfg')
            with open(path, 'w', encoding='utf-8') as fh:
                fh.write('# network\nN = 50\n\nM = 30  # transmissions\n'
                         'nu = 1.0, 2.0\n')
            config = load_config(path, {'M': 40, 'seed': None})

            assert config['N'] == 50
            assert config['M'] == 40
            assert config['nu'] == (1.0, 2.0)
            assert config['seed'] == DEFAULT_CONFIG['seed']

    def test_defaults_not_shared(self):
        config = load_config()
        config['N'] = -1
        assert DEFAULT_CONFIG['N'] == 100

    def test_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bad.cfg')
            with open(path, 'w', encoding='utf-8') as fh:
                fh.write('N 50\n')
            with self.assertRaises(ConfigError):
                load_config(path)

            write_key_values({'N': 5, 'unknown': 1}, path)
            with self.assertRaises(ConfigError):
                load_config(path)

    def test_cli_overrides(self):
        args = parse_args(['sweep', '--seed', '9', '--num_workers', '2'])
        overrides = config_overrides(args)

        assert overrides == {'seed': 9, 'num_workers': 2}
        assert args.command == 'sweep'


class TestSeeding(TestCase):
    def test_derive_seed(self):
        seed = derive_seed(1337, 'signal', 10, 0.5, 3)

        assert seed == derive_seed(1337, 'signal', 10, 0.5, 3)
        assert seed != derive_seed(1337, 'signal', 10, 0.5, 4)
        assert seed != derive_seed(1338, 'signal', 10, 0.5, 3)
        assert 0 <= seed < 2 ** 63
