"""
Unit tests for configuration validation.

Covers rank parsing, ExperimentConfigForm field checks, presets and
the preset < config file < flags layering used by the commands.
"""

import pytest
from django.core.exceptions import ValidationError

from exclqa.bench import ExperimentConfig
from exclqa.exceptions import ConfigurationError
from exclqa.forms import ExperimentConfigForm, build_config, parse_ranks
from exclqa.management.commands._options import merge_layers
from exclqa.presets import available_presets, load_preset


@pytest.mark.unit
class TestParseRanks:
    """Test cases for parse_ranks."""

    @pytest.mark.parametrize('value,expected', [
        (12, (12,)),
        ([10, 8, 10], (8, 10)),
        ('8-11', (8, 9, 10, 11)),
        ('8,10, 12', (8, 10, 12)),
        ('8-9,20', (8, 9, 20)),
    ])
    def test_accepted_forms(self, value, expected):
        """Test integers, lists, ranges and comma lists."""
        assert parse_ranks(value) == expected

    def test_reversed_range(self):
        """Test that an empty range is rejected."""
        with pytest.raises(ValueError):
            parse_ranks('12-8')


@pytest.mark.unit
class TestExperimentConfigForm:
    """Test cases for ExperimentConfigForm and build_config."""

    def test_empty_data_gives_defaults(self):
        """Test that omitted keys fall back to ExperimentConfig defaults."""
        assert build_config({}) == ExperimentConfig()

    def test_flag_strings(self):
        """Test that flag-style strings are converted."""
        cfg = build_config({'ranks': '8-10', 'N': '50', 'alpha': '0.1', 'method': 'metropolis'})
        assert cfg.ranks == (8, 9, 10)
        assert cfg.N == 50
        assert cfg.alpha == 0.1
        assert cfg.method == 'metropolis'

    def test_profile(self):
        """Test that the paper profile selects the large lattice."""
        cfg = build_config({'profile': 'paper', 'ranks': '10-39'})
        assert (cfg.q, cfg.d, cfg.k_qary) == (65537, 180, 90)

    @pytest.mark.parametrize('value,expected', [
        ('16385', 16385.0),
        ('norm', 'norm'),
        ('norm/50', 'norm/50'),
    ])
    def test_rescale_values(self, value, expected):
        """Test the accepted forms of M."""
        assert build_config({'M': value}).M == expected

    @pytest.mark.parametrize('data,field', [
        ({'mu': 1.0}, 'mu'),
        ({'mu': -0.1}, 'mu'),
        ({'gamma': -1}, 'gamma'),
        ({'eta': 0}, 'eta'),
        ({'temperature': 0}, 'temperature'),
        ({'M': 'nope'}, 'M'),
        ({'M': '0'}, 'M'),
        ({'method': 'qaoa'}, 'method'),
        ({'cost_kind': 'quadratic'}, 'cost_kind'),
        ({'ranks': '12-8'}, 'ranks'),
        ({'max_shots': 0}, 'max_shots'),
    ])
    def test_field_errors(self, data, field):
        """Test that invalid values are reported against their field."""
        form = ExperimentConfigForm(data=data)
        assert not form.is_valid()
        assert field in form.errors

    def test_cross_field_error(self):
        """Test that k_qary >= d is a configuration error."""
        with pytest.raises(ValidationError) as excinfo:
            build_config({'d': 20, 'k_qary': 20, 'ranks': '8-10'})
        assert any('k_qary' in message for message in excinfo.value.messages)

    def test_messages_name_the_field(self):
        """Test that build_config prefixes messages with the field name."""
        with pytest.raises(ValidationError) as excinfo:
            build_config({'mu': 1.5})
        assert excinfo.value.messages[0].startswith('mu: ')


@pytest.mark.unit
class TestPresets:
    """Test cases for the bundled presets."""

    def test_available(self):
        """Test the shipped preset names."""
        assert available_presets() == ['desk-lqa2', 'paper-alt2', 'paper-alt4', 'paper-lqa2', 'paper-lqa4']

    @pytest.mark.parametrize('name', ['desk-lqa2', 'paper-alt2', 'paper-alt4', 'paper-lqa2', 'paper-lqa4'])
    def test_every_preset_validates(self, name):
        """Test that each preset builds a configuration."""
        cfg = build_config({**load_preset(name), 'seed': 1})
        assert cfg.seed == 1

    def test_alt_presets_use_exp_penalty(self):
        """Test that the alternative-cost presets select the exponential penalty."""
        assert build_config(load_preset('paper-alt2')).effective_cost_kind == 'exp'

    def test_unknown_preset(self):
        """Test that an unknown preset name is reported."""
        with pytest.raises(ConfigurationError, match='available'):
            load_preset('huge')


@pytest.mark.unit
class TestMergeLayers:
    """Test cases for configuration layering."""

    def test_later_layers_win(self):
        """Test that flags beat the config file, which beats the preset."""
        merged = merge_layers({'N': 100, 'alpha': 0.055}, {'N': 50}, {'N': 20, 'alpha': None})
        assert merged == {'N': 20, 'alpha': 0.055}

    def test_profile_resets_lattice_keys(self):
        """Test that a later profile drops earlier q, d and k_qary."""
        merged = merge_layers({'q': 17, 'd': 20, 'k_qary': 10, 'N': 5}, {'profile': 'paper'})
        assert merged == {'N': 5, 'profile': 'paper'}

    def test_explicit_keys_after_profile(self):
        """Test that lattice keys given with or after a profile survive."""
        merged = merge_layers({'profile': 'desk'}, {'q': 17})
        assert merged == {'profile': 'desk', 'q': 17}
