from django import forms
from django.core.exceptions import ValidationError

from .bench import COST_KINDS, LATTICE_PROFILES, METHODS, ExperimentConfig
from .exceptions import ConfigurationError, HamiltonianValidationError
from .svp_encode import resolve_rescale


def parse_ranks(value):
    """Accept [8, 9], '8,9,12' or '8-20' (inclusive) and return a sorted tuple."""
    if isinstance(value, int):
        return (value,)
    if isinstance(value, (list, tuple)):
        return tuple(sorted({int(v) for v in value}))
    ranks = set()
    for part in str(value).split(','):
        part = part.strip()
        if not part:
            continue
        if '-' in part:
            low, high = (int(p) for p in part.split('-', 1))
            if low > high:
                raise ValueError(f'empty rank range {part}')
            ranks.update(range(low, high + 1))
        else:
            ranks.add(int(part))
    return tuple(sorted(ranks))


class RankListField(forms.Field):
    """Rank list from a JSON list or a '8-20' / '8,10,12' flag value."""

    def to_python(self, value):
        if value in self.empty_values:
            return None
        try:
            return parse_ranks(value)
        except (TypeError, ValueError):
            raise ValidationError('Ranks must be integers, a comma list or a range like 8-20.')


class ExperimentConfigForm(forms.Form):
    """
    Validate a merged experiment configuration (preset < config file < flags).
    Omitted values fall back to the ExperimentConfig defaults.
    """
    method = forms.ChoiceField(choices=[(m, m) for m in METHODS], required=False)
    profile = forms.ChoiceField(choices=[(p, p) for p in LATTICE_PROFILES], required=False)
    q = forms.IntegerField(min_value=2, required=False)
    d = forms.IntegerField(min_value=2, required=False)
    k_qary = forms.IntegerField(min_value=1, required=False)
    seed = forms.IntegerField(min_value=0, required=False)
    ranks = RankListField(required=False)
    k = forms.IntegerField(min_value=1, max_value=16, required=False)
    N = forms.IntegerField(min_value=1, required=False)
    gamma = forms.FloatField(required=False)
    beta = forms.FloatField(required=False)
    mu = forms.FloatField(required=False)
    eta = forms.FloatField(required=False)
    f = forms.FloatField(required=False)
    M = forms.CharField(required=False)
    alpha = forms.FloatField(required=False)
    r_factor = forms.FloatField(required=False)
    s = forms.FloatField(required=False)
    cost_kind = forms.ChoiceField(choices=[(c, c) for c in COST_KINDS], required=False)
    max_shots = forms.IntegerField(min_value=1, required=False)
    instances_per_rank = forms.IntegerField(min_value=1, required=False)
    iterations = forms.IntegerField(min_value=1, required=False)
    temperature = forms.FloatField(required=False)
    tuning_shots = forms.IntegerField(min_value=1, required=False)
    tune = forms.BooleanField(required=False)
    enum_timeout = forms.FloatField(required=False)
    label = forms.CharField(max_length=32, required=False)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.config = None

    def _require_positive(self, name):
        value = self.cleaned_data.get(name)
        if value is not None and not value > 0:
            raise ValidationError(f'{name} must be greater than 0.')
        return value

    def clean_gamma(self):
        return self._require_positive('gamma')

    def clean_beta(self):
        return self._require_positive('beta')

    def clean_eta(self):
        """Learning rate."""
        return self._require_positive('eta')

    def clean_f(self):
        """Half-width of the initial weight interval."""
        return self._require_positive('f')

    def clean_alpha(self):
        return self._require_positive('alpha')

    def clean_r_factor(self):
        return self._require_positive('r_factor')

    def clean_s(self):
        return self._require_positive('s')

    def clean_temperature(self):
        return self._require_positive('temperature')

    def clean_enum_timeout(self):
        return self._require_positive('enum_timeout')

    def clean_mu(self):
        """Momentum must lie in [0, 1)."""
        mu = self.cleaned_data.get('mu')
        if mu is not None and not 0 <= mu < 1:
            raise ValidationError('mu (momentum) must lie in [0, 1).')
        return mu

    def clean_M(self):
        """A positive number, 'norm' or 'norm/<divisor>'."""
        value = (self.cleaned_data.get('M') or '').strip()
        if not value:
            return None
        try:
            number = float(value)
        except ValueError:
            try:
                # Any Gram matrix with positive norm checks the syntax.
                resolve_rescale(value, [[1.0]])
            except HamiltonianValidationError:
                raise ValidationError("M must be a positive number, 'norm' or 'norm/<divisor>'.")
            return value
        if not number > 0:
            raise ValidationError('M must be greater than 0.')
        return number

    def clean_ranks(self):
        ranks = self.cleaned_data.get('ranks')
        if ranks is not None and (not ranks or ranks[0] < 1):
            raise ValidationError('Ranks must be positive integers.')
        return ranks

    def clean(self):
        """Build the ExperimentConfig; cross-field checks live there."""
        cleaned = super().clean()
        if self.errors:
            return cleaned
        values = {
            key: value
            for key, value in cleaned.items()
            if value is not None and value != ''
        }
        try:
            self.config = ExperimentConfig.from_dict(values)
        except ConfigurationError as exc:
            raise ValidationError(str(exc))
        return cleaned


def build_config(data):
    """Validate data and return an ExperimentConfig, or raise ValidationError."""
    form = ExperimentConfigForm(data=data)
    if not form.is_valid():
        messages = [
            f'{field}: {message}' if field != '__all__' else message
            for field, errors in form.errors.items()
            for message in errors
        ]
        raise ValidationError(messages)
    return form.config
