"""
Named experiment presets shipped as JSON files in this directory.
"""
import json
from pathlib import Path

from ..exceptions import ConfigurationError

PRESET_DIR = Path(__file__).resolve().parent


def available_presets():
    return sorted(path.stem for path in PRESET_DIR.glob('*.json'))


def load_preset(name):
    path = PRESET_DIR / f'{name}.json'
    if not path.exists():
        raise ConfigurationError(f'unknown preset {name!r}; available: {", ".join(available_presets())}')
    with path.open(encoding='utf-8') as handle:
        return json.load(handle)
