"""
Configuration management for afkit.
Handles enumeration caps, parallelism and output defaults, layered as
defaults < config.json < environment < command-line flags.
"""

import json
import logging
import os
import sys
from dataclasses import dataclass

logger = logging.getLogger(__name__)

# Default configuration values
DEFAULT_CONFIG = {
    'cycle_cap': 100000,  # max alternating cycles enumerated per matching
    'pm_cap': 1000000,  # max perfect matchings enumerated per graph
    'jobs': 1,  # worker processes for per-matching loops, 0 = one per physical core
    'format': 'text',  # 'text' or 'json'
    'log_level': 'WARNING',
}

CONFIG_FILE = 'config.json'

# Environment overrides: variable name -> config key
ENV_OVERRIDES = {
    'AFKIT_CYCLE_CAP': 'cycle_cap',
    'AFKIT_PM_CAP': 'pm_cap',
    'AFKIT_JOBS': 'jobs',
}

OUTPUT_FORMATS = ('text', 'json')


@dataclass(frozen=True)
class Caps:
    """Guard rails for the exponential routines."""
    cycle_cap: int = DEFAULT_CONFIG['cycle_cap']
    pm_cap: int = DEFAULT_CONFIG['pm_cap']

    def __post_init__(self):
        if self.cycle_cap < 1 or self.pm_cap < 1:
            raise ValueError("caps must be positive")

    @classmethod
    def from_config(cls, config):
        return cls(cycle_cap=config.cycle_cap, pm_cap=config.pm_cap)

    def to_dict(self):
        return {'cycle_cap': self.cycle_cap, 'pm_cap': self.pm_cap}


class Config:
    """Configuration manager with file persistence and environment overrides."""

    def __init__(self, config_dir=None, environ=None):
        """Initialize config manager.

        Args:
            config_dir: Directory holding config.json. Defaults to app directory.
            environ: Mapping consulted for AFKIT_* overrides. Defaults to os.environ.
        """
        if config_dir is None:
            if getattr(sys, 'frozen', False):
                config_dir = os.path.dirname(sys.executable)
            else:
                config_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

        self.config_dir = config_dir
        self.config_path = os.path.join(config_dir, CONFIG_FILE)
        self._config = dict(DEFAULT_CONFIG)
        self.load()
        self.apply_environment(os.environ if environ is None else environ)

    def load(self):
        """Load configuration from file."""
        try:
            if os.path.exists(self.config_path):
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    saved_config = json.load(f)
                if not isinstance(saved_config, dict):
                    raise ValueError("top level must be an object")
                for key, value in saved_config.items():
                    if key in DEFAULT_CONFIG:
                        self._set_checked(key, value, source=self.config_path)
                    else:
                        logger.warning("Ignoring unknown config key %r in %s", key, self.config_path)
        except (OSError, ValueError) as e:
            logger.warning("Could not load config: %s", e)

    def save(self):
        """Save configuration to file."""
        try:
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self._config, f, indent=2)
        except OSError as e:
            logger.warning("Could not save config: %s", e)

    def apply_environment(self, environ):
        """Apply AFKIT_* environment overrides; bad values are ignored with a warning."""
        for var, key in ENV_OVERRIDES.items():
            raw = environ.get(var)
            if raw is None or raw == '':
                continue
            self._set_checked(key, raw, source=var)

    def _set_checked(self, key, value, source):
        try:
            self._config[key] = self._coerce(key, value)
        except (TypeError, ValueError) as e:
            logger.warning("Ignoring %s=%r from %s: %s", key, value, source, e)

    @staticmethod
    def _coerce(key, value):
        if key in ('cycle_cap', 'pm_cap'):
            value = int(value)
            if value < 1:
                raise ValueError("must be at least 1")
            return value
        if key == 'jobs':
            value = int(value)
            if value < 0:
                raise ValueError("must be non-negative")
            return value
        if key == 'format':
            if value not in OUTPUT_FORMATS:
                raise ValueError(f"must be one of {', '.join(OUTPUT_FORMATS)}")
            return value
        if key == 'log_level':
            value = str(value).upper()
            if not isinstance(logging.getLevelName(value), int):
                raise ValueError("unknown log level")
            return value
        return value

    def get(self, key, default=None):
        """Get a configuration value."""
        return self._config.get(key, default)

    def set(self, key, value):
        """Set a configuration value (validated) and save."""
        self._config[key] = self._coerce(key, value)
        self.save()

    # Property accessors for common settings
    @property
    def cycle_cap(self):
        return self._config.get('cycle_cap', DEFAULT_CONFIG['cycle_cap'])

    @cycle_cap.setter
    def cycle_cap(self, value):
        self._config['cycle_cap'] = self._coerce('cycle_cap', value)

    @property
    def pm_cap(self):
        return self._config.get('pm_cap', DEFAULT_CONFIG['pm_cap'])

    @pm_cap.setter
    def pm_cap(self, value):
        self._config['pm_cap'] = self._coerce('pm_cap', value)

    @property
    def jobs(self):
        return self._config.get('jobs', 1)

    @jobs.setter
    def jobs(self, value):
        self._config['jobs'] = self._coerce('jobs', value)

    @property
    def format(self):
        return self._config.get('format', 'text')

    @format.setter
    def format(self, value):
        self._config['format'] = self._coerce('format', value)

    @property
    def log_level(self):
        return self._config.get('log_level', 'WARNING')

    @log_level.setter
    def log_level(self, value):
        self._config['log_level'] = self._coerce('log_level', value)

    @property
    def caps(self):
        return Caps.from_config(self)
