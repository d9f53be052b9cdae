"""Transformer fine-tuning harness for language-augmented text exports."""

__version__ = "0.1.0"

from .config import KNOWN_MODELS, ConfigError, RunConfig, load_run_config, validate
from .run import CheckpointUnavailable, DataError, finetune_and_eval, load_examples

__all__ = [
    "__version__",
    "KNOWN_MODELS",
    "ConfigError",
    "RunConfig",
    "load_run_config",
    "validate",
    "CheckpointUnavailable",
    "DataError",
    "finetune_and_eval",
    "load_examples",
]
