"""Run configuration: one fine-tuning run, one JSON file."""

import json
import os
from dataclasses import dataclass
from typing import Optional

# Checkpoint families this harness targets; local checkpoint directories are
# accepted too (needed for offline smoke runs and locally cached models).
KNOWN_MODELS = (
    "albert-base-v2",
    "bert-base-cased",
    "roberta-base",
    "bert-base-multilingual-cased",
    "l3cube-pune/hing-bert",
    "l3cube-pune/hing-roberta",
    "l3cube-pune/hing-roberta-mixed",
)

VALID_BATCH_SIZES = (32, 64)
LEARNING_RATE_RANGE = (1e-6, 1e-4)
EPOCH_RANGE = (1, 7)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str
    train_path: str
    val_path: str
    test_path: str
    batch_size: int
    learning_rate: float
    epochs: int
    seed: int = 0
    max_seq_length: Optional[int] = None  # default: checkpoint maximum (capped at 512)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "train_path": self.train_path,
            "val_path": self.val_path,
            "test_path": self.test_path,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "seed": self.seed,
            "max_seq_length": self.max_seq_length,
        }


def validate(config: RunConfig) -> RunConfig:
    if config.model not in KNOWN_MODELS and not os.path.isdir(config.model):
        raise ConfigError(
            f"model {config.model!r} is neither a known checkpoint family "
            f"{list(KNOWN_MODELS)} nor a local checkpoint directory"
        )
    if config.batch_size not in VALID_BATCH_SIZES:
        raise ConfigError(f"batch_size must be one of {VALID_BATCH_SIZES}, got {config.batch_size}")
    lo, hi = LEARNING_RATE_RANGE
    if not lo <= config.learning_rate <= hi:
        raise ConfigError(f"learning_rate must be within [{lo}, {hi}], got {config.learning_rate}")
    lo, hi = EPOCH_RANGE
    if not (isinstance(config.epochs, int) and lo <= config.epochs <= hi):
        raise ConfigError(f"epochs must be an integer in [{lo}, {hi}], got {config.epochs}")
    if config.max_seq_length is not None and config.max_seq_length < 8:
        raise ConfigError(f"max_seq_length must be >= 8, got {config.max_seq_length}")
    for path in (config.train_path, config.val_path, config.test_path):
        if not path:
            raise ConfigError("train_path, val_path and test_path are all required")
    return config


def load_run_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    known = {
        "model", "train_path", "val_path", "test_path",
        "batch_size", "learning_rate", "epochs", "seed", "max_seq_length",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = {"model", "train_path", "val_path", "test_path",
               "batch_size", "learning_rate", "epochs"} - set(doc)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    try:
        config = RunConfig(
            model=str(doc["model"]),
            train_path=str(doc["train_path"]),
            val_path=str(doc["val_path"]),
            test_path=str(doc["test_path"]),
            batch_size=int(doc["batch_size"]),
            learning_rate=float(doc["learning_rate"]),
            epochs=int(doc["epochs"]),
            seed=int(doc.get("seed", 0)),
            max_seq_length=None if doc.get("max_seq_length") is None
            else int(doc["max_seq_length"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    return validate(config)
