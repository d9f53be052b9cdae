"""Hashed n-gram features plus a multinomial logistic-regression classifier.

This is the desk-scale stand-in for transformer fine-tuning: texts are
featurized into word unigrams, word bigrams, and within-token character
3-5-grams, hashed into a fixed power-of-two index space, and classified by
a linear model trained with seeded shuffled SGD. Language tags riding along
as ordinary tokens reach the model exactly like any other token, through
the unigram and bigram buckets.

The feature hash is BLAKE2b with an 8-byte digest read little-endian,
masked to the table size, so feature indices are identical across runs and
platforms.
"""

import hashlib
import json
import math
import random
import warnings
import zlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._version import __version__
from .augment import AugmentationMode
from .corpus import Dataset, SplitSpec, augment_dataset, split, tag_dataset
from .errors import CorruptModel, FormatVersionMismatch, NonFiniteLoss, SingleClass
from .lid import LidModel
from .metrics import EvalReport, evaluate
from .preprocess import normalize

__all__ = [
    "BaselineHyper",
    "BaselineModel",
    "ExperimentResult",
    "featurize",
    "logistic_loss_and_grad",
    "train_baseline",
    "predict",
    "save_baseline",
    "load_baseline",
    "run_experiment",
]

DEFAULT_DIM = 1 << 18

BASELINE_MAGIC = b"CMBASv01"
BASELINE_FORMAT_VERSION = 1

_CHAR_ORDERS = (3, 4, 5)
_PAD_START = "\x02"
_PAD_END = "\x03"
_SEP = "\x1f"


def _feature_hash(feature: str) -> int:
    """Fixed 64-bit hash: BLAKE2b digest_size=8, little-endian."""
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _feature_strings(tokens):
    for tok in tokens:
        yield "w" + _SEP + tok
    for left, right in zip(tokens, tokens[1:]):
        yield "b" + _SEP + left + _SEP + right
    for tok in tokens:
        padded = _PAD_START + tok + _PAD_END
        for n in _CHAR_ORDERS:
            for i in range(len(padded) - n + 1):
                yield "c" + _SEP + padded[i : i + n]


def featurize(text: str, dim: int = DEFAULT_DIM) -> dict[int, int]:
    """Hash a text's n-gram counts into a sparse bucket->count map."""
    if dim <= 0 or dim & (dim - 1):
        raise ValueError(f"hashing dimension must be a power of two, got {dim}")
    mask = dim - 1
    vec: dict[int, int] = {}
    for feature in _feature_strings(text.split()):
        idx = _feature_hash(feature) & mask
        vec[idx] = vec.get(idx, 0) + 1
    return vec


@lru_cache(maxsize=1 << 16)
def _hashed_features(text: str, dim: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Cached, sorted (indices, counts) form of featurize()."""
    vec = featurize(text, dim)
    if not vec:
        return (), ()
    idx = tuple(sorted(vec))
    return idx, tuple(vec[i] for i in idx)


@dataclass(frozen=True)
class BaselineHyper:
    dim: int = DEFAULT_DIM
    learning_rate: float = 0.2
    epochs: int = 10
    l2: float = 1e-6
    seed: int = 0

    def to_dict(self):
        return {
            "dim": self.dim,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2": self.l2,
            "seed": self.seed,
        }


class BaselineModel:
    """Trained linear classifier: one weight row and bias per label."""

    def __init__(self, weights, bias, label_set, hyper):
        self.weights = weights  # (k, dim) float64
        self.bias = bias  # (k,) float64
        self.label_set = tuple(label_set)
        self.hyper = hyper


def _softmax(scores):
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def logistic_loss_and_grad(weights, bias, x, y, l2=0.0):
    """Loss and gradients of the regularized multinomial logistic loss.

    Dense single-example form, used as the reference for gradient checking:
    loss = -log softmax(W x + b)[y] + (l2/2) ||W||^2.
    """
    probs = _softmax(weights @ x + bias)
    loss = -math.log(probs[y]) + 0.5 * l2 * float((weights * weights).sum())
    err = probs.copy()
    err[y] -= 1.0
    grad_w = np.outer(err, x) + l2 * weights
    grad_b = err
    return loss, grad_w, grad_b


def train_baseline(train: Dataset, hyper: BaselineHyper | None = None) -> BaselineModel:
    """Train by seeded shuffled SGD with per-feature L2 decay.

    The average cross-entropy is measured each epoch; if it ever increases,
    training stops early with a warning rather than thrash.
    """
    hyper = hyper or BaselineHyper()
    if hyper.epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {hyper.epochs}")
    present = {ex.label for ex in train.examples}
    if len(present) < 2:
        raise SingleClass(f"training data has classes {sorted(present)}; need at least 2")

    label_index = {label: i for i, label in enumerate(train.label_set)}
    feats = [_hashed_features(ex.text, hyper.dim) for ex in train.examples]
    ys = [label_index[ex.label] for ex in train.examples]

    k = len(train.label_set)
    weights = np.zeros((k, hyper.dim))
    bias = np.zeros(k)
    rng = random.Random(hyper.seed)
    order = list(range(len(train.examples)))
    lr = hyper.learning_rate
    decay = 1.0 - lr * hyper.l2

    prev_loss = math.inf
    for epoch in range(hyper.epochs):
        rng.shuffle(order)
        total = 0.0
        for i in order:
            idx, cnt = feats[i]
            y = ys[i]
            if idx:
                cols = np.array(idx, dtype=np.intp)
                counts = np.array(cnt, dtype=np.float64)
                scores = bias + weights[:, cols] @ counts
            else:
                cols = counts = None
                scores = bias.copy()
            probs = _softmax(scores)
            total += -math.log(max(probs[y], 1e-300))
            err = probs
            err[y] -= 1.0
            if cols is not None:
                weights[:, cols] = weights[:, cols] * decay - lr * np.outer(err, counts)
            bias -= lr * err
        epoch_loss = total / len(order)
        if not math.isfinite(epoch_loss):
            raise NonFiniteLoss(f"epoch {epoch}: average loss is {epoch_loss}")
        if epoch_loss > prev_loss + 1e-12:
            warnings.warn(
                f"training loss rose from {prev_loss:.6g} to {epoch_loss:.6g} "
                f"at epoch {epoch}; stopping early",
                stacklevel=2,
            )
            break
        prev_loss = epoch_loss
    return BaselineModel(weights, bias, train.label_set, hyper)


def _scores(model: BaselineModel, text: str):
    idx, cnt = _hashed_features(text, model.hyper.dim)
    if not idx:
        return model.bias.copy()
    cols = np.array(idx, dtype=np.intp)
    counts = np.array(cnt, dtype=np.float64)
    return model.bias + model.weights[:, cols] @ counts


def predict(model: BaselineModel, text: str) -> str:
    """Argmax class; ties resolve to the earliest label in the label set."""
    return model.label_set[int(np.argmax(_scores(model, text)))]


# --- serialization (same container discipline as the LID model file) ---

def save_baseline(model: BaselineModel, path) -> None:
    header = json.dumps(
        {
            "version": BASELINE_FORMAT_VERSION,
            "label_set": list(model.label_set),
            "hyper": model.hyper.to_dict(),
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    payload = (
        len(header).to_bytes(4, "little")
        + header
        + model.weights.astype("<f8").tobytes(order="C")
        + model.bias.astype("<f8").tobytes(order="C")
    )
    with open(path, "wb") as f:
        f.write(BASELINE_MAGIC)
        f.write(len(payload).to_bytes(8, "little"))
        f.write(payload)
        f.write(zlib.crc32(payload).to_bytes(4, "little"))


def load_baseline(path) -> BaselineModel:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < 16 or blob[:8] != BASELINE_MAGIC:
        raise CorruptModel(f"{path}: not a baseline model file")
    length = int.from_bytes(blob[8:16], "little")
    body = blob[16:]
    if len(body) != length + 4:
        raise CorruptModel(f"{path}: truncated or oversized model file")
    payload, checksum = body[:length], body[length:]
    if zlib.crc32(payload) != int.from_bytes(checksum, "little"):
        raise CorruptModel(f"{path}: checksum mismatch")
    header_len = int.from_bytes(payload[:4], "little")
    try:
        header = json.loads(payload[4 : 4 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"{path}: undecodable header: {exc}") from exc
    if header.get("version") != BASELINE_FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"{path}: format version {header.get('version')!r}, "
            f"expected {BASELINE_FORMAT_VERSION}"
        )
    hyper = BaselineHyper(**header["hyper"])
    label_set = tuple(header["label_set"])
    k = len(label_set)
    body = payload[4 + header_len :]
    expect = (k * hyper.dim + k) * 8
    if len(body) != expect:
        raise CorruptModel(f"{path}: weight block is {len(body)} bytes, expected {expect}")
    weights = np.frombuffer(body[: k * hyper.dim * 8], dtype="<f8").reshape(k, hyper.dim)
    bias = np.frombuffer(body[k * hyper.dim * 8 :], dtype="<f8")
    return BaselineModel(weights, bias, label_set, hyper)


# --- end-to-end experiment ---

@dataclass(frozen=True)
class ExperimentResult:
    report: EvalReport
    config: dict


def run_experiment(
    dataset: Dataset,
    mode: AugmentationMode,
    lid_model: LidModel | None = None,
    hyper: BaselineHyper | None = None,
    split_spec: SplitSpec | None = None,
) -> ExperimentResult:
    """Run normalize -> tag -> augment -> split -> train -> evaluate.

    Datasets whose examples already carry tags (imported or oracle tags) are
    used as-is and must hold normalized text; otherwise texts are normalized
    here and tagged with the given LID model.
    """
    hyper = hyper or BaselineHyper()
    split_spec = split_spec or SplitSpec()

    if all(ex.tags is not None for ex in dataset.examples):
        tagged = dataset
    else:
        if lid_model is None:
            raise ValueError("dataset is untagged and no LID model was given")
        from dataclasses import replace

        normalized = replace(
            dataset,
            examples=tuple(replace(ex, text=normalize(ex.text)) for ex in dataset.examples),
        )
        tagged = tag_dataset(normalized, lid_model)

    augmented = augment_dataset(tagged, mode)
    train, val, test = split(augmented, split_spec)
    model = train_baseline(train, hyper)
    predictions = [predict(model, ex.text) for ex in test.examples]
    report = evaluate([ex.label for ex in test.examples], predictions, dataset.label_set)
    config = {
        "dataset": {"name": dataset.name, "n": len(dataset.examples),
                    "labels": list(dataset.label_set)},
        "mode": mode.value,
        "lid": "attached-tags" if lid_model is None else "model",
        "split": {
            "train_frac": split_spec.train_frac,
            "seed": split_spec.seed,
            "stratified": split_spec.stratified,
        },
        "sizes": {"train": len(train), "val": len(val), "test": len(test)},
        "hyper": hyper.to_dict(),
        "version": __version__,
    }
    return ExperimentResult(report=report, config=config)
