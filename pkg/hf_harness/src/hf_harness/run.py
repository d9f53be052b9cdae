"""Fine-tune a sequence classifier on exported augmented text and score it.

Input files follow the pipeline export contract: JSONL records of
``{"id", "text_aug", "mode", "label"}``. The emitted report object uses the
same JSON schema as the pipeline's evaluation reports (accuracy, per_class,
macro_precision/recall/f1, confusion, labels, n), so downstream tooling can
consume either source interchangeably.
"""

import json
import random

import numpy as np
import torch

from .config import RunConfig

__all__ = ["CheckpointUnavailable", "DataError", "finetune_and_eval", "load_examples"]


class CheckpointUnavailable(RuntimeError):
    pass


class DataError(ValueError):
    pass


def load_examples(path) -> list[dict]:
    examples = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            for field in ("id", "text_aug", "mode", "label"):
                if field not in rec:
                    raise DataError(f"{path}:{lineno}: missing field {field!r}")
            examples.append(rec)
    if not examples:
        raise DataError(f"{path}: no examples")
    return examples


def _compute_report(y_true, y_pred, labels):
    index = {label: i for i, label in enumerate(labels)}
    k = len(labels)
    confusion = [[0] * k for _ in range(k)]
    for t, p in zip(y_true, y_pred):
        confusion[index[t]][index[p]] += 1
    per_class = {}
    for i, label in enumerate(labels):
        tp = confusion[i][i]
        pred_pos = sum(confusion[r][i] for r in range(k))
        actual_pos = sum(confusion[i])
        precision = tp / pred_pos if pred_pos else 0.0
        recall = tp / actual_pos if actual_pos else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = {"precision": precision, "recall": recall, "f1": f1}
    n = len(y_true)
    return {
        "accuracy": sum(confusion[i][i] for i in range(k)) / n,
        "per_class": per_class,
        "macro_precision": sum(m["precision"] for m in per_class.values()) / k,
        "macro_recall": sum(m["recall"] for m in per_class.values()) / k,
        "macro_f1": sum(m["f1"] for m in per_class.values()) / k,
        "confusion": confusion,
        "labels": list(labels),
        "n": n,
    }


def _seed_everything(seed):
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)
    if torch.cuda.is_available():
        torch.cuda.manual_seed_all(seed)


def _encode(tokenizer, texts, max_length):
    return tokenizer(
        texts,
        truncation=True,
        padding="max_length",
        max_length=max_length,
        return_tensors="pt",
    )


def finetune_and_eval(config: RunConfig, log=print) -> dict:
    """Train on the augmented train split, evaluate on test, return the report doc."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    _seed_everything(config.seed)

    train = load_examples(config.train_path)
    val = load_examples(config.val_path)
    test = load_examples(config.test_path)
    labels = sorted({rec["label"] for rec in train})
    if len(labels) < 2:
        raise DataError(f"train split has labels {labels}; need at least 2")
    label2id = {label: i for i, label in enumerate(labels)}
    for name, part in (("val", val), ("test", test)):
        for rec in part:
            if rec["label"] not in label2id:
                raise DataError(f"{name} label {rec['label']!r} not present in train")

    try:
        tokenizer = AutoTokenizer.from_pretrained(config.model)
        model = AutoModelForSequenceClassification.from_pretrained(
            config.model, num_labels=len(labels)
        )
    except (OSError, ValueError) as exc:
        # transformers reports unavailable/incomplete checkpoints through both
        raise CheckpointUnavailable(f"cannot load checkpoint {config.model!r}: {exc}") from exc

    max_length = config.max_seq_length
    if max_length is None:
        max_length = min(int(tokenizer.model_max_length), 512)

    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    model.to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)

    def batches(part, shuffle_rng=None):
        order = list(range(len(part)))
        if shuffle_rng is not None:
            shuffle_rng.shuffle(order)
        for start in range(0, len(order), config.batch_size):
            chunk = [part[i] for i in order[start : start + config.batch_size]]
            enc = _encode(tokenizer, [rec["text_aug"] for rec in chunk], max_length)
            ys = torch.tensor([label2id[rec["label"]] for rec in chunk])
            yield enc.to(device), ys.to(device)

    loss_fn = torch.nn.CrossEntropyLoss()
    shuffle_rng = random.Random(config.seed)
    for epoch in range(config.epochs):
        model.train()
        total, seen = 0.0, 0
        for enc, ys in batches(train, shuffle_rng):
            optimizer.zero_grad()
            logits = model(**enc).logits
            loss = loss_fn(logits, ys)
            loss.backward()
            optimizer.step()
            total += float(loss.item()) * len(ys)
            seen += len(ys)
        model.eval()
        val_total, val_seen = 0.0, 0
        with torch.no_grad():
            for enc, ys in batches(val):
                val_total += float(loss_fn(model(**enc).logits, ys).item()) * len(ys)
                val_seen += len(ys)
        log(
            f"epoch {epoch + 1}/{config.epochs}: "
            f"train loss {total / seen:.4f}, val loss {val_total / val_seen:.4f}"
        )

    model.eval()
    predictions = []
    with torch.no_grad():
        for enc, _ in batches(test):
            preds = model(**enc).logits.argmax(dim=-1).tolist()
            predictions.extend(labels[i] for i in preds)
    y_true = [rec["label"] for rec in test]
    report = _compute_report(y_true, predictions, labels)
    return {
        "report": report,
        "config": config.to_dict(),
        "predictions": [
            {"id": rec["id"], "pred": pred} for rec, pred in zip(test, predictions)
        ],
    }
