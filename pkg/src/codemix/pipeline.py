"""One-shot pipeline: config file in, reproducible artifact directory out.

Given a config describing the dataset, the tag source, the augmentation
mode, the split, and the classifier hyperparameters, `run_pipeline` writes
every intermediate stage as JSONL plus stats, report, and a manifest tying
the artifacts to a hash of the resolved config. Reruns with the same config
produce byte-identical files; all randomness comes from the seeds in the
config.
"""

import hashlib
import json
import os
from dataclasses import dataclass
from typing import Optional

from ._version import __version__
from .augment import AugmentationMode, augment
from .baseline import (
    BASELINE_FORMAT_VERSION,
    BaselineHyper,
    predict,
    train_baseline,
)
from .corpus import (
    Schema,
    SplitSpec,
    augment_dataset,
    example_record,
    import_tags,
    lid_stats,
    load_dataset,
    split,
    tag_dataset,
    tagged_tokens,
    write_jsonl,
)
from .errors import ConfigError
from .lid import LID_FORMAT_VERSION, load_lid
from .metrics import evaluate
from .preprocess import normalize

__all__ = ["PipelineConfig", "load_pipeline_config", "run_pipeline"]


@dataclass(frozen=True)
class PipelineConfig:
    dataset_path: str
    output_dir: str
    mode: AugmentationMode
    lid_model: Optional[str] = None  # exactly one of lid_model / tags_path
    tags_path: Optional[str] = None
    dataset_format: Optional[str] = None
    dataset_name: Optional[str] = None
    schema: Schema = Schema()
    split: SplitSpec = SplitSpec()
    hyper: BaselineHyper = BaselineHyper()

    def resolved(self) -> dict:
        """Plain-dict form of the full effective configuration."""
        return {
            "dataset": {
                "path": self.dataset_path,
                "format": self.dataset_format,
                "name": self.dataset_name,
                "schema": {
                    "id": self.schema.id,
                    "text": self.schema.text,
                    "label": self.schema.label,
                },
            },
            "lid": (
                {"model": self.lid_model} if self.lid_model else {"tags": self.tags_path}
            ),
            "mode": self.mode.value,
            "split": {
                "train_frac": self.split.train_frac,
                "seed": self.split.seed,
                "stratified": self.split.stratified,
                "presplit": self.split.presplit,
            },
            "baseline": self.hyper.to_dict(),
            "output_dir": self.output_dir,
        }


_TOP_KEYS = {"dataset", "lid", "mode", "split", "baseline", "output_dir"}


def _take(mapping, key, default=None):
    return mapping[key] if key in mapping else default


def load_pipeline_config(path=None, overrides: Optional[dict] = None) -> PipelineConfig:
    """Build a PipelineConfig from a JSON config file plus flag overrides.

    Override keys (all optional): dataset_path, mode, output_dir, lid_model,
    tags_path, seed (applied to both the split and the classifier).
    """
    doc: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as f:
                doc = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    overrides = overrides or {}
    dataset = doc.get("dataset") or {}
    lid = dict(doc.get("lid") or {})
    split_doc = doc.get("split") or {}
    baseline_doc = doc.get("baseline") or {}

    if overrides.get("lid_model"):
        lid = {"model": overrides["lid_model"]}
    if overrides.get("tags_path"):
        lid = {"tags": overrides["tags_path"]}
    if len([k for k in ("model", "tags") if lid.get(k)]) != 1:
        raise ConfigError("exactly one tag source required: lid.model or lid.tags")
    extra = set(lid) - {"model", "tags"}
    if extra:
        raise ConfigError(f"unknown lid config keys: {sorted(extra)}")

    dataset_path = overrides.get("dataset_path") or dataset.get("path")
    if not dataset_path:
        raise ConfigError("dataset.path is required")
    output_dir = overrides.get("output_dir") or doc.get("output_dir")
    if not output_dir:
        raise ConfigError("output_dir is required")

    mode_value = overrides.get("mode") or doc.get("mode")
    if not mode_value:
        raise ConfigError("mode is required (word-lang, sentence-lang or none)")
    try:
        mode = AugmentationMode.parse(str(mode_value))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    schema_doc = dataset.get("schema") or {}
    schema = Schema(
        id=_take(schema_doc, "id", "id"),
        text=_take(schema_doc, "text", "text"),
        label=_take(schema_doc, "label", "label"),
    )

    seed_override = overrides.get("seed")
    try:
        split_spec = SplitSpec(
            train_frac=float(_take(split_doc, "train_frac", 0.70)),
            seed=int(seed_override if seed_override is not None
                     else _take(split_doc, "seed", 0)),
            stratified=bool(_take(split_doc, "stratified", True)),
            presplit=bool(_take(split_doc, "presplit", False)),
        )
        hyper = BaselineHyper(
            dim=int(_take(baseline_doc, "dim", BaselineHyper.dim)),
            learning_rate=float(_take(baseline_doc, "learning_rate",
                                      BaselineHyper.learning_rate)),
            epochs=int(_take(baseline_doc, "epochs", BaselineHyper.epochs)),
            l2=float(_take(baseline_doc, "l2", BaselineHyper.l2)),
            seed=int(seed_override if seed_override is not None
                     else _take(baseline_doc, "seed", 0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid numeric config value: {exc}") from exc
    if not 0 < split_spec.train_frac < 1:
        raise ConfigError(f"split.train_frac must be in (0, 1), got {split_spec.train_frac}")

    return PipelineConfig(
        dataset_path=str(dataset_path),
        output_dir=str(output_dir),
        mode=mode,
        lid_model=lid.get("model"),
        tags_path=lid.get("tags"),
        dataset_format=dataset.get("format"),
        dataset_name=dataset.get("name"),
        schema=schema,
        split=split_spec,
        hyper=hyper,
    )


def _config_hash(resolved: dict) -> str:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _write_json(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def run_pipeline(config: PipelineConfig) -> dict:
    """Execute every stage and write the artifact directory; returns the manifest."""
    os.makedirs(config.output_dir, exist_ok=True)
    out = lambda name: os.path.join(config.output_dir, name)
    artifacts = []

    dataset = load_dataset(
        config.dataset_path,
        fmt=config.dataset_format,
        schema=config.schema,
        name=config.dataset_name,
    )

    from dataclasses import replace

    normalized = replace(
        dataset,
        examples=tuple(replace(ex, text=normalize(ex.text)) for ex in dataset.examples),
    )
    write_jsonl((example_record(ex) for ex in normalized.examples), out("normalized.jsonl"))
    artifacts.append("normalized.jsonl")

    if config.lid_model:
        tagged = tag_dataset(normalized, load_lid(config.lid_model))
    else:
        tagged = import_tags(normalized, config.tags_path)
    write_jsonl((example_record(ex) for ex in tagged.examples), out("tagged.jsonl"))
    artifacts.append("tagged.jsonl")

    stats = lid_stats(tagged)
    _write_json(stats.to_dict(), out("stats.json"))
    artifacts.append("stats.json")

    aug_name = f"augmented.{config.mode.value}.jsonl"
    records = []
    for ex in tagged.examples:
        aug = augment(tagged_tokens(ex), config.mode)
        rec = example_record(ex)
        rec["text_aug"] = aug.value
        rec["mode"] = config.mode.value
        records.append(rec)
    write_jsonl(records, out(aug_name))
    artifacts.append(aug_name)

    augmented = augment_dataset(tagged, config.mode)
    train, val, test = split(augmented, config.split)
    for part, name in ((train, "train"), (val, "val"), (test, "test")):
        fname = f"{dataset.name}.{name}.jsonl"
        write_jsonl((example_record(ex) for ex in part.examples), out(fname))
        artifacts.append(fname)

    model = train_baseline(train, config.hyper)
    predictions = [predict(model, ex.text) for ex in test.examples]
    report = evaluate([ex.label for ex in test.examples], predictions, dataset.label_set)

    resolved = config.resolved()
    _write_json({"report": report.to_dict(), "config": resolved}, out("report.json"))
    artifacts.append("report.json")

    manifest = {
        "config": resolved,
        "config_hash": _config_hash(resolved),
        "seeds": {"split": config.split.seed, "baseline": config.hyper.seed},
        "versions": {
            "codemix": __version__,
            "lid_format": LID_FORMAT_VERSION,
            "baseline_format": BASELINE_FORMAT_VERSION,
        },
        "artifacts": sorted(artifacts + ["manifest.json"]),
    }
    _write_json(manifest, out("manifest.json"))
    return manifest
