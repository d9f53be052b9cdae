"""Dataset ingestion, deterministic splitting, tag import, and LID statistics.

Datasets are immutable after load. Splitting uses a fixed rounding rule --
train gets floor(train_frac * N), the remainder is halved with validation
taking the floor and test the rest -- and a seeded shuffle over ids, so a
split is a pure function of (ids, labels, spec) regardless of row order.
Stratified splits apply the same rule per class and then reconcile per-class
rounding so the global sizes still match the rule exactly.
"""

import csv
import json
import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

from .augment import AugmentationMode, augment
from .errors import (
    DuplicateId,
    EmptyDataset,
    LengthMismatch,
    MissingId,
    SchemaError,
    StratumTooSmall,
    UnknownTag,
    UntaggedExample,
)
from .lid import LangTag, LidModel, TaggedToken, tag_sentence

__all__ = [
    "LabeledExample",
    "Dataset",
    "Schema",
    "SplitSpec",
    "DatasetStats",
    "load_dataset",
    "split",
    "split_sizes",
    "import_tags",
    "tag_dataset",
    "tagged_tokens",
    "augment_dataset",
    "lid_stats",
    "write_jsonl",
]

# Label-set sizes of the public benchmark datasets this pipeline targets;
# checked when a loaded dataset uses one of these names.
KNOWN_LABEL_COUNTS = {
    "icon": 3,
    "sentiment": 3,
    "hatespeech": 2,
    "hasoc": 2,
    "emotions": 6,
}


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: str
    label: str
    tags: Optional[tuple[LangTag, ...]] = None  # aligned with text.split()


@dataclass(frozen=True)
class Dataset:
    name: str
    examples: tuple[LabeledExample, ...]
    label_set: tuple[str, ...]

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)


@dataclass(frozen=True)
class Schema:
    """Field/column names for id, text and label in an input file."""

    id: Optional[str] = "id"
    text: str = "text"
    label: str = "label"


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.70
    seed: int = 0
    stratified: bool = True
    presplit: bool = False


@dataclass(frozen=True)
class DatasetStats:
    hindi_tokens: int
    english_tokens: int
    hindi_per_sentence: float
    english_per_sentence: float
    hindi_ratio_macro: float  # mean over non-empty sentences of HI/(HI+EN)
    hindi_ratio_micro: float  # total HI / total tokens

    def to_dict(self):
        return {
            "hindi_tokens": self.hindi_tokens,
            "english_tokens": self.english_tokens,
            "hindi_per_sentence": self.hindi_per_sentence,
            "english_per_sentence": self.english_per_sentence,
            "hindi_ratio_macro": self.hindi_ratio_macro,
            "hindi_ratio_micro": self.hindi_ratio_micro,
        }


def _build_dataset(name, rows, schema):
    """Assemble and validate a Dataset from (possibly id-less) raw records."""
    examples = []
    seen = set()
    for index, row in enumerate(rows):
        if schema.text not in row or row[schema.text] is None:
            raise SchemaError(f"row {index}: missing text field {schema.text!r}")
        if schema.label not in row or row[schema.label] is None:
            raise SchemaError(f"row {index}: missing label field {schema.label!r}")
        if schema.id is not None and schema.id in row and row[schema.id] is not None:
            ex_id = str(row[schema.id])
        else:
            ex_id = str(index)
        if ex_id in seen:
            raise DuplicateId(f"duplicate id {ex_id!r}")
        seen.add(ex_id)
        examples.append(
            LabeledExample(id=ex_id, text=str(row[schema.text]), label=str(row[schema.label]))
        )
    label_set = tuple(sorted({ex.label for ex in examples}))
    expected = KNOWN_LABEL_COUNTS.get(name.lower())
    if expected is not None and examples and len(label_set) != expected:
        raise SchemaError(
            f"dataset {name!r} should have {expected} labels, found {len(label_set)}: {label_set}"
        )
    return Dataset(name=name, examples=tuple(examples), label_set=label_set)


def _read_rows(path, fmt):
    if fmt == "jsonl":
        rows = []
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        return rows
    if fmt in ("csv", "tsv"):
        delim = "," if fmt == "csv" else "\t"
        with open(path, encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f, delimiter=delim))
    raise SchemaError(f"unsupported dataset format {fmt!r} (expected csv, tsv or jsonl)")


def load_dataset(path, fmt: Optional[str] = None, schema: Optional[Schema] = None,
                 name: Optional[str] = None) -> Dataset:
    """Load a labeled dataset from CSV/TSV (with header) or JSONL.

    The format is inferred from the file extension when not given. Ids are
    taken from the schema's id field when present and generated as the row
    index otherwise; duplicates are rejected. The label set is inferred and
    sorted.
    """
    path = str(path)
    if fmt is None:
        ext = path.rsplit(".", 1)[-1].lower() if "." in path else ""
        fmt = {"csv": "csv", "tsv": "tsv", "jsonl": "jsonl", "json": "jsonl"}.get(ext)
        if fmt is None:
            raise SchemaError(f"cannot infer format from {path!r}; pass fmt explicitly")
    if name is None:
        base = path.replace("\\", "/").rsplit("/", 1)[-1]
        name = base.rsplit(".", 1)[0]
    return _build_dataset(name, _read_rows(path, fmt), schema or Schema())


def _as_fraction(train_frac) -> Fraction:
    # Interpret the fraction by its decimal rendering (0.7 means exactly
    # 7/10) so size arithmetic never wobbles on binary float error.
    return Fraction(str(train_frac))


def split_sizes(n: int, train_frac: float = 0.70) -> tuple[int, int, int]:
    """Split arithmetic: floor the train share, halve the remainder.

    val gets the floor of the half-remainder and test the rest, so for odd
    remainders test is one larger.
    """
    train = math.floor(_as_fraction(train_frac) * n)
    rem = n - train
    val = rem // 2
    return train, val, rem - val


def _allocate_stratified(class_sizes, label_order, n, train_frac):
    """Per-class (train, val, test) counts whose totals match split_sizes(n).

    The rounding rule is applied per class; leftover units from flooring are
    handed to the classes with the largest fractional remainders (train) or
    the largest shortfall against their proportional share (val), so every
    class deviates from the global proportions by at most one example.
    """
    total_train, total_val, total_test = split_sizes(n, train_frac)
    frac_exact = _as_fraction(train_frac)

    train = {}
    frac = {}
    for label in label_order:
        exact = frac_exact * class_sizes[label]
        train[label] = math.floor(exact)
        frac[label] = exact - train[label]
    deficit = total_train - sum(train.values())
    for label in sorted(label_order, key=lambda l: (-frac[l], label_order.index(l)))[:deficit]:
        train[label] += 1

    rem = {label: class_sizes[label] - train[label] for label in label_order}
    val = {label: rem[label] // 2 for label in label_order}
    deficit = total_val - sum(val.values())
    odd = [label for label in label_order if rem[label] % 2 == 1]
    ideal = {label: Fraction(class_sizes[label] * total_val, n) for label in label_order}
    for label in sorted(odd, key=lambda l: (-(ideal[l] - val[l]), label_order.index(l)))[:deficit]:
        val[label] += 1

    test = {label: rem[label] - val[label] for label in label_order}
    assert sum(train.values()) == total_train
    assert sum(val.values()) == total_val
    assert sum(test.values()) == total_test
    return train, val, test


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Partition a dataset into (train, val, test) deterministically.

    The shuffle order is derived from the sorted example ids and the seed, so
    the same ids and spec always produce the same member sets, independent of
    input row order.
    """
    if spec.presplit:
        raise ValueError("presplit datasets ship their own split files; nothing to split")
    n = len(dataset.examples)
    if n == 0:
        raise EmptyDataset(f"dataset {dataset.name!r} is empty")
    if not 0 < spec.train_frac < 1:
        raise ValueError(f"train_frac must be in (0, 1), got {spec.train_frac}")

    by_id = sorted(range(n), key=lambda i: dataset.examples[i].id)
    rng = random.Random(spec.seed)
    rng.shuffle(by_id)

    if spec.stratified:
        class_sizes = {}
        for ex in dataset.examples:
            class_sizes[ex.label] = class_sizes.get(ex.label, 0) + 1
        for label, count in class_sizes.items():
            if count < 3:
                raise StratumTooSmall(
                    f"class {label!r} has {count} examples; stratified split needs >= 3"
                )
        label_order = list(dataset.label_set)
        train_n, val_n, _ = _allocate_stratified(class_sizes, label_order, n, spec.train_frac)
        parts = {0: [], 1: [], 2: []}
        taken = {label: 0 for label in label_order}
        for i in by_id:
            label = dataset.examples[i].label
            k = taken[label]
            taken[label] += 1
            if k < train_n[label]:
                parts[0].append(i)
            elif k < train_n[label] + val_n[label]:
                parts[1].append(i)
            else:
                parts[2].append(i)
        indices = (parts[0], parts[1], parts[2])
    else:
        train_n, val_n, _ = split_sizes(n, spec.train_frac)
        indices = (by_id[:train_n], by_id[train_n : train_n + val_n], by_id[train_n + val_n :])

    out = []
    for idx in indices:
        members = tuple(dataset.examples[i] for i in sorted(idx))
        out.append(Dataset(name=dataset.name, examples=members, label_set=dataset.label_set))
    return out[0], out[1], out[2]


def import_tags(dataset: Dataset, tags_path) -> Dataset:
    """Attach externally produced language tags to a dataset.

    The tags file is JSONL of ``{"id": ..., "tags": [...]}``; each tag array
    must align 1:1 with the whitespace tokens of the example's (normalized)
    text. Entries for unknown ids are ignored.
    """
    tag_map = {}
    with open(tags_path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            if "id" not in rec or "tags" not in rec:
                raise SchemaError(f"{tags_path}:{lineno}: expected fields 'id' and 'tags'")
            tag_map[str(rec["id"])] = rec["tags"]

    examples = []
    for ex in dataset.examples:
        if ex.id not in tag_map:
            raise MissingId(f"no tags for example id {ex.id!r}")
        raw = tag_map[ex.id]
        tokens = ex.text.split()
        if len(raw) != len(tokens):
            raise LengthMismatch(
                f"example {ex.id!r}: {len(raw)} tags for {len(tokens)} tokens"
            )
        try:
            tags = tuple(LangTag.parse(t) for t in raw)
        except UnknownTag as exc:
            raise UnknownTag(f"example {ex.id!r}: {exc}") from None
        examples.append(replace(ex, tags=tags))
    return replace(dataset, examples=tuple(examples))


def tag_dataset(dataset: Dataset, model: LidModel) -> Dataset:
    """Tag every example's (normalized) text with the LID model."""
    examples = []
    for ex in dataset.examples:
        tagged = tag_sentence(model, ex.text.split())
        examples.append(replace(ex, tags=tuple(t.tag for t in tagged)))
    return replace(dataset, examples=tuple(examples))


def tagged_tokens(example: LabeledExample) -> list[TaggedToken]:
    if example.tags is None:
        raise UntaggedExample(f"example {example.id!r} carries no language tags")
    return [TaggedToken(tok, tag) for tok, tag in zip(example.text.split(), example.tags)]


def augment_dataset(dataset: Dataset, mode: AugmentationMode) -> Dataset:
    """Replace every example's text with its augmented rendering."""
    examples = []
    for ex in dataset.examples:
        aug = augment(tagged_tokens(ex), mode)
        examples.append(replace(ex, text=aug.value, tags=None))
    return replace(dataset, examples=tuple(examples))


def lid_stats(dataset: Dataset) -> DatasetStats:
    """Token-level language statistics over a tagged dataset.

    Per-sentence means divide by the sentence count (empty sentences
    included); the macro ratio averages HI/(HI+EN) over non-empty sentences
    only. An empty dataset yields all zeros.
    """
    hindi = english = 0
    ratios = []
    for ex in dataset.examples:
        if ex.tags is None:
            raise UntaggedExample(f"example {ex.id!r} carries no language tags")
        hi = sum(1 for t in ex.tags if t is LangTag.HI)
        en = len(ex.tags) - hi
        hindi += hi
        english += en
        if ex.tags:
            ratios.append(hi / len(ex.tags))
    n_sentences = len(dataset.examples)
    total = hindi + english
    return DatasetStats(
        hindi_tokens=hindi,
        english_tokens=english,
        hindi_per_sentence=hindi / n_sentences if n_sentences else 0.0,
        english_per_sentence=english / n_sentences if n_sentences else 0.0,
        hindi_ratio_macro=sum(ratios) / len(ratios) if ratios else 0.0,
        hindi_ratio_micro=hindi / total if total else 0.0,
    )


def example_record(ex: LabeledExample) -> dict:
    rec = {"id": ex.id, "text": ex.text, "label": ex.label}
    if ex.tags is not None:
        rec["tags"] = [t.value for t in ex.tags]
    return rec


def write_jsonl(records: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False))
            f.write("\n")
