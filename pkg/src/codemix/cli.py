"""Command-line entry point wiring the pipeline stages together.

Subcommands: preprocess, lid train|tag, augment, split, stats, train, eval,
experiment, pipeline, export-hf. All file I/O is UTF-8 JSONL (one object per
line, LF-terminated); `-` means stdin/stdout where a command accepts it.

Exit statuses: 0 success, 1 configuration error, 2 data error, 3 internal
error. Errors print a single machine-parsable JSON line on stderr.
"""

import argparse
import json
import sys

from ._version import __version__
from .augment import AugmentationMode, augment
from .baseline import (
    BaselineHyper,
    load_baseline,
    predict,
    run_experiment,
    save_baseline,
    train_baseline,
)
from .corpus import (
    Dataset,
    LabeledExample,
    Schema,
    SplitSpec,
    example_record,
    import_tags,
    lid_stats,
    load_dataset,
    split,
    write_jsonl,
)
from .errors import CodemixError, ConfigError, DataError, SchemaError
from .lid import LangTag, TaggedToken, load_lid, read_lid_corpus_tsv, save_lid, tag_sentence, train_lid
from .metrics import evaluate
from .pipeline import load_pipeline_config, run_pipeline
from .preprocess import normalize


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as ConfigError (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _open_in(path):
    return sys.stdin if path in (None, "-") else open(path, encoding="utf-8")


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8")


def _read_records(path):
    with _open_in(path) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {lineno}: invalid JSON: {exc}") from exc


def _emit_records(records, path):
    f = _open_out(path)
    try:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False))
            f.write("\n")
    finally:
        if f is not sys.stdout:
            f.close()


def _require(rec, field_name, lineno):
    if field_name not in rec or rec[field_name] is None:
        raise SchemaError(f"record {lineno}: missing field {field_name!r}")
    return rec[field_name]


# --- subcommand implementations ---

def _cmd_preprocess(args):
    def gen():
        for i, rec in enumerate(_read_records(args.input)):
            raw = str(_require(rec, "text", i))
            out = dict(rec)
            out["text"] = normalize(raw)
            if args.keep_raw:
                out["raw_text"] = raw
            yield out

    _emit_records(gen(), args.output)
    return 0


def _cmd_lid_train(args):
    corpus = read_lid_corpus_tsv(args.corpus)
    model = train_lid(corpus, smoothing=args.smoothing)
    save_lid(model, args.out)
    print(f"trained on {len(corpus)} entries, lexicon size {len(model.lexicon)} -> {args.out}")
    return 0


def _cmd_lid_tag(args):
    model = load_lid(args.model)

    def gen():
        for i, rec in enumerate(_read_records(args.input)):
            text = str(_require(rec, "text", i))
            out = dict(rec)
            out["tags"] = [t.tag.value for t in tag_sentence(model, text.split())]
            yield out

    _emit_records(gen(), args.output)
    return 0


def _cmd_augment(args):
    mode = AugmentationMode.parse(args.mode)

    def gen():
        for i, rec in enumerate(_read_records(args.input)):
            text = str(_require(rec, "text", i))
            tags = _require(rec, "tags", i)
            tokens = text.split()
            if len(tags) != len(tokens):
                raise SchemaError(f"record {i}: {len(tags)} tags for {len(tokens)} tokens")
            tagged = [TaggedToken(tok, LangTag.parse(t)) for tok, t in zip(tokens, tags)]
            out = {}
            if "id" in rec:
                out["id"] = rec["id"]
            if "label" in rec:
                out["label"] = rec["label"]
            out["text_aug"] = augment(tagged, mode).value
            out["mode"] = mode.value
            yield out

    _emit_records(gen(), args.output)
    return 0


def _schema_from_args(args):
    return Schema(id=args.id_field, text=args.text_field, label=args.label_field)


def _cmd_split(args):
    dataset = load_dataset(args.dataset, fmt=args.format, schema=_schema_from_args(args),
                           name=args.name)
    spec = SplitSpec(train_frac=args.train_frac, seed=args.seed,
                     stratified=not args.no_stratify)
    train, val, test = split(dataset, spec)
    import os

    os.makedirs(args.out_dir, exist_ok=True)
    for part, part_name in ((train, "train"), (val, "val"), (test, "test")):
        path = os.path.join(args.out_dir, f"{dataset.name}.{part_name}.jsonl")
        write_jsonl((example_record(ex) for ex in part.examples), path)
        print(f"{part_name}: {len(part)} examples -> {path}")
    return 0


def _dataset_from_tagged_records(records, name):
    examples = []
    for i, rec in enumerate(records):
        text = str(_require(rec, "text", i))
        tags = _require(rec, "tags", i)
        tokens = text.split()
        if len(tags) != len(tokens):
            raise SchemaError(f"record {i}: {len(tags)} tags for {len(tokens)} tokens")
        examples.append(
            LabeledExample(
                id=str(rec.get("id", i)),
                text=text,
                label=str(rec.get("label", "")),
                tags=tuple(LangTag.parse(t) for t in tags),
            )
        )
    label_set = tuple(sorted({ex.label for ex in examples}))
    return Dataset(name=name, examples=tuple(examples), label_set=label_set)


def _cmd_stats(args):
    dataset = _dataset_from_tagged_records(_read_records(args.input), args.name)
    stats = lid_stats(dataset)
    if args.json:
        print(json.dumps(stats.to_dict(), sort_keys=True, indent=2))
        return 0
    header = (
        f"{'dataset':<12} {'hindi':>9} {'english':>9} "
        f"{'hindi/sent':>11} {'english/sent':>13} {'ratio_macro':>12} {'ratio_micro':>12}"
    )
    print(header)
    print(
        f"{dataset.name:<12} {stats.hindi_tokens:>9} {stats.english_tokens:>9} "
        f"{stats.hindi_per_sentence:>11.2f} {stats.english_per_sentence:>13.2f} "
        f"{stats.hindi_ratio_macro:>12.4f} {stats.hindi_ratio_micro:>12.4f}"
    )
    return 0


def _hyper_from_args(args):
    return BaselineHyper(dim=args.dim, learning_rate=args.learning_rate,
                         epochs=args.epochs, l2=args.l2, seed=args.seed)


def _cmd_train(args):
    schema = Schema(id=args.id_field, text=args.text_field, label=args.label_field)
    dataset = load_dataset(args.dataset, fmt=args.format, schema=schema)
    model = train_baseline(dataset, _hyper_from_args(args))
    save_baseline(model, args.out)
    print(f"trained on {len(dataset)} examples, {len(model.label_set)} classes -> {args.out}")
    return 0


def _cmd_predict(args):
    model = load_baseline(args.model)

    def gen():
        for i, rec in enumerate(_read_records(args.input)):
            text = str(_require(rec, args.text_field, i))
            out = dict(rec)
            out["pred"] = predict(model, text)
            yield out

    _emit_records(gen(), args.output)
    return 0


def _cmd_eval(args):
    if args.input is not None and args.input.lower().endswith((".csv", ".tsv")):
        import csv

        delim = "," if args.input.lower().endswith(".csv") else "\t"
        with open(args.input, encoding="utf-8", newline="") as f:
            records = list(csv.DictReader(f, delimiter=delim))
    else:
        records = list(_read_records(args.input))
    y_true = [str(_require(rec, args.true_field, i)) for i, rec in enumerate(records)]
    y_pred = [str(_require(rec, args.pred_field, i)) for i, rec in enumerate(records)]
    label_set = sorted(set(y_true) | set(y_pred))
    report = evaluate(y_true, y_pred, label_set)
    if args.json:
        print(report.to_json(), end="")
        return 0
    print(f"n                {report.n}")
    print(f"accuracy         {report.accuracy:.4f}")
    print(f"macro_precision  {report.macro_precision:.4f}")
    print(f"macro_recall     {report.macro_recall:.4f}")
    print(f"macro_f1         {report.macro_f1:.4f}")
    print(f"{'label':<16} {'precision':>9} {'recall':>9} {'f1':>9}")
    for label in report.labels:
        m = report.per_class[label]
        print(f"{label:<16} {m.precision:>9.4f} {m.recall:>9.4f} {m.f1:>9.4f}")
    return 0


def _tagged_dataset_for_experiment(args):
    schema = Schema(id=args.id_field, text=args.text_field, label=args.label_field)
    dataset = load_dataset(args.dataset, fmt=args.format, schema=schema)
    if args.tags:
        from dataclasses import replace

        normalized = replace(
            dataset,
            examples=tuple(replace(ex, text=normalize(ex.text)) for ex in dataset.examples),
        )
        return import_tags(normalized, args.tags), None
    if args.lid:
        return dataset, load_lid(args.lid)
    raise ConfigError("either --lid MODEL or --tags FILE is required")


def _cmd_experiment(args):
    dataset, lid_model = _tagged_dataset_for_experiment(args)
    mode = AugmentationMode.parse(args.mode)
    result = run_experiment(
        dataset,
        mode,
        lid_model=lid_model,
        hyper=_hyper_from_args(args),
        split_spec=SplitSpec(train_frac=args.train_frac, seed=args.seed,
                             stratified=not args.no_stratify),
    )
    doc = {"report": result.report.to_dict(), "config": result.config}
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(doc, f, sort_keys=True, indent=2)
            f.write("\n")
    print(
        f"{dataset.name} mode={mode.value}: accuracy {result.report.accuracy:.4f}, "
        f"macro F1 {result.report.macro_f1:.4f}"
    )
    return 0


def _cmd_pipeline(args):
    overrides = {
        "dataset_path": args.dataset,
        "mode": args.mode,
        "output_dir": args.output_dir,
        "lid_model": args.lid,
        "tags_path": args.tags,
        "seed": args.seed,
    }
    config = load_pipeline_config(args.config, overrides)
    manifest = run_pipeline(config)
    print(f"wrote {len(manifest['artifacts'])} artifacts to {config.output_dir} "
          f"(config {manifest['config_hash'][:12]})")
    return 0


def _cmd_export_hf(args):
    import os

    dataset, lid_model = _tagged_dataset_for_experiment(args)
    mode = AugmentationMode.parse(args.mode)
    if lid_model is not None:
        from dataclasses import replace

        from .corpus import tag_dataset

        normalized = replace(
            dataset,
            examples=tuple(replace(ex, text=normalize(ex.text)) for ex in dataset.examples),
        )
        dataset = tag_dataset(normalized, lid_model)
    spec = SplitSpec(train_frac=args.train_frac, seed=args.seed,
                     stratified=not args.no_stratify)
    from .corpus import tagged_tokens

    os.makedirs(args.out_dir, exist_ok=True)
    train, val, test = split(dataset, spec)
    for part, part_name in ((train, "train"), (val, "val"), (test, "test")):
        records = []
        for ex in part.examples:
            records.append(
                {
                    "id": ex.id,
                    "text_aug": augment(tagged_tokens(ex), mode).value,
                    "mode": mode.value,
                    "label": ex.label,
                }
            )
        path = os.path.join(args.out_dir, f"{part_name}.jsonl")
        write_jsonl(records, path)
        print(f"{part_name}: {len(records)} examples -> {path}")
    return 0


# --- parser wiring ---

def _add_io(parser):
    parser.add_argument("input", nargs="?", default="-",
                        help="input JSONL file, or - for stdin")
    parser.add_argument("-o", "--output", default="-",
                        help="output file, or - for stdout")


def _add_schema_flags(parser):
    parser.add_argument("--format", choices=["csv", "tsv", "jsonl"], default=None,
                        help="dataset format (default: infer from extension)")
    parser.add_argument("--id-field", default="id")
    parser.add_argument("--text-field", default="text")
    parser.add_argument("--label-field", default="label")


def _add_split_flags(parser):
    parser.add_argument("--train-frac", type=float, default=0.70)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--no-stratify", action="store_true",
                        help="split without per-class stratification")


def _add_hyper_flags(parser):
    parser.add_argument("--dim", type=int, default=BaselineHyper.dim,
                        help="hashing dimension (power of two)")
    parser.add_argument("--learning-rate", type=float, default=BaselineHyper.learning_rate)
    parser.add_argument("--epochs", type=int, default=BaselineHyper.epochs)
    parser.add_argument("--l2", type=float, default=BaselineHyper.l2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="codemix",
                     description="Language-augmentation pipeline for code-mixed text classification")
    parser.add_argument("--version", action="version", version=f"codemix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("preprocess", help="normalize the text field of JSONL records")
    _add_io(p)
    p.add_argument("--keep-raw", action="store_true", help="keep the original text as raw_text")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("lid", help="train or apply the word-level language identifier")
    lid_sub = p.add_subparsers(dest="lid_command", required=True, parser_class=_Parser)
    q = lid_sub.add_parser("train", help="train from a word<TAB>HI|EN corpus")
    q.add_argument("--corpus", required=True, help="TSV training corpus")
    q.add_argument("--out", required=True, help="output model file")
    q.add_argument("--smoothing", type=float, default=1.0)
    q.set_defaults(func=_cmd_lid_train)
    q = lid_sub.add_parser("tag", help="add a tags array aligned with the text tokens")
    q.add_argument("--model", required=True)
    _add_io(q)
    q.set_defaults(func=_cmd_lid_tag)

    p = sub.add_parser("augment", help="render augmented text from tagged records")
    p.add_argument("--mode", required=True, choices=[m.value for m in AugmentationMode])
    _add_io(p)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("split", help="deterministic train/val/test split")
    p.add_argument("--dataset", required=True)
    p.add_argument("--name", default=None, help="dataset name (default: file stem)")
    _add_schema_flags(p)
    _add_split_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("stats", help="language statistics over tagged records")
    _add_io(p)
    p.add_argument("--name", default="dataset")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("train", help="train the baseline classifier")
    p.add_argument("--dataset", required=True)
    _add_schema_flags(p)
    _add_hyper_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="add baseline predictions to JSONL records")
    p.add_argument("--model", required=True)
    p.add_argument("--text-field", default="text")
    _add_io(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--true", dest="true_field", required=True)
    p.add_argument("--pred", dest="pred_field", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("experiment", help="one full train/evaluate run")
    p.add_argument("--dataset", required=True)
    p.add_argument("--mode", required=True, choices=[m.value for m in AugmentationMode])
    p.add_argument("--lid", default=None, help="trained LID model file")
    p.add_argument("--tags", default=None, help="external tags JSONL")
    p.add_argument("--report", default=None, help="write the report JSON here")
    _add_schema_flags(p)
    _add_split_flags(p)
    _add_hyper_flags(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("pipeline", help="run every stage from a config file")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--dataset", default=None, help="override dataset path")
    p.add_argument("--mode", default=None, choices=[m.value for m in AugmentationMode])
    p.add_argument("--output-dir", default=None)
    p.add_argument("--lid", default=None)
    p.add_argument("--tags", default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="override both the split and classifier seeds")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("export-hf", help="export augmented splits for transformer fine-tuning")
    p.add_argument("--dataset", required=True)
    p.add_argument("--mode", required=True, choices=[m.value for m in AugmentationMode])
    p.add_argument("--lid", default=None)
    p.add_argument("--tags", default=None)
    _add_schema_flags(p)
    _add_split_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_export_hf)

    return parser


def _fail(category, exc):
    print(
        json.dumps({"error": category, "type": type(exc).__name__, "message": str(exc)}),
        file=sys.stderr,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args) or 0
    except SystemExit as exc:  # argparse --help / --version
        return int(exc.code or 0)
    except ConfigError as exc:
        _fail("config", exc)
        return 1
    except ValueError as exc:
        _fail("config", exc)
        return 1
    except (DataError, OSError) as exc:
        _fail("data", exc)
        return 2
    except CodemixError as exc:
        _fail("internal", exc)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - last-resort guard
        _fail("internal", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
