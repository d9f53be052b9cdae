"""CLI: `hf-harness finetune --config run.json --out report.json`.

Exit statuses: 0 success, 1 configuration error, 2 data or checkpoint
problem (including out-of-memory), 3 internal error.
"""

import argparse
import json
import sys

from .config import ConfigError, load_run_config
from .run import CheckpointUnavailable, DataError, finetune_and_eval


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="hf-harness",
                     description="Fine-tune transformers on language-augmented exports")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("finetune", help="run one fine-tuning configuration")
    p.add_argument("--config", required=True, help="RunConfig JSON file")
    p.add_argument("--out", required=True, help="where to write the report JSON")
    return parser


def _fail(category, exc):
    print(json.dumps({"error": category, "type": type(exc).__name__, "message": str(exc)}),
          file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_run_config(args.config)
        doc = finetune_and_eval(config)
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(doc, f, sort_keys=True, indent=2)
            f.write("\n")
        print(f"macro F1 {doc['report']['macro_f1']:.5f} -> {args.out}")
        return 0
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        _fail("config", exc)
        return 1
    except (CheckpointUnavailable, DataError, OSError, MemoryError) as exc:
        _fail("data", exc)
        return 2
    except RuntimeError as exc:
        # CUDA OOM surfaces as a RuntimeError subclass
        if "out of memory" in str(exc).lower():
            _fail("data", exc)
            return 2
        _fail("internal", exc)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort guard
        _fail("internal", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
