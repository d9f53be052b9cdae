"""Language-augmentation pipeline for code-mixed Hindi-English text classification.

The pipeline runs preprocessing, word-level language identification,
language augmentation (word-lang / sentence-lang / none), deterministic
splitting, corpus statistics, a hashed-feature linear baseline, and
evaluation, with a JSONL export boundary for external transformer
fine-tuning.
"""

from ._version import __version__
from .augment import AugmentationMode, AugmentedText, augment, strip_augmentation
from .baseline import (
    BaselineHyper,
    BaselineModel,
    ExperimentResult,
    featurize,
    load_baseline,
    predict,
    run_experiment,
    save_baseline,
    train_baseline,
)
from .corpus import (
    Dataset,
    DatasetStats,
    LabeledExample,
    Schema,
    SplitSpec,
    augment_dataset,
    import_tags,
    lid_stats,
    load_dataset,
    split,
    split_sizes,
    tag_dataset,
)
from .lid import (
    LangTag,
    LidModel,
    TaggedToken,
    load_lid,
    save_lid,
    tag_sentence,
    tag_word,
    train_lid,
)
from .metrics import ClassMetrics, EvalReport, evaluate
from .pipeline import PipelineConfig, load_pipeline_config, run_pipeline
from .preprocess import normalize, tokenize

__all__ = [
    "__version__",
    "AugmentationMode",
    "AugmentedText",
    "augment",
    "strip_augmentation",
    "BaselineHyper",
    "BaselineModel",
    "ExperimentResult",
    "featurize",
    "load_baseline",
    "predict",
    "run_experiment",
    "save_baseline",
    "train_baseline",
    "Dataset",
    "DatasetStats",
    "LabeledExample",
    "Schema",
    "SplitSpec",
    "augment_dataset",
    "import_tags",
    "lid_stats",
    "load_dataset",
    "split",
    "split_sizes",
    "tag_dataset",
    "LangTag",
    "LidModel",
    "TaggedToken",
    "load_lid",
    "save_lid",
    "tag_sentence",
    "tag_word",
    "train_lid",
    "ClassMetrics",
    "EvalReport",
    "evaluate",
    "PipelineConfig",
    "load_pipeline_config",
    "run_pipeline",
    "normalize",
    "tokenize",
]
