import json
import random
import warnings

import numpy as np
import pytest

from codemix.augment import AugmentationMode
from codemix.baseline import (
    BaselineHyper,
    BaselineModel,
    featurize,
    load_baseline,
    predict,
    run_experiment,
    save_baseline,
    train_baseline,
)
from codemix.corpus import Dataset, LabeledExample, SplitSpec, augment_dataset, split
from codemix.errors import CorruptModel, FormatVersionMismatch, NonFiniteLoss, SingleClass
from codemix.lid import LangTag
from codemix.metrics import evaluate
from helpers import gradient_check, homograph_dataset, random_word


def _toy_dataset(n=60, name="toy"):
    """Linearly separable two-class set with disjoint vocabularies."""
    rng = random.Random(13)
    examples = []
    for i in range(n):
        if i % 2 == 0:
            words = [random_word(rng, "aeiou") for _ in range(5)]
            label = "vowelly"
        else:
            words = [random_word(rng, "bcdfg") for _ in range(5)]
            label = "consonant"
        examples.append(LabeledExample(id=str(i), text=" ".join(words), label=label))
    return Dataset(name, tuple(examples), ("consonant", "vowelly"))


# --- featurize ---

def test_empty_text_empty_vector():
    assert featurize("") == {}


def test_featurize_deterministic():
    rng = random.Random(2)
    for _ in range(20):
        text = " ".join(random_word(rng, "abcdefgh") for _ in range(rng.randint(0, 6)))
        assert featurize(text) == featurize(text)


def test_featurize_bounds():
    vec = featurize("yeh bus kaafi late hai", dim=1 << 10)
    assert vec
    assert all(0 <= idx < (1 << 10) for idx in vec)
    assert all(count >= 1 for count in vec.values())


def test_dim_must_be_power_of_two():
    with pytest.raises(ValueError):
        featurize("x", dim=1000)


def test_tag_tokens_change_features():
    a = featurize("bus HI")
    b = featurize("bus EN")
    assert a != b
    # the word's own buckets are shared; the difference is in tag-bearing grams
    assert set(a) & set(b)


def test_augmentation_reaches_features():
    rng = random.Random(21)
    for _ in range(50):
        length = rng.randint(1, 8)
        tokens = [
            (random_word(rng, "abcdefghijklmnop"), rng.choice([LangTag.HI, LangTag.EN]))
            for _ in range(length)
        ]
        plain = " ".join(w for w, _ in tokens)
        word_lang = " ".join(f"{w} {t.value}" for w, t in tokens)
        assert featurize(word_lang) != featurize(plain)


# --- loss/gradient ---

def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(99)
    for _ in range(20):
        assert gradient_check(rng) < 1e-5


# --- training ---

def test_separable_data_reaches_full_training_accuracy():
    ds = _toy_dataset()
    model = train_baseline(ds, BaselineHyper(epochs=5, seed=1))
    correct = sum(1 for ex in ds.examples if predict(model, ex.text) == ex.label)
    assert correct == len(ds.examples)


def test_training_is_deterministic():
    ds = _toy_dataset()
    a = train_baseline(ds, BaselineHyper(epochs=3, seed=7))
    b = train_baseline(ds, BaselineHyper(epochs=3, seed=7))
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.bias, b.bias)
    c = train_baseline(ds, BaselineHyper(epochs=3, seed=8))
    assert not np.array_equal(a.weights, c.weights)


def test_single_class_rejected():
    examples = tuple(LabeledExample(id=str(i), text="a b", label="only") for i in range(5))
    ds = Dataset("one", examples, ("only",))
    with pytest.raises(SingleClass):
        train_baseline(ds)


def test_rising_loss_warns_and_halts():
    # identical text with conflicting labels cannot converge; a large step
    # size makes the epoch loss oscillate
    examples = tuple(
        LabeledExample(id=str(i), text="same text here", label="x" if i % 2 else "y")
        for i in range(8)
    )
    ds = Dataset("conflict", examples, ("x", "y"))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        train_baseline(ds, BaselineHyper(learning_rate=5.0, epochs=30, seed=3))
    assert any("loss rose" in str(w.message) for w in caught)


def test_nonfinite_loss_detected():
    ds = _toy_dataset(n=20)
    with pytest.raises(NonFiniteLoss):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            train_baseline(ds, BaselineHyper(learning_rate=1e160, l2=1e-6, epochs=4, seed=0))


# --- predict ---

def test_hand_computed_argmax_two_buckets():
    dim = 2
    hyper = BaselineHyper(dim=dim)
    weights = np.array([[1.0, -0.5], [0.2, 2.0]])
    bias = np.array([0.05, -0.1])
    model = BaselineModel(weights, bias, ("first", "second"), hyper)
    for text in ("bus", "bus hai", "kya bus hai", ""):
        vec = featurize(text, dim)
        scores = bias.copy()
        for idx, count in vec.items():
            scores += weights[:, idx] * count
        expected = ("first", "second")[int(np.argmax(scores))]
        assert predict(model, text) == expected


def test_empty_text_predicts_bias_argmax():
    hyper = BaselineHyper(dim=4)
    model = BaselineModel(np.zeros((2, 4)), np.array([0.0, 1.0]), ("a", "b"), hyper)
    assert predict(model, "") == "b"
    # exact tie resolves to the earliest label
    model = BaselineModel(np.zeros((2, 4)), np.zeros(2), ("a", "b"), hyper)
    assert predict(model, "") == "a"


# --- serialization ---

def test_save_load_round_trip(tmp_path):
    ds = _toy_dataset()
    model = train_baseline(ds, BaselineHyper(dim=1 << 12, epochs=3, seed=5))
    path = tmp_path / "model.bin"
    save_baseline(model, path)
    loaded = load_baseline(path)
    assert loaded.label_set == model.label_set
    assert loaded.hyper == model.hyper
    assert np.array_equal(loaded.weights, model.weights)
    assert np.array_equal(loaded.bias, model.bias)
    for ex in ds.examples:
        assert predict(loaded, ex.text) == predict(model, ex.text)


def test_corrupt_model_rejected(tmp_path):
    ds = _toy_dataset(n=10)
    model = train_baseline(ds, BaselineHyper(dim=1 << 8, epochs=1))
    path = tmp_path / "model.bin"
    save_baseline(model, path)
    blob = bytearray(path.read_bytes())
    blob[40] ^= 0x01
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptModel):
        load_baseline(path)
    path.write_bytes(bytes(blob[:30]))
    with pytest.raises(CorruptModel):
        load_baseline(path)


def test_wrong_version_rejected(tmp_path):
    import zlib

    ds = _toy_dataset(n=10)
    model = train_baseline(ds, BaselineHyper(dim=1 << 8, epochs=1))
    path = tmp_path / "model.bin"
    save_baseline(model, path)
    blob = path.read_bytes()
    payload = bytearray(blob[16:-4])
    header_len = int.from_bytes(payload[:4], "little")
    header = json.loads(payload[4 : 4 + header_len].decode())
    header["version"] = 999
    new_header = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    new_payload = len(new_header).to_bytes(4, "little") + new_header + bytes(payload[4 + header_len :])
    path.write_bytes(
        blob[:8]
        + len(new_payload).to_bytes(8, "little")
        + new_payload
        + zlib.crc32(new_payload).to_bytes(4, "little")
    )
    with pytest.raises(FormatVersionMismatch):
        load_baseline(path)


# --- experiments ---

def _label_independent_dataset(n=2000, seed=3):
    """Texts and labels drawn independently; tags attached at random."""
    rng = random.Random(seed)
    examples = []
    for i in range(n):
        length = rng.randint(3, 9)
        words = [random_word(rng, "abcdefghijklmnopqrst") for _ in range(length)]
        tags = tuple(rng.choice([LangTag.HI, LangTag.EN]) for _ in range(length))
        examples.append(
            LabeledExample(
                id=str(i),
                text=" ".join(words),
                label=rng.choice(["yes", "no"]),
                tags=tags,
            )
        )
    return Dataset("chance", tuple(examples), ("no", "yes"))


def test_chance_level_when_labels_independent():
    ds = _label_independent_dataset()
    result = run_experiment(ds, AugmentationMode.NONE,
                            hyper=BaselineHyper(epochs=3, seed=0),
                            split_spec=SplitSpec(seed=0))
    assert abs(result.report.macro_f1 - 0.5) <= 0.1


def test_no_leakage_against_permutation_null():
    ds = _label_independent_dataset(n=1200, seed=6)
    augmented = augment_dataset(ds, AugmentationMode.NONE)
    train, _, test = split(augmented, SplitSpec(seed=1))
    model = train_baseline(train, BaselineHyper(epochs=3, seed=1))
    y_pred = [predict(model, ex.text) for ex in test.examples]
    y_true = [ex.label for ex in test.examples]
    observed = evaluate(y_true, y_pred, ds.label_set).macro_f1

    rng = random.Random(0)
    nulls = []
    shuffled = list(y_true)
    for _ in range(200):
        rng.shuffle(shuffled)
        nulls.append(evaluate(shuffled, y_pred, ds.label_set).macro_f1)
    mean = sum(nulls) / len(nulls)
    sd = (sum((x - mean) ** 2 for x in nulls) / (len(nulls) - 1)) ** 0.5
    assert abs(observed - mean) <= 3 * sd + 1e-9


def test_homograph_tags_beat_no_tags():
    ds = homograph_dataset(seed=0, n=600)
    scores = {}
    for mode in (AugmentationMode.WORD_LANG, AugmentationMode.NONE):
        result = run_experiment(ds, mode, hyper=BaselineHyper(seed=0), split_spec=SplitSpec(seed=0))
        scores[mode] = result.report.macro_f1
    assert scores[AugmentationMode.WORD_LANG] > scores[AugmentationMode.NONE]


def test_experiment_reports_are_byte_identical():
    ds = homograph_dataset(seed=4, n=300)
    kwargs = dict(hyper=BaselineHyper(epochs=3, seed=2), split_spec=SplitSpec(seed=2))
    a = run_experiment(ds, AugmentationMode.WORD_LANG, **kwargs)
    b = run_experiment(ds, AugmentationMode.WORD_LANG, **kwargs)
    assert a.report.to_json() == b.report.to_json()
    assert a.config == b.config
    assert a.config["sizes"] == {"train": 210, "val": 45, "test": 45}


def test_experiment_requires_tags_or_model():
    examples = tuple(LabeledExample(id=str(i), text="a b", label="xy"[i % 2]) for i in range(6))
    ds = Dataset("untagged", examples, ("x", "y"))
    with pytest.raises(ValueError):
        run_experiment(ds, AugmentationMode.NONE)
