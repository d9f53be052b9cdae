"""Shared generators and independent oracles used across the test suite."""

import random
from fractions import Fraction

import numpy as np

from codemix.baseline import logistic_loss_and_grad
from codemix.corpus import Dataset, LabeledExample
from codemix.lid import LangTag, TaggedToken

HI_ALPHABET = "aeioudhkmnr"
EN_ALPHABET = "bcfgjlpqstw"


def brute_force_metrics(y_true, y_pred, label_set):
    """One-vs-rest metric counting straight off the label lists.

    Independent of the library implementation: no confusion matrix, just
    direct tp/fp/fn tallies per class.
    """
    per_class = {}
    for label in label_set:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == label and p == label)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != label and p == label)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == label and p != label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = (precision, recall, f1)
    k = len(label_set)
    accuracy = sum(1 for t, p in zip(y_true, y_pred) if t == p) / len(y_true)
    macro_p = sum(v[0] for v in per_class.values()) / k
    macro_r = sum(v[1] for v in per_class.values()) / k
    macro_f1 = sum(v[2] for v in per_class.values()) / k
    return accuracy, per_class, macro_p, macro_r, macro_f1


def exact_split_sizes(n, train_frac=Fraction(7, 10)):
    """Rational-arithmetic version of the split rounding rule."""
    train = int(Fraction(train_frac) * n)  # floor for positive values
    rem = n - train
    val = rem // 2
    return train, val, rem - val


def random_word(rng, alphabet, lo=3, hi=8):
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def toy_lid_corpus(rng, n_train=2000, n_heldout=500):
    """Two languages with disjoint character distributions.

    Returns (train_entries, heldout_entries); held-out words never occur in
    training, standing in for unseen inflections.
    """
    train, seen = [], set()
    for _ in range(n_train // 2):
        for alphabet, tag in ((HI_ALPHABET, LangTag.HI), (EN_ALPHABET, LangTag.EN)):
            word = random_word(rng, alphabet)
            train.append((word, tag))
            seen.add(word)
    heldout = []
    while len(heldout) < n_heldout:
        alphabet, tag = (HI_ALPHABET, LangTag.HI) if len(heldout) % 2 == 0 else (EN_ALPHABET, LangTag.EN)
        word = random_word(rng, alphabet)
        if word not in seen:
            heldout.append((word, tag))
    return train, heldout


def random_tagged_sentence(rng, max_len=40):
    length = rng.randint(0, max_len)
    tokens = []
    for _ in range(length):
        word = rng.choice(["hi", "en", random_word(rng, "abcdefghijklmnopqrstuvwxyz0123456789", 1, 9)])
        tokens.append(TaggedToken(word, rng.choice([LangTag.HI, LangTag.EN])))
    return tokens


def random_fuzz_string(rng):
    """Messy Unicode: random codepoints, emoji, URLs, Devanagari, casing traps."""
    pools = [
        lambda: chr(rng.randint(32, 0x2FFF)),
        lambda: chr(rng.randint(0x1F000, 0x1FAFF)),
        lambda: chr(rng.randint(0x0900, 0x097F)),  # Devanagari
        lambda: rng.choice(" \t\n ‍️⃣"),
        lambda: rng.choice(["https://ex.am/p?q=1", "http://t.co/Ab1", "www.site.in/x",
                            "#tag", "@user", "İ", "ǅ", "ΣΣ"]),
        lambda: rng.choice("abcXYZ0129'\".,!?-_"),
    ]
    return "".join(rng.choice(pools)() for _ in range(rng.randint(0, 40)))


def finite_difference_gradients(weights, bias, x, y, l2, eps=1e-6):
    """Central-difference gradients of the logistic loss, entry by entry."""
    fd_w = np.zeros_like(weights)
    fd_b = np.zeros_like(bias)
    for arr, out in ((weights, fd_w), (bias, fd_b)):
        it = np.nditer(arr, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = arr[idx]
            arr[idx] = orig + eps
            up, _, _ = logistic_loss_and_grad(weights, bias, x, y, l2)
            arr[idx] = orig - eps
            down, _, _ = logistic_loss_and_grad(weights, bias, x, y, l2)
            arr[idx] = orig
            out[idx] = (up - down) / (2 * eps)
    return fd_w, fd_b


def gradient_check(rng, k=3, d=10):
    """Relative error between analytic and finite-difference gradients."""
    weights = rng.normal(size=(k, d))
    bias = rng.normal(size=k)
    x = rng.poisson(1.0, size=d).astype(float)
    y = int(rng.integers(k))
    l2 = float(rng.choice([0.0, 0.01]))
    _, grad_w, grad_b = logistic_loss_and_grad(weights, bias, x, y, l2)
    fd_w, fd_b = finite_difference_gradients(weights, bias, x, y, l2)
    analytic = np.concatenate([grad_w.ravel(), grad_b])
    numeric = np.concatenate([fd_w.ravel(), fd_b])
    denom = max(np.linalg.norm(analytic), np.linalg.norm(numeric))
    return np.linalg.norm(analytic - numeric) / denom


def homograph_dataset(seed, n=2000, n_context=3):
    """Sentences whose label is fixed by the language of one shared homograph.

    Every sentence holds the token "bus" plus n_context words from each
    language's vocabulary, shuffled; only the homograph's oracle tag (HI or
    EN) determines the label, so without tags the text carries no label
    signal.
    """
    rng = random.Random(seed)
    hi_vocab = sorted({random_word(rng, HI_ALPHABET) for _ in range(200)})
    en_vocab = sorted({random_word(rng, EN_ALPHABET) for _ in range(200)})
    examples = []
    for i in range(n):
        words = [(rng.choice(hi_vocab), LangTag.HI) for _ in range(n_context)]
        words += [(rng.choice(en_vocab), LangTag.EN) for _ in range(n_context)]
        rng.shuffle(words)
        tag = rng.choice([LangTag.HI, LangTag.EN])
        words.insert(rng.randint(0, len(words)), ("bus", tag))
        examples.append(
            LabeledExample(
                id=str(i),
                text=" ".join(w for w, _ in words),
                label="hindi-sense" if tag is LangTag.HI else "english-sense",
                tags=tuple(t for _, t in words),
            )
        )
    return Dataset(
        name="homograph",
        examples=tuple(examples),
        label_set=("english-sense", "hindi-sense"),
    )
