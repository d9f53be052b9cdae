"""Word-level language identification for romanized-Hindi/English tokens.

A trained ``LidModel`` combines two signals:

- a lexicon of exact per-word tag counts from the training corpus, and
- Laplace-smoothed character n-gram tables (orders 1..4, words padded with
  boundary markers) per language, with a prior from token frequencies.

A word found in the lexicon with a strict count majority is tagged by the
majority. Unseen words and lexicon ties fall back to the n-gram route:
argmax over languages of prior + per-order n-gram log-likelihood averaged
across orders. Exact score ties break toward EN so tagging is deterministic.
"""

import enum
import json
import math
import zlib
from collections import Counter
from typing import NamedTuple

from .errors import CorruptModel, EmptyCorpus, FormatVersionMismatch, SchemaError, UnknownTag

__all__ = [
    "LangTag",
    "TaggedToken",
    "LidModel",
    "train_lid",
    "tag_word",
    "tag_sentence",
    "save_lid",
    "load_lid",
    "read_lid_corpus_tsv",
]

NGRAM_ORDERS = (1, 2, 3, 4)

# Word boundary markers for n-gram padding. Control characters cannot occur
# in tokens, which never contain whitespace and normally come from
# normalized text (alphanumeric only).
_BOUND_START = "\x02"
_BOUND_END = "\x03"

LID_MAGIC = b"CMLIDv01"
LID_FORMAT_VERSION = 1


class LangTag(enum.Enum):
    HI = "HI"
    EN = "EN"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "LangTag":
        try:
            return cls(value)
        except ValueError:
            raise UnknownTag(f"unknown language tag {value!r} (expected HI or EN)") from None


class TaggedToken(NamedTuple):
    token: str
    tag: LangTag


def char_ngrams(word: str, n: int) -> list[str]:
    """Character n-grams of a word padded with n-1 boundary markers per side."""
    padded = _BOUND_START * (n - 1) + word + _BOUND_END * (n - 1)
    return [padded[i : i + n] for i in range(len(padded) - n + 1)]


class LidModel:
    """Immutable word-level language identifier.

    ``lexicon`` maps word -> (count_HI, count_EN). ``ngram_logprob`` maps
    tag -> order -> ngram -> log-probability; ``unseen_logprob`` holds the
    log-probability of the one extra bucket reserved for unseen n-grams.
    For every (tag, order) the smoothed probabilities over the observed
    n-gram alphabet plus the unseen bucket sum to 1.
    """

    def __init__(self, lexicon, ngram_logprob, unseen_logprob, priors, smoothing,
                 version=LID_FORMAT_VERSION):
        self.lexicon = lexicon
        self.ngram_logprob = ngram_logprob
        self.unseen_logprob = unseen_logprob
        self.priors = priors
        self.smoothing = smoothing
        self.version = version


def train_lid(corpus, smoothing: float = 1.0) -> LidModel:
    """Train a model from (word, LangTag) pairs.

    Lexicon counts are exact corpus counts; n-gram tables are Laplace-smoothed
    relative frequencies over a vocabulary shared by both languages (so a gram
    seen in only one language competes fairly in the other); priors are
    proportional to per-language token counts.
    """
    if smoothing <= 0:
        raise ValueError(f"smoothing must be positive, got {smoothing}")
    entries = list(corpus)
    per_lang_tokens = Counter(tag for _, tag in entries)
    for tag in LangTag:
        if per_lang_tokens[tag] == 0:
            raise EmptyCorpus(f"training corpus has no {tag.value} entries")

    lexicon: dict[str, list[int]] = {}
    for word, tag in entries:
        counts = lexicon.setdefault(word, [0, 0])
        counts[0 if tag is LangTag.HI else 1] += 1

    # Raw n-gram counts per (language, order), plus the shared vocabulary.
    counts = {tag: {n: Counter() for n in NGRAM_ORDERS} for tag in LangTag}
    for word, tag in entries:
        for n in NGRAM_ORDERS:
            counts[tag][n].update(char_ngrams(word, n))

    ngram_logprob = {tag: {} for tag in LangTag}
    unseen_logprob = {tag: {} for tag in LangTag}
    for n in NGRAM_ORDERS:
        vocab = set(counts[LangTag.HI][n]) | set(counts[LangTag.EN][n])
        for tag in LangTag:
            total = sum(counts[tag][n].values())
            denom = total + smoothing * (len(vocab) + 1)
            table = {
                gram: math.log((counts[tag][n][gram] + smoothing) / denom)
                for gram in vocab
            }
            ngram_logprob[tag][n] = table
            unseen_logprob[tag][n] = math.log(smoothing / denom)

    total_tokens = len(entries)
    priors = {
        tag: math.log(per_lang_tokens[tag] / total_tokens) for tag in LangTag
    }
    lexicon_frozen = {w: (c[0], c[1]) for w, c in lexicon.items()}
    return LidModel(lexicon_frozen, ngram_logprob, unseen_logprob, priors, smoothing)


def _ngram_score(model: LidModel, word: str, tag: LangTag) -> float:
    """Prior plus per-order n-gram log-likelihood averaged across orders."""
    order_sums = []
    for n in NGRAM_ORDERS:
        table = model.ngram_logprob[tag][n]
        unseen = model.unseen_logprob[tag][n]
        order_sums.append(sum(table.get(g, unseen) for g in char_ngrams(word, n)))
    return model.priors[tag] + sum(order_sums) / len(NGRAM_ORDERS)


def tag_word(model: LidModel, word: str) -> tuple[LangTag, float]:
    """Tag a single word; the score is the HI-minus-EN log-odds.

    Lexicon majority wins outright when the counts differ; ties and unseen
    words are decided by the character n-gram route, with exact ties going
    to EN.
    """
    counts = model.lexicon.get(word)
    if counts is not None and counts[0] != counts[1]:
        score = math.log((counts[0] + model.smoothing) / (counts[1] + model.smoothing))
        return (LangTag.HI if counts[0] > counts[1] else LangTag.EN), score
    score = _ngram_score(model, word, LangTag.HI) - _ngram_score(model, word, LangTag.EN)
    return (LangTag.HI if score > 0 else LangTag.EN), score


def tag_sentence(model: LidModel, tokens) -> list[TaggedToken]:
    """Tag every token independently; output aligns 1:1 with the input."""
    return [TaggedToken(tok, tag_word(model, tok)[0]) for tok in tokens]


# --- serialization ---
#
# Single-file container: 8-byte magic, 8-byte little-endian payload length,
# the payload (UTF-8 JSON with sorted keys), and a 4-byte little-endian
# CRC-32 of the payload.

def _to_payload(model: LidModel) -> bytes:
    doc = {
        "version": model.version,
        "smoothing": model.smoothing,
        "priors": {tag.value: model.priors[tag] for tag in LangTag},
        "lexicon": {w: list(c) for w, c in model.lexicon.items()},
        "ngram_logprob": {
            tag.value: {str(n): model.ngram_logprob[tag][n] for n in NGRAM_ORDERS}
            for tag in LangTag
        },
        "unseen_logprob": {
            tag.value: {str(n): model.unseen_logprob[tag][n] for n in NGRAM_ORDERS}
            for tag in LangTag
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_lid(model: LidModel, path) -> None:
    payload = _to_payload(model)
    with open(path, "wb") as f:
        f.write(LID_MAGIC)
        f.write(len(payload).to_bytes(8, "little"))
        f.write(payload)
        f.write(zlib.crc32(payload).to_bytes(4, "little"))


def load_lid(path) -> LidModel:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < len(LID_MAGIC) + 8 or blob[: len(LID_MAGIC)] != LID_MAGIC:
        raise CorruptModel(f"{path}: not a LID model file")
    length = int.from_bytes(blob[8:16], "little")
    body = blob[16:]
    if len(body) != length + 4:
        raise CorruptModel(f"{path}: truncated or oversized model file")
    payload, checksum = body[:length], body[length:]
    if zlib.crc32(payload) != int.from_bytes(checksum, "little"):
        raise CorruptModel(f"{path}: checksum mismatch")
    try:
        doc = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"{path}: undecodable payload: {exc}") from exc
    version = doc.get("version")
    if version != LID_FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"{path}: format version {version!r}, expected {LID_FORMAT_VERSION}"
        )
    return LidModel(
        lexicon={w: (c[0], c[1]) for w, c in doc["lexicon"].items()},
        ngram_logprob={
            tag: {int(n): table for n, table in doc["ngram_logprob"][tag.value].items()}
            for tag in LangTag
        },
        unseen_logprob={
            tag: {int(n): v for n, v in doc["unseen_logprob"][tag.value].items()}
            for tag in LangTag
        },
        priors={tag: doc["priors"][tag.value] for tag in LangTag},
        smoothing=doc["smoothing"],
        version=version,
    )


def read_lid_corpus_tsv(path) -> list[tuple[str, LangTag]]:
    """Read a `word<TAB>HI|EN` training corpus, skipping blank lines."""
    entries = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise SchemaError(f"{path}:{lineno}: expected 'word<TAB>HI|EN', got {line!r}")
            entries.append((parts[0], LangTag.parse(parts[1])))
    return entries
