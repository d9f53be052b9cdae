"""Language-augmentation text formats built from tagged sentences.

Two augmenting formats plus a pass-through:

- word-lang: the tag follows each word, ``w1 T1 w2 T2 ... wn Tn``
- sentence-lang: all tags follow the sentence, ``w1 ... wn T1 ... Tn``
- none: the words unchanged

Tags are ordinary space-joined text tokens, always the uppercase strings
"HI"/"EN", while words are lowercase; the casing split is what keeps the
word "hi" distinct from the tag "HI". Inputs containing uppercase letters
are rejected rather than silently re-lowercased, since they indicate the
normalization stage was skipped.
"""

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import MalformedAugmentation, MixedCaseToken
from .lid import LangTag, TaggedToken

__all__ = ["AugmentationMode", "AugmentedText", "augment", "strip_augmentation"]

_TAG_STRINGS = {tag.value for tag in LangTag}


class AugmentationMode(enum.Enum):
    WORD_LANG = "word-lang"
    SENTENCE_LANG = "sentence-lang"
    NONE = "none"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "AugmentationMode":
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown augmentation mode {value!r} (expected one of {choices})") from None


@dataclass(frozen=True)
class AugmentedText:
    value: str
    mode: AugmentationMode
    source_len: int  # token count of the original sentence


def augment(tokens: Sequence[TaggedToken], mode: AugmentationMode) -> AugmentedText:
    """Render a tagged sentence in the requested augmentation format."""
    for tok, _ in tokens:
        if tok != tok.lower():
            raise MixedCaseToken(f"token {tok!r} is not lowercase; normalize before tagging")
    if mode is AugmentationMode.WORD_LANG:
        parts = []
        for tok, tag in tokens:
            parts.append(tok)
            parts.append(tag.value)
    elif mode is AugmentationMode.SENTENCE_LANG:
        parts = [tok for tok, _ in tokens] + [tag.value for _, tag in tokens]
    else:
        parts = [tok for tok, _ in tokens]
    return AugmentedText(" ".join(parts), mode, len(tokens))


def strip_augmentation(text: AugmentedText) -> list[TaggedToken]:
    """Recover the tagged sentence from augmented text (inverse of augment)."""
    if text.mode is AugmentationMode.NONE:
        raise MalformedAugmentation("mode 'none' carries no tags to strip")
    parts = text.value.split()
    if len(parts) % 2 != 0:
        raise MalformedAugmentation(f"odd token count {len(parts)} under mode {text.mode}")
    if len(parts) != 2 * text.source_len:
        raise MalformedAugmentation(
            f"token count {len(parts)} does not match source length {text.source_len}"
        )
    half = len(parts) // 2
    if text.mode is AugmentationMode.WORD_LANG:
        words, tags = parts[0::2], parts[1::2]
    else:
        words, tags = parts[:half], parts[half:]
    for word in words:
        if word != word.lower():
            raise MalformedAugmentation(f"word slot holds non-lowercase token {word!r}")
    for tag in tags:
        if tag not in _TAG_STRINGS:
            raise MalformedAugmentation(f"tag slot holds {tag!r}, expected HI or EN")
    return [TaggedToken(w, LangTag(t)) for w, t in zip(words, tags)]
