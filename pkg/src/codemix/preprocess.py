"""Text normalization and whitespace tokenization for social-media text.

Cleaning rules, applied in order:
  1. remove URL spans (``http://``/``https://`` schemes and bare ``www.`` tokens)
  2. remove emoji / pictographic codepoints (deleted, not spaced, so a
     surrounding word is not split in two)
  3. replace every remaining non-alphanumeric, non-space codepoint with a space
  4. lowercase
  5. collapse whitespace runs to single spaces and trim

The result contains only lowercase letters, digits, combining marks and
single spaces, and normalizing twice gives the same string as normalizing
once. Devanagari counts as alphanumeric and survives intact: its vowel
signs and virama are combining marks, which are kept as parts of the
letters they attach to. No stemming or lemmatization is applied.
"""

import re
import unicodedata

__all__ = ["normalize", "tokenize"]

_URL_RE = re.compile(r"https?://\S+|(?<!\S)www\.\S+", re.IGNORECASE)

# Unicode emoji / pictographic blocks, plus the zero-width joiner, variation
# selectors, combining keycap, and the handful of emoji scattered through the
# symbol blocks (arrows, dingbats, letterlike symbols).
_EMOJI_RE = re.compile(
    "["
    "\U0001F000-\U0001F0FF"  # mahjong, dominoes, playing cards
    "\U0001F100-\U0001F2FF"  # enclosed alphanumeric/ideographic supplement
    "\U0001F300-\U0001F5FF"  # misc symbols and pictographs
    "\U0001F600-\U0001F64F"  # emoticons
    "\U0001F650-\U0001F67F"  # ornamental dingbats
    "\U0001F680-\U0001F6FF"  # transport and map symbols
    "\U0001F700-\U0001F77F"  # alchemical symbols
    "\U0001F780-\U0001F7FF"  # geometric shapes extended
    "\U0001F800-\U0001F8FF"  # supplemental arrows-c
    "\U0001F900-\U0001F9FF"  # supplemental symbols and pictographs
    "\U0001FA00-\U0001FAFF"  # chess symbols, symbols extended-a
    "☀-⛿"          # miscellaneous symbols
    "✀-➿"          # dingbats
    "⬅-⬇⬛⬜⭐⭕"
    "↔-↙↩↪"
    "⌚⌛⌨⏏⏩-⏳⏸-⏺"
    "Ⓜ▪▫▶◀◻-◾"
    "⤴⤵"
    "〰〽㊗㊙"
    "©®™ℹ‼⁉"
    "‍︎️⃣"
    "]+"
)


def _keeps(ch):
    # Combining marks (category M*) ride along with their base letter;
    # emoji modifiers in those categories were already removed above.
    return ch.isalnum() or unicodedata.category(ch).startswith("M")


def _alnum_or_space(text):
    """Map every non-alphanumeric, non-whitespace codepoint to a space."""
    return "".join(ch if _keeps(ch) else " " for ch in text)


def normalize(text: str) -> str:
    """Normalize raw text into the cleaned, lowercase, space-separated form.

    Total function: any Unicode input is accepted and degenerate inputs
    yield the empty string.
    """
    text = _URL_RE.sub(" ", text)
    text = _EMOJI_RE.sub("", text)
    text = _alnum_or_space(text)
    text = text.lower()
    # str.lower() uses full case mappings; a few codepoints expand into a
    # letter plus a combining mark, which must not leak into the output.
    text = _alnum_or_space(text)
    return " ".join(text.split())


def tokenize(text: str) -> list[str]:
    """Split normalized text on spaces; empty text gives an empty list."""
    return text.split()
