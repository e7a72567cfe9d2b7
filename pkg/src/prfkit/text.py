"""Normalization and tokenization for Latin and Devanagari text.

Both document bodies and topic titles go through the same pipeline:
split on punctuation/separators, canonically compose, lowercase where
the script is cased, drop stopwords. No stemming is applied anywhere,
so plural and inflected forms stay distinct tokens.
"""

import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError

SCRIPT_HINTS = ("latin", "devanagari", "mixed")


def _is_separator(ch: str) -> bool:
    # Punctuation (P*), separators (Z*) and control/format characters (C*)
    # break tokens; letters, combining marks, digits and symbols do not.
    return unicodedata.category(ch)[0] in "PZC"


@dataclass(frozen=True)
class LangProfile:
    """A language configuration: its stopword set and dominant script."""

    name: str
    stopwords: frozenset = frozenset()
    script_hint: str = "mixed"

    def __post_init__(self):
        if self.script_hint not in SCRIPT_HINTS:
            raise ValueError(f"script_hint must be one of {SCRIPT_HINTS}")
        # Stopwords are stored in normalized form so membership tests see
        # exactly what the tokenizer emits.
        normalized = frozenset(normalize(w, self) for w in self.stopwords if w)
        object.__setattr__(self, "stopwords", normalized)


@dataclass(frozen=True)
class TokenStream:
    """Stopword-filtered tokens of one text, with 0-based positions.

    Positions index the filtered stream itself (always 0..len-1); offsets
    into the raw text are not retained.
    """

    tokens: tuple

    @property
    def positions(self) -> range:
        return range(len(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]


def normalize(token: str, profile: LangProfile) -> str:
    """Canonical form of a token: lowercased, then NFC-composed.

    Lowercasing only affects cased scripts, so Devanagari tokens pass
    through unchanged. The function is idempotent.
    """
    return unicodedata.normalize("NFC", token.lower())


def tokenize(raw, profile: LangProfile) -> TokenStream:
    """Split raw text into normalized tokens with stopwords removed.

    A token is a maximal run of letters, combining marks, digits and symbol
    characters; Unicode punctuation, separator and control characters split
    tokens. Digits survive inside tokens. Bytes input must be valid UTF-8.
    """
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"invalid UTF-8 at byte offset {exc.start}") from exc
    kept = []
    current = []
    for ch in raw:
        if _is_separator(ch):
            if current:
                _append_token(kept, "".join(current), profile)
                current.clear()
        else:
            current.append(ch)
    if current:
        _append_token(kept, "".join(current), profile)
    return TokenStream(tuple(kept))


def _append_token(kept, word, profile):
    norm = normalize(word, profile)
    if norm and norm not in profile.stopwords:
        kept.append(norm)


def load_stopwords(path) -> frozenset:
    """Read a stopword file: UTF-8, one token per line, '#' lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line)
    return frozenset(words)


def profile_from_file(name: str, stopword_path, script_hint: str = "mixed") -> LangProfile:
    """Build a LangProfile from an on-disk stopword list."""
    path = Path(stopword_path)
    if not path.is_file():
        raise InputError(f"stopword file not found: {path}")
    return LangProfile(name=name, stopwords=load_stopwords(path), script_hint=script_hint)
