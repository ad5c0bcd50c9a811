"""Text normalization: raw metadata blobs -> canonical tags.

Pipeline per token: accent folding (NFKD + drop combining marks), lowercase,
strip everything outside [a-z0-9] plus the preserved characters, then length
and stopword filters.  Stemming is available behind a config switch but off
by default (it measurably hurt precision on curated keyword metadata).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from tagrec.stemmer import porter_stem

# rejection reasons returned by normalize_token
STOPWORD = "stopword"
TOO_SHORT = "too_short"
EMPTY_AFTER_STRIP = "empty_after_strip"

DEFAULT_PRESERVED = "+#"


@dataclass(frozen=True)
class NormalizerConfig:
    stopwords: frozenset[str] = frozenset()
    min_token_length: int = 2
    preserved_characters: str = DEFAULT_PRESERVED
    stemming_enabled: bool = False

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        if any(c.isalnum() for c in self.preserved_characters):
            raise ValueError("preserved_characters must not contain letters or digits")
        if not isinstance(self.stopwords, frozenset):
            object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def fold_accents(text: str) -> str:
    """Decompose to NFKD and drop combining marks ("Programação" -> "Programacao")."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def normalize_token(raw: str, config: NormalizerConfig) -> tuple[str | None, str | None]:
    """Normalize one whitespace-free token.

    Returns (tag, None) on acceptance or (None, reason) on rejection; rejection
    is a normal outcome, never an error.
    """
    folded = fold_accents(raw).lower()
    allowed = set("abcdefghijklmnopqrstuvwxyz0123456789") | set(config.preserved_characters)
    stripped = "".join(c for c in folded if c in allowed)
    if not stripped:
        return None, EMPTY_AFTER_STRIP
    if len(stripped) < config.min_token_length:
        return None, TOO_SHORT
    if stripped in config.stopwords:
        return None, STOPWORD
    if config.stemming_enabled:
        stripped = stem(stripped)
        if len(stripped) < config.min_token_length:
            return None, TOO_SHORT
        if stripped in config.stopwords:
            return None, STOPWORD
    return stripped, None


def extract_tags(raw_blob: str, config: NormalizerConfig) -> frozenset[str]:
    """Extract the tag set of a metadata blob (set semantics, order-free)."""
    tags = set()
    for token in raw_blob.split():
        tag, _ = normalize_token(token, config)
        if tag is not None:
            tags.add(tag)
    return frozenset(tags)


def stem(tag: str) -> str:
    """Suffix-strip a tag with the Porter algorithm (Snowball family, English)."""
    return porter_stem(tag)
