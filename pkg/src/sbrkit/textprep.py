"""Turning bug-report text into normalized token sequences.

The pipeline is: pick the content variant (title, description or their
concatenation), lowercase and split on runs of non-alphanumeric
characters, drop tokens without any letter, remove stop words, then
Porter-stem each purely alphabetic token.
"""

from __future__ import annotations

import re
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import BugReport
from .porter import porter_stem


class ContentVariant(str, Enum):
    TITLE = "title"
    DESCRIPTION = "description"
    TITLE_PLUS_DESCRIPTION = "title-plus-description"


_CONTENT_ALIASES = {
    "title": ContentVariant.TITLE,
    "description": ContentVariant.DESCRIPTION,
    "title-plus-description": ContentVariant.TITLE_PLUS_DESCRIPTION,
    "both": ContentVariant.TITLE_PLUS_DESCRIPTION,
}


def parse_content_variant(name: str) -> ContentVariant:
    """Resolve a variant name; accepts "both" as a CLI-friendly alias."""
    try:
        return _CONTENT_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown content variant {name!r}") from None


def select_content(report: BugReport, variant: ContentVariant) -> str:
    """Return the report text named by the variant.

    For the combined variant, title and description are joined by a single
    space; empty fields contribute nothing (no dangling separator).
    """
    if variant is ContentVariant.TITLE:
        return report.title
    if variant is ContentVariant.DESCRIPTION:
        return report.description
    return " ".join(part for part in (report.title, report.description) if part)


_TOKEN_RE = re.compile(r"[a-z0-9]+")
_LETTER_RE = re.compile(r"[a-z]")
_ALPHA_RE = re.compile(r"[a-z]+\Z")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; keep tokens with a letter."""
    return [tok for tok in _TOKEN_RE.findall(text.lower()) if _LETTER_RE.search(tok)]


def remove_stopwords(tokens: list[str], stoplist: frozenset[str]) -> list[str]:
    """Drop exact stop-word matches, preserving the order of the rest."""
    return [tok for tok in tokens if tok not in stoplist]


def load_stoplist(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: one lowercase term per line, '#' comments ignored."""
    terms = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        term = line.strip()
        if term and not term.startswith("#"):
            terms.add(term)
    return frozenset(terms)


@lru_cache(maxsize=1)
def default_stoplist() -> frozenset[str]:
    """The versioned stop-word list bundled with the package."""
    text = resources.files("sbrkit").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(
        term for term in (line.strip() for line in text.splitlines())
        if term and not term.startswith("#")
    )


def stem_token(token: str) -> str:
    """Porter-stem a token; tokens with non-letter characters pass through."""
    return porter_stem(token) if _ALPHA_RE.match(token) else token


def preprocess(
    report: BugReport,
    variant: ContentVariant,
    stoplist: frozenset[str] | None = None,
) -> list[str]:
    """Full preprocessing: select, tokenize, de-stop, stem."""
    if stoplist is None:
        stoplist = default_stoplist()
    tokens = tokenize(select_content(report, variant))
    return [stem_token(tok) for tok in remove_stopwords(tokens, stoplist)]
