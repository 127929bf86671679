"""Vocabulary construction and feature encoding.

Three per-document encodings over a shared vocabulary:

* BF  - binary presence: 1 iff the term occurs in the document.
* TF  - raw occurrence count of the term in the document.
* TF-IDF - count scaled by ln(|D| / N(term)), where N(term) is the number
  of corpus documents containing the term and |D| the corpus size.

Also provides the 7x7 heatmap encoding of a document (its 49 highest
TF-IDF terms placed row-major, log-scaled and Gaussian-smoothed) plus a
PGM renderer and a CSV feature-matrix export.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np

HEATMAP_SIDE = 7
HEATMAP_CELLS = HEATMAP_SIDE * HEATMAP_SIDE

RANKING_DOCUMENT_FREQUENCY = "document-frequency"
RANKING_CORPUS_TFIDF = "corpus-tfidf"
RANKING_POLICIES = (RANKING_DOCUMENT_FREQUENCY, RANKING_CORPUS_TFIDF)

# Kernel cutoff for the Gaussian blur, in standard deviations.
_BLUR_TRUNCATE = 4.0


class FeatureScheme(str, Enum):
    BF = "bf"
    TF = "tf"
    TFIDF = "tfidf"


def parse_scheme(name: str) -> FeatureScheme:
    try:
        return FeatureScheme(name.strip().lower().replace("-", ""))
    except ValueError:
        raise ValueError(f"unknown feature scheme {name!r}") from None


@dataclass(frozen=True)
class Vocabulary:
    """Ordered term list with document frequencies.

    Terms are ordered by descending ranking score with lexicographic
    ascending tie-breaks, so truncating to the first n terms yields the
    size-n vocabulary under the same policy.
    """

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    doc_count: int
    ranking_policy: str = RANKING_DOCUMENT_FREQUENCY

    def __post_init__(self):
        if self.ranking_policy not in RANKING_POLICIES:
            raise ValueError(f"unknown ranking policy {self.ranking_policy!r}")
        if len(self.terms) != len(self.doc_freq):
            raise ValueError("terms and doc_freq lengths differ")
        for n in self.doc_freq:
            if not 1 <= n <= self.doc_count:
                raise ValueError("document frequency outside [1, doc_count]")

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def index(self) -> dict[str, int]:
        return {term: i for i, term in enumerate(self.terms)}

    @cached_property
    def idf(self) -> np.ndarray:
        """Per-term ln(|D| / N(term)) weights, aligned with `terms`."""
        freq = np.asarray(self.doc_freq, dtype=np.float64)
        return np.log(self.doc_count / freq)

    def truncated(self, max_size: int) -> "Vocabulary":
        """The vocabulary restricted to its top `max_size` terms."""
        if max_size >= len(self.terms):
            return self
        return Vocabulary(
            terms=self.terms[:max_size],
            doc_freq=self.doc_freq[:max_size],
            doc_count=self.doc_count,
            ranking_policy=self.ranking_policy,
        )


@dataclass(frozen=True)
class FeatureVector:
    scheme: FeatureScheme
    values: np.ndarray
    vocab: Vocabulary


@dataclass(frozen=True)
class Heatmap:
    """7x7 encoding of a document's highest-TF-IDF terms."""

    grid: np.ndarray
    terms: tuple[tuple[str, float], ...]
    sigma: float


def build_vocabulary(
    docs: list[list[str]],
    max_size: int | None = None,
    policy: str = RANKING_DOCUMENT_FREQUENCY,
) -> Vocabulary:
    """Count document frequencies and keep the top-ranked terms.

    Ranking score is the document frequency itself, or (corpus-tfidf
    policy) the maximum per-document TF-IDF the term attains anywhere in
    the corpus. Ties break lexicographically ascending. `max_size=None`
    keeps every distinct term.
    """
    if not docs:
        raise ValueError("cannot build a vocabulary from an empty document list")
    if max_size is not None and max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    if policy not in RANKING_POLICIES:
        raise ValueError(f"unknown ranking policy {policy!r}")

    doc_count = len(docs)
    freq: Counter[str] = Counter()
    for doc in docs:
        freq.update(set(doc))

    if policy == RANKING_DOCUMENT_FREQUENCY:
        score = freq
    else:
        max_count: Counter[str] = Counter()
        for doc in docs:
            for term, count in Counter(doc).items():
                if count > max_count[term]:
                    max_count[term] = count
        score = {
            term: max_count[term] * math.log(doc_count / freq[term]) for term in freq
        }

    ranked = sorted(freq, key=lambda term: (-score[term], term))
    if max_size is not None:
        ranked = ranked[:max_size]
    return Vocabulary(
        terms=tuple(ranked),
        doc_freq=tuple(freq[term] for term in ranked),
        doc_count=doc_count,
        ranking_policy=policy,
    )


def term_frequencies(tokens: list[str], vocab: Vocabulary) -> np.ndarray:
    """Raw in-vocabulary term counts for one document."""
    values = np.zeros(len(vocab), dtype=np.float64)
    index = vocab.index
    for term, count in Counter(tokens).items():
        pos = index.get(term)
        if pos is not None:
            values[pos] = count
    return values


def apply_scheme(tf_values: np.ndarray, vocab: Vocabulary, scheme: FeatureScheme) -> np.ndarray:
    """Derive a BF/TF/TF-IDF vector from raw term counts."""
    if scheme is FeatureScheme.BF:
        return (tf_values > 0).astype(np.float64)
    if scheme is FeatureScheme.TF:
        return tf_values.copy()
    return tf_values * vocab.idf


def vectorize(tokens: list[str], vocab: Vocabulary, scheme: FeatureScheme) -> FeatureVector:
    """Encode one document under the given scheme; out-of-vocabulary terms are ignored."""
    tf_values = term_frequencies(tokens, vocab)
    return FeatureVector(scheme=scheme, values=apply_scheme(tf_values, vocab, scheme), vocab=vocab)


def gaussian_blur(grid: np.ndarray, sigma: float) -> np.ndarray:
    """Separable discrete Gaussian blur with reflective boundary handling."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    radius = int(_BLUR_TRUNCATE * sigma + 0.5)
    if radius == 0:
        return grid.astype(np.float64, copy=True)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * offsets**2 / (sigma * sigma))
    kernel /= kernel.sum()
    padded = np.pad(grid.astype(np.float64), radius, mode="symmetric")
    rows = np.apply_along_axis(np.convolve, 1, padded, kernel, "valid")
    return np.apply_along_axis(np.convolve, 0, rows, kernel, "valid")


def encode_heatmap(tokens: list[str], vocab: Vocabulary, sigma: float = 1.0) -> Heatmap:
    """Encode a document as a smoothed 7x7 grid of its top TF-IDF terms.

    The document's in-vocabulary terms are ranked by TF-IDF (descending,
    ties lexicographic ascending); the top 49 fill the grid row-major,
    zero-padded when fewer. Cells are mapped through ln(1+v) and blurred.
    """
    tf_values = term_frequencies(tokens, vocab)
    tfidf = tf_values * vocab.idf
    scored = [(vocab.terms[i], tfidf[i]) for i in np.nonzero(tfidf > 0)[0]]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    top = scored[:HEATMAP_CELLS]

    grid = np.zeros(HEATMAP_CELLS, dtype=np.float64)
    grid[: len(top)] = [value for _, value in top]
    grid = np.log1p(grid.reshape(HEATMAP_SIDE, HEATMAP_SIDE))
    return Heatmap(
        grid=gaussian_blur(grid, sigma),
        terms=tuple((term, float(value)) for term, value in top),
        sigma=sigma,
    )


def render_heatmap(heatmap: Heatmap, path: str | Path, zoom: int = 1) -> None:
    """Write a heatmap as an 8-bit binary PGM (P5) image.

    Cell intensities are rescaled linearly over the grid's min-max range
    (an all-equal grid renders black); each cell becomes a zoom x zoom
    pixel block.
    """
    if zoom < 1:
        raise ValueError(f"zoom must be >= 1, got {zoom}")
    grid = heatmap.grid
    low = float(grid.min())
    high = float(grid.max())
    if high > low:
        scaled = np.rint((grid - low) / (high - low) * 255.0)
    else:
        scaled = np.zeros_like(grid)
    pixels = np.kron(scaled, np.ones((zoom, zoom))).astype(np.uint8)
    height, width = pixels.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(pixels.tobytes())


def export_feature_matrix(
    path: str | Path,
    vocab: Vocabulary,
    matrix: np.ndarray,
    labels: list[str],
) -> None:
    """Write a feature matrix as CSV: one column per term plus a trailing label."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[1] != len(vocab):
        raise ValueError("matrix shape does not match the vocabulary")
    if matrix.shape[0] != len(labels):
        raise ValueError("row count does not match the label count")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join([*vocab.terms, "label"]) + "\n")
        for row, label in zip(matrix, labels):
            handle.write(",".join(f"{value:g}" for value in row) + f",{label}\n")
