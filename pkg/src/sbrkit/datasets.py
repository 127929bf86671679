"""Bundled and generated datasets for demos and verification.

`synthetic_corpus` builds a labeled corpus with a controllable signal.
Security reports receive tokens from a fixed 20-word security lexicon
through per-field insertion slots; each slot fires with a given
probability and repeats its word a configurable number of times.
Non-security reports can carry single-occurrence lexicon mentions as
noise, so presence-only features are noisy while occurrence counts stay
discriminative. Lexicon words are drawn with a mild power-law skew: a few
core terms dominate, as in real security vocabularies.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import BugReport, Corpus, SOURCES

SECURITY_LEXICON = (
    "overflow", "exploit", "injection", "spoofing", "traversal",
    "escalation", "sandbox", "xss", "csrf", "malicious",
    "attacker", "vulnerable", "bypass", "corruption", "overread",
    "underflow", "ransom", "phishing", "backdoor", "cleartext",
)

# (slots, probability, min repeats, max repeats)
SignalSpec = tuple[int, float, int, int]


def _draw_words(rng: np.random.Generator, vocabulary: list[str], low: int, high: int) -> list[str]:
    count = int(rng.integers(low, high + 1))
    return [vocabulary[i] for i in rng.integers(0, len(vocabulary), size=count)]


def _insert_signals(
    rng: np.random.Generator,
    words: list[str],
    signal: SignalSpec,
    lexicon_weights: np.ndarray,
) -> list[str]:
    slots, probability, low, high = signal
    for _ in range(slots):
        if rng.random() < probability:
            term = SECURITY_LEXICON[int(rng.choice(len(lexicon_weights), p=lexicon_weights))]
            for _ in range(int(rng.integers(low, high + 1))):
                words.insert(int(rng.integers(0, len(words) + 1)), term)
    return words


def synthetic_corpus(
    n_reports: int = 1000,
    security_fraction: float = 0.35,
    seed: int = 0,
    background_vocab: int = 500,
    title_background: tuple[int, int] = (3, 6),
    description_background: tuple[int, int] = (8, 20),
    title_signal: SignalSpec = (1, 0.8, 1, 1),
    description_signal: SignalSpec = (3, 0.8, 2, 4),
    noise_signal: SignalSpec = (2, 0.45, 1, 1),
    lexicon_skew: float = 0.6,
    lexicon_size: int | None = None,
) -> Corpus:
    """Deterministically generate a labeled synthetic corpus.

    Signal specs are (slots, probability, min_repeat, max_repeat): each
    slot independently fires with `probability` and inserts one lexicon
    word `repeat` times. `title_signal` and `description_signal` apply to
    security reports, `noise_signal` to non-security descriptions.
    `lexicon_size` restricts signals to the first n lexicon words.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed & 0xFFFF_FFFF_FFFF_FFFF, 0x5B]))
    if lexicon_size is None:
        lexicon_size = len(SECURITY_LEXICON)
    if not 1 <= lexicon_size <= len(SECURITY_LEXICON):
        raise ValueError(f"lexicon_size must be in [1, {len(SECURITY_LEXICON)}]")
    weights = 1.0 / np.arange(1.0, lexicon_size + 1.0) ** lexicon_skew
    weights /= weights.sum()
    background = [f"lib{i:03d}" for i in range(background_vocab)]
    n_security = round(n_reports * security_fraction)
    labels = np.array([1] * n_security + [0] * (n_reports - n_security))
    rng.shuffle(labels)

    reports = []
    for i, label in enumerate(labels):
        title = _draw_words(rng, background, *title_background)
        description = _draw_words(rng, background, *description_background)
        if label == 1:
            title = _insert_signals(rng, title, title_signal, weights)
            description = _insert_signals(rng, description, description_signal, weights)
        else:
            description = _insert_signals(rng, description, noise_signal, weights)
        reports.append(
            BugReport(
                id=f"synth-{i:05d}",
                source=SOURCES[int(rng.integers(0, len(SOURCES)))],
                title=" ".join(title),
                description=" ".join(description),
                label="security" if label == 1 else "non-security",
            )
        )
    return Corpus(tuple(reports))


def delay_fixture_path() -> Path:
    """Path of the bundled time-to-fix fixture corpus.

    The fixture has hand-picked delays: security reports close with a
    median of 49.5 days, non-security ones with a median of 2248.0 days.
    """
    return Path(str(resources.files("sbrkit").joinpath("data/delay_fixture.jsonl")))
