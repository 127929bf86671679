"""Metrics and cross-validated experiment runs.

Evaluation is leakage-free: for every fold, the vocabulary and the IDF
statistics are fit on the training folds only and then applied to the
held-out fold. A grid run produces one result per (content variant,
feature scheme, algorithm) cell; cells that raise are recorded as failed
cells instead of aborting the run.

All randomness derives from the experiment seed: the fold assignment uses
it directly and each fold's training seed is derived from (experiment
seed, algorithm seed, fold index), so repeated runs are identical.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path

import numpy as np

from .corpus import Corpus, stratified_kfold
from .features import (
    RANKING_DOCUMENT_FREQUENCY,
    FeatureScheme,
    Vocabulary,
    apply_scheme,
    build_vocabulary,
    term_frequencies,
)
from .learners import AlgorithmSpec, LabeledDataset, predict_batch, train
from .textprep import ContentVariant, preprocess

_MASK64 = 0xFFFF_FFFF_FFFF_FFFF


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts with security as the positive class."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f_score: float


@dataclass(frozen=True)
class ExperimentSpec:
    """One grid cell: what to featurize, how, and which learner to train."""

    content: ContentVariant
    scheme: FeatureScheme
    algorithm: AlgorithmSpec
    vector_size: int
    k: int
    seed: int

    def __post_init__(self):
        if self.vector_size < 1:
            raise ValueError(f"vector_size must be >= 1, got {self.vector_size}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    fold_metrics: tuple[Metrics, ...]
    mean: Metrics | None
    wall_time_s: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class SweepPoint:
    size: int
    f_score: float | None
    error: str | None = None


def compute_confusion(predicted, truth) -> ConfusionMatrix:
    """Count tp/fp/fn/tn over parallel 0/1 label sequences."""
    predicted = np.asarray(predicted, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if predicted.shape != truth.shape:
        raise ValueError(f"length mismatch: {predicted.shape} vs {truth.shape}")
    if predicted.size == 0:
        raise ValueError("cannot build a confusion matrix from zero samples")
    return ConfusionMatrix(
        tp=int(((predicted == 1) & (truth == 1)).sum()),
        fp=int(((predicted == 1) & (truth == 0)).sum()),
        fn=int(((predicted == 0) & (truth == 1)).sum()),
        tn=int(((predicted == 0) & (truth == 0)).sum()),
    )


def compute_metrics(cm: ConfusionMatrix) -> Metrics:
    """Accuracy, precision, recall and F-score; zero denominators yield 0."""
    total = cm.total
    if total == 0:
        raise ValueError("confusion matrix is empty")
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp > 0 else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else 0.0
    f_score = (
        2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    )
    return Metrics(
        accuracy=(cm.tp + cm.tn) / total,
        precision=precision,
        recall=recall,
        f_score=f_score,
    )


def _mean_metrics(per_fold: list[Metrics]) -> Metrics:
    k = len(per_fold)
    return Metrics(
        accuracy=sum(m.accuracy for m in per_fold) / k,
        precision=sum(m.precision for m in per_fold) / k,
        recall=sum(m.recall for m in per_fold) / k,
        f_score=sum(m.f_score for m in per_fold) / k,
    )


def derive_fold_seed(experiment_seed: int, algorithm_seed: int, fold: int) -> int:
    """Stable per-fold training seed."""
    sequence = np.random.SeedSequence(
        [experiment_seed & _MASK64, algorithm_seed & _MASK64, fold]
    )
    return int(sequence.generate_state(1, np.uint64)[0])


def fold_vocabulary(
    tokens: list[list[str]],
    fold_of: np.ndarray,
    fold: int,
    vector_size: int,
    ranking_policy: str = RANKING_DOCUMENT_FREQUENCY,
) -> Vocabulary:
    """Vocabulary fit on the training folds only (never the held-out fold)."""
    train_docs = [doc for doc, f in zip(tokens, fold_of) if f != fold]
    return build_vocabulary(train_docs, max_size=vector_size, policy=ranking_policy)


def _corpus_tokens(corpus: Corpus, content: ContentVariant, stoplist) -> list[list[str]]:
    return [preprocess(report, content, stoplist) for report in corpus.reports]


def _fold_assignment_array(corpus: Corpus, k: int, seed: int) -> np.ndarray:
    assignment = stratified_kfold(corpus, k, seed)
    return np.array([assignment.fold_of(r.id) for r in corpus.reports], dtype=np.int64)


class _FoldFeatureCache:
    """Per-(content, fold) vocabulary and raw count matrices, shared across schemes."""

    def __init__(self):
        self._store = {}

    def get(self, key, build):
        if key not in self._store:
            self._store[key] = build()
        return self._store[key]


def _fold_counts(tokens, labels, fold_of, fold, vector_size, ranking_policy):
    vocab = fold_vocabulary(tokens, fold_of, fold, vector_size, ranking_policy)
    train_mask = fold_of != fold
    tf_train = np.vstack([term_frequencies(doc, vocab) for doc, m in zip(tokens, train_mask) if m])
    tf_test = np.vstack([term_frequencies(doc, vocab) for doc, m in zip(tokens, train_mask) if not m])
    return vocab, tf_train, tf_test, labels[train_mask], labels[~train_mask]


def _cross_validate_tokens(
    tokens: list[list[str]],
    labels: np.ndarray,
    fold_of: np.ndarray,
    spec: ExperimentSpec,
    ranking_policy: str,
    cache: _FoldFeatureCache | None = None,
) -> ExperimentResult:
    started = time.perf_counter()
    per_fold: list[Metrics] = []
    for fold in range(spec.k):
        try:
            build = partial(
                _fold_counts, tokens, labels, fold_of, fold, spec.vector_size, ranking_policy
            )
            vocab, tf_train, tf_test, y_train, y_test = (
                cache.get((spec.content, fold), build) if cache is not None else build()
            )
            X_train = apply_scheme(tf_train, vocab, spec.scheme)
            X_test = apply_scheme(tf_test, vocab, spec.scheme)
            algorithm = replace(
                spec.algorithm,
                seed=derive_fold_seed(spec.seed, spec.algorithm.seed, fold),
            )
            model = train(algorithm, LabeledDataset(X_train, y_train, spec.scheme))
            predicted, _ = predict_batch(model, X_test)
            per_fold.append(compute_metrics(compute_confusion(predicted, y_test)))
        except Exception as exc:
            try:
                wrapped = type(exc)(f"fold {fold}: {exc}")
            except Exception:
                wrapped = RuntimeError(f"fold {fold}: {exc}")
            raise wrapped from exc
    return ExperimentResult(
        spec=spec,
        fold_metrics=tuple(per_fold),
        mean=_mean_metrics(per_fold),
        wall_time_s=time.perf_counter() - started,
    )


def cross_validate(
    corpus: Corpus,
    spec: ExperimentSpec,
    stoplist=None,
    ranking_policy: str = RANKING_DOCUMENT_FREQUENCY,
) -> ExperimentResult:
    """Stratified k-fold evaluation of one experiment cell.

    Raises on infeasible stratification or degenerate training (with the
    fold index attached); `run_grid` turns such errors into failed cells.
    """
    tokens = _corpus_tokens(corpus, spec.content, stoplist)
    labels = np.array([1 if r.is_security else 0 for r in corpus.reports], dtype=np.int64)
    fold_of = _fold_assignment_array(corpus, spec.k, spec.seed)
    return _cross_validate_tokens(tokens, labels, fold_of, spec, ranking_policy)


def _failed(spec: ExperimentSpec, wall_time_s: float, exc: Exception) -> ExperimentResult:
    return ExperimentResult(
        spec=spec,
        fold_metrics=(),
        mean=None,
        wall_time_s=wall_time_s,
        error=f"{type(exc).__name__}: {exc}",
    )


def _grid_cell_task(args) -> ExperimentResult:
    corpus, spec, stoplist, ranking_policy = args
    started = time.perf_counter()
    try:
        return cross_validate(corpus, spec, stoplist, ranking_policy)
    except Exception as exc:
        return _failed(spec, time.perf_counter() - started, exc)


def run_grid(
    corpus: Corpus,
    contents: list[ContentVariant],
    schemes: list[FeatureScheme],
    algorithms: list[AlgorithmSpec],
    vector_size: int,
    k: int,
    seed: int,
    *,
    jobs: int = 1,
    stoplist=None,
    ranking_policy: str = RANKING_DOCUMENT_FREQUENCY,
) -> list[ExperimentResult]:
    """Evaluate the full (content x scheme x algorithm) grid.

    Results come back in content-major, then scheme, then algorithm order
    regardless of scheduling. Failed cells carry their error message.
    """
    if not contents or not schemes or not algorithms:
        raise ValueError("grid axes must be non-empty")
    specs = [
        ExperimentSpec(
            content=content, scheme=scheme, algorithm=algorithm,
            vector_size=vector_size, k=k, seed=seed,
        )
        for content in contents
        for scheme in schemes
        for algorithm in algorithms
    ]
    if jobs > 1:
        tasks = [(corpus, spec, stoplist, ranking_policy) for spec in specs]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_grid_cell_task, tasks))

    results: list[ExperimentResult] = []
    labels = np.array([1 if r.is_security else 0 for r in corpus.reports], dtype=np.int64)
    tokens_by_content: dict[ContentVariant, list[list[str]]] = {}
    fold_of: np.ndarray | None = None
    fold_error: Exception | None = None
    try:
        fold_of = _fold_assignment_array(corpus, k, seed)
    except Exception as exc:
        fold_error = exc
    cache = _FoldFeatureCache()
    for spec in specs:
        started = time.perf_counter()
        if fold_error is not None:
            results.append(_failed(spec, 0.0, fold_error))
            continue
        try:
            if spec.content not in tokens_by_content:
                tokens_by_content[spec.content] = _corpus_tokens(corpus, spec.content, stoplist)
            results.append(
                _cross_validate_tokens(
                    tokens_by_content[spec.content], labels, fold_of, spec,
                    ranking_policy, cache,
                )
            )
        except Exception as exc:
            results.append(_failed(spec, time.perf_counter() - started, exc))
    return results


def sweep_vector_size(
    corpus: Corpus,
    template: ExperimentSpec,
    sizes: list[int],
    stoplist=None,
    ranking_policy: str = RANKING_DOCUMENT_FREQUENCY,
) -> list[SweepPoint]:
    """Cross-validate the template at each vocabulary size.

    Sizes must be ascending; a failing size yields a gap point rather than
    aborting the sweep.
    """
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(size < 1 for size in sizes):
        raise ValueError("sizes must all be >= 1")
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    tokens = _corpus_tokens(corpus, template.content, stoplist)
    labels = np.array([1 if r.is_security else 0 for r in corpus.reports], dtype=np.int64)
    points: list[SweepPoint] = []
    try:
        fold_of = _fold_assignment_array(corpus, template.k, template.seed)
    except Exception as exc:
        return [SweepPoint(size, None, f"{type(exc).__name__}: {exc}") for size in sizes]
    for size in sizes:
        spec = replace(template, vector_size=size)
        try:
            result = _cross_validate_tokens(tokens, labels, fold_of, spec, ranking_policy)
            points.append(SweepPoint(size, result.mean.f_score))
        except Exception as exc:
            points.append(SweepPoint(size, None, f"{type(exc).__name__}: {exc}"))
    return points


CSV_COLUMNS = (
    "content", "scheme", "algorithm", "vector_size", "k", "seed",
    "accuracy", "precision", "recall", "f_score", "wall_time_s",
)


def _csv_row(result: ExperimentResult) -> str:
    spec = result.spec
    head = [
        spec.content.value, spec.scheme.value, spec.algorithm.kind,
        str(spec.vector_size), str(spec.k), str(spec.seed),
    ]
    if result.ok:
        m = result.mean
        tail = [
            f"{m.accuracy:.6f}", f"{m.precision:.6f}", f"{m.recall:.6f}",
            f"{m.f_score:.6f}", f"{result.wall_time_s:.3f}",
        ]
    else:
        tail = ["", "", "", "", ""]
    return ",".join(head + tail)


def _markdown_tables(results: list[ExperimentResult]) -> str:
    contents: list[ContentVariant] = []
    schemes: list[FeatureScheme] = []
    learners: list[str] = []
    for result in results:
        if result.spec.content not in contents:
            contents.append(result.spec.content)
        if result.spec.scheme not in schemes:
            schemes.append(result.spec.scheme)
        if result.spec.algorithm.kind not in learners:
            learners.append(result.spec.algorithm.kind)
    by_cell = {}
    for result in results:
        key = (result.spec.content, result.spec.scheme, result.spec.algorithm.kind)
        by_cell.setdefault(key, result)

    metric_names = ("accuracy", "precision", "recall", "f_score")
    lines: list[str] = []
    for content in contents:
        lines.append(f"## {content.value}")
        lines.append("")
        header = ["learner"]
        for scheme in schemes:
            header.extend(f"{scheme.value} {name}" for name in metric_names)
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for learner in learners:
            row = [learner]
            for scheme in schemes:
                result = by_cell.get((content, scheme, learner))
                if result is not None and result.ok:
                    m = result.mean
                    row.extend(
                        f"{getattr(m, name):.6f}" for name in metric_names
                    )
                else:
                    row.extend("n/a" for _ in metric_names)
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    failed = [r for r in results if not r.ok]
    if failed:
        lines.append("## Failed cells")
        lines.append("")
        for result in failed:
            spec = result.spec
            lines.append(
                f"- {spec.content.value} / {spec.scheme.value} / "
                f"{spec.algorithm.kind}: {result.error}"
            )
        lines.append("")
    return "\n".join(lines)


def emit_report(results: list[ExperimentResult], fmt: str, path: str | Path) -> None:
    """Write grid results as CSV (one row per cell) or markdown tables.

    Metric values are rendered with six decimal places. Failed cells keep
    their row with empty metric fields in CSV and are listed in a trailing
    section in markdown.
    """
    if not results:
        raise ValueError("no results to report")
    if fmt == "csv":
        text = "\n".join([",".join(CSV_COLUMNS), *(_csv_row(r) for r in results)]) + "\n"
    elif fmt == "markdown":
        text = _markdown_tables(results)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
