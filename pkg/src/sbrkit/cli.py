"""Command-line front end.

Subcommands: ingest, stats, evaluate, sweep, heatmap, delays. Experiment
runs are configured by a flat key/value file (``key = value`` per line,
'#' comments) plus command-line overrides; a single seed controls all
randomness. Exit codes: 0 success, 1 usage/config error, 2 data error,
3 I/O error.

Every command operates on the curated view of its input corpus (curation
is idempotent, so feeding an already-ingested file changes nothing).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluation
from .corpus import Corpus, CorpusError, UnknownReportError, curate, delay_analysis, load_corpus, save_corpus
from .features import FeatureScheme, build_vocabulary, encode_heatmap, parse_scheme, render_heatmap
from .learners import KIND_DEFAULTS, KINDS, AlgorithmSpec
from .textprep import ContentVariant, load_stoplist, parse_content_variant, preprocess

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

SEED_ENV_VAR = "SBR_SEED"


class ConfigError(Exception):
    """A config file or override is invalid."""


@dataclass
class RunConfig:
    corpus: Path
    contents: list[ContentVariant]
    schemes: list[FeatureScheme]
    algorithms: list[AlgorithmSpec]
    vector_size: int
    folds: int
    seed: int
    out: Path
    stoplist: Path | None
    jobs: int
    sizes: list[int]


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` config document."""
    values: dict[str, str] = {}
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"line {line_number}: expected 'key = value', got {text!r}")
        key, _, value = text.partition("=")
        key = key.strip()
        if key in values:
            raise ConfigError(f"line {line_number}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def _parse_int(raw: str, field_name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{field_name}: expected an integer, got {raw!r}") from None


def _split_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def _coerce_param(raw: str):
    lowered = raw.lower()
    if lowered == "none":
        return None
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


_PLAIN_KEYS = {
    "corpus", "content", "scheme", "algo", "vector_size", "folds",
    "seed", "out", "stoplist", "jobs", "sizes",
}


def build_run_config(values: dict[str, str], overrides: dict[str, str | None]) -> RunConfig:
    """Merge config-file values with CLI overrides and materialize them."""
    merged = dict(values)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value

    algo_params: dict[str, dict[str, object]] = {}
    for key in list(merged):
        if "." in key:
            kind, _, param = key.partition(".")
            if kind not in KINDS:
                raise ConfigError(f"{key}: unknown algorithm kind {kind!r}")
            if param not in KIND_DEFAULTS[kind]:
                raise ConfigError(f"{key}: unknown hyperparameter {param!r} for {kind}")
            algo_params.setdefault(kind, {})[param] = _coerce_param(merged.pop(key))
        elif key not in _PLAIN_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    if "corpus" not in merged:
        raise ConfigError("corpus: missing (set it in the config file or pass --corpus)")

    try:
        contents = [parse_content_variant(name) for name in _split_list(merged.get("content", "both"))]
    except ValueError as exc:
        raise ConfigError(f"content: {exc}") from None
    try:
        schemes = [parse_scheme(name) for name in _split_list(merged.get("scheme", "bf,tf,tfidf"))]
    except ValueError as exc:
        raise ConfigError(f"scheme: {exc}") from None

    seed = merged.get("seed", os.environ.get(SEED_ENV_VAR, "0"))
    seed_value = _parse_int(seed, "seed")

    algorithms = []
    for kind in _split_list(merged.get("algo", "")):
        try:
            algorithms.append(AlgorithmSpec(kind, algo_params.get(kind, {})))
        except ValueError as exc:
            raise ConfigError(f"algo: {exc}") from None
    if not algorithms:
        raise ConfigError("algo: at least one algorithm kind is required")

    sizes = [_parse_int(raw, "sizes") for raw in _split_list(merged.get("sizes", ""))]

    return RunConfig(
        corpus=Path(merged["corpus"]),
        contents=contents,
        schemes=schemes,
        algorithms=algorithms,
        vector_size=_parse_int(merged.get("vector_size", "100"), "vector_size"),
        folds=_parse_int(merged.get("folds", "5"), "folds"),
        seed=seed_value,
        out=Path(merged.get("out", ".")),
        stoplist=Path(merged["stoplist"]) if merged.get("stoplist") else None,
        jobs=_parse_int(merged.get("jobs", "1"), "jobs"),
        sizes=sizes,
    )


def _load_curated(path: str | Path) -> tuple[Corpus, corpus_mod.CurationReport]:
    return curate(load_corpus(path))


def _stoplist_or_default(path: Path | None):
    return load_stoplist(path) if path is not None else None


def cmd_ingest(args) -> int:
    loaded = load_corpus(args.input)
    curated, report = curate(loaded)
    save_corpus(curated, args.output)
    print(f"{report.loaded} loaded, {report.dropped} dropped, {report.repaired} repaired, "
          f"{report.kept} kept")
    print(f"summary: loaded={report.loaded} dropped={report.dropped} "
          f"repaired={report.repaired} kept={report.kept}")
    return EXIT_OK


def cmd_stats(args) -> int:
    curated, _ = _load_curated(args.corpus)
    rows = [("source", "security", "non-security", "total")]
    totals = curated.label_counts()
    for source, counts in curated.provenance.items():
        sec = counts[corpus_mod.LABEL_SECURITY]
        non = counts[corpus_mod.LABEL_NON_SECURITY]
        rows.append((source, str(sec), str(non), str(sec + non)))
    rows.append((
        "all",
        str(totals[corpus_mod.LABEL_SECURITY]),
        str(totals[corpus_mod.LABEL_NON_SECURITY]),
        str(len(curated)),
    ))
    widths = [max(len(row[col]) for row in rows) for col in range(4)]
    for row in rows:
        print("  ".join(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                        for i, cell in enumerate(row)))
    return EXIT_OK


def _evaluate_overrides(args) -> dict[str, str | None]:
    return {
        "corpus": args.corpus,
        "content": args.content,
        "scheme": args.scheme,
        "algo": args.algo,
        "vector_size": args.vector_size,
        "folds": args.folds,
        "seed": args.seed,
        "out": args.out,
        "stoplist": args.stoplist,
        "jobs": args.jobs,
        "sizes": getattr(args, "sizes", None),
    }


def cmd_evaluate(args) -> int:
    config = build_run_config(parse_config_file(args.config), _evaluate_overrides(args))
    curated, _ = _load_curated(config.corpus)
    results = evaluation.run_grid(
        curated,
        config.contents,
        config.schemes,
        config.algorithms,
        vector_size=config.vector_size,
        k=config.folds,
        seed=config.seed,
        jobs=config.jobs,
        stoplist=_stoplist_or_default(config.stoplist),
    )
    config.out.mkdir(parents=True, exist_ok=True)
    csv_path = config.out / "results.csv"
    md_path = config.out / "results.md"
    evaluation.emit_report(results, "csv", csv_path)
    evaluation.emit_report(results, "markdown", md_path)
    failed = [r for r in results if not r.ok]
    print(f"{len(results)} cells evaluated, {len(failed)} failed")
    for result in failed:
        spec = result.spec
        print(f"failed: {spec.content.value}/{spec.scheme.value}/{spec.algorithm.kind}: "
              f"{result.error}", file=sys.stderr)
    print(f"wrote {csv_path}")
    print(f"wrote {md_path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = build_run_config(parse_config_file(args.config), _evaluate_overrides(args))
    if not config.sizes:
        raise ConfigError("sizes: a sweep needs a non-empty size list")
    if len(config.contents) != 1 or len(config.schemes) != 1 or len(config.algorithms) != 1:
        raise ConfigError("a sweep requires exactly one content, scheme and algo")
    curated, _ = _load_curated(config.corpus)
    template = evaluation.ExperimentSpec(
        content=config.contents[0],
        scheme=config.schemes[0],
        algorithm=config.algorithms[0],
        vector_size=max(config.sizes),
        k=config.folds,
        seed=config.seed,
    )
    points = evaluation.sweep_vector_size(
        curated, template, config.sizes, stoplist=_stoplist_or_default(config.stoplist)
    )
    config.out.mkdir(parents=True, exist_ok=True)
    out_path = config.out / "sweep.csv"
    with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("size,f_score\n")
        for point in points:
            value = f"{point.f_score:.6f}" if point.f_score is not None else ""
            handle.write(f"{point.size},{value}\n")
    for point in points:
        if point.error:
            print(f"failed: size {point.size}: {point.error}", file=sys.stderr)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_heatmap(args) -> int:
    curated, _ = _load_curated(args.corpus)
    report = curated.by_id.get(args.report_id)
    if report is None:
        raise UnknownReportError(f"no report with id {args.report_id!r}")
    variant = parse_content_variant(args.content)
    stoplist = _stoplist_or_default(Path(args.stoplist) if args.stoplist else None)
    docs = [preprocess(r, variant, stoplist) for r in curated.reports]
    vocab = build_vocabulary(docs, max_size=args.vector_size)
    tokens = preprocess(report, variant, stoplist)
    heatmap = encode_heatmap(tokens, vocab, sigma=args.sigma)
    render_heatmap(heatmap, args.output, zoom=args.zoom)
    print(f"wrote {args.output}")
    return EXIT_OK


def _format_days(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.1f}"


def cmd_delays(args) -> int:
    curated, _ = _load_curated(args.corpus)
    stats = delay_analysis(curated)
    print("class         count  median_days  quartile1_days  quartile3_days")
    for name, cls in (("security", stats.security), ("non-security", stats.non_security)):
        if cls is None:
            print(f"{name:<13} {'n/a':>5}  {'n/a':>11}  {'n/a':>14}  {'n/a':>14}")
        else:
            print(f"{name:<13} {cls.count:>5}  {_format_days(cls.median_days):>11}  "
                  f"{_format_days(cls.quartile1_days):>14}  {_format_days(cls.quartile3_days):>14}")
    return EXIT_OK


def _add_run_flags(parser: argparse.ArgumentParser, with_sizes: bool) -> None:
    parser.add_argument("config", help="flat key = value config file")
    parser.add_argument("--corpus", help="corpus JSON-lines path")
    parser.add_argument("--content", help="comma list of title|description|both")
    parser.add_argument("--scheme", help="comma list of bf|tf|tfidf")
    parser.add_argument("--algo", help=f"comma list of algorithm kinds {KINDS}")
    parser.add_argument("--vector-size", dest="vector_size", help="vocabulary size")
    parser.add_argument("--folds", help="cross-validation fold count")
    parser.add_argument("--seed", help=f"experiment seed (falls back to ${SEED_ENV_VAR})")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--stoplist", help="stop-word file overriding the bundled list")
    parser.add_argument("--jobs", help="max parallel grid cells")
    if with_sizes:
        parser.add_argument("--sizes", help="comma list of ascending vocabulary sizes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbrkit",
        description="Security-bug-report classification experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, curate and re-serialize a corpus")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("stats", help="per-source provenance table")
    p.add_argument("corpus")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("evaluate", help="run an experiment grid from a config file")
    _add_run_flags(p, with_sizes=False)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("sweep", help="cross-validate over a list of vocabulary sizes")
    _add_run_flags(p, with_sizes=True)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("heatmap", help="render a report's TF-IDF heatmap as PGM")
    p.add_argument("corpus")
    p.add_argument("report_id")
    p.add_argument("output")
    p.add_argument("--zoom", type=int, default=10, help="pixels per heatmap cell")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian smoothing width")
    p.add_argument("--content", default="both", help="title|description|both")
    p.add_argument("--vector-size", dest="vector_size", type=int, default=None,
                   help="vocabulary size (default: all terms)")
    p.add_argument("--stoplist", default=None)
    p.set_defaults(handler=cmd_heatmap)

    p = sub.add_parser("delays", help="per-class time-to-fix statistics")
    p.add_argument("corpus")
    p.set_defaults(handler=cmd_delays)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.handler(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
