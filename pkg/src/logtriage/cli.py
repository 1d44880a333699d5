"""The ``triage`` command line.

Subcommands: generate, ingest, preprocess, train, predict, evaluate,
stats, report. Option values resolve with precedence
flags > config file (--config, JSON) > environment (TRIAGE_<OPTION>) >
built-in defaults, and every report echoes its fully resolved
configuration for reproducibility.

Exit codes are a stable contract: 0 success, 1 usage error, 2 data or
validation error, 3 internal error.
"""

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classifiers import ALGORITHM_NAMES, ClassifierSpec, fit_model
from .corpus import CorpusSpec, generate_corpus, load_manifest
from .errors import (
    EXIT_DATA,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    TriageError,
    UsageError,
    ValidationError,
)
from .evaluation import load_documents, run_cv_documents
from .features import Dataset, build_vocabulary, load_vocabulary, save_vocabulary, vectorize
from .ingest import SelectionRules, compute_reduction, scan_dump
from .preprocess import preprocess_bundle
from .report import render_csv, render_json, render_scores_json, render_tables
from .stats import ScoreMatrix, friedman_test, nemenyi_pairwise
from .store import load_model, load_report, save_model, save_report

log = logging.getLogger("triage")

_ENV_PREFIX = "TRIAGE_"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we own exit codes
        raise UsageError(message)


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return config


class Resolver:
    """flags > config file > environment > defaults, with an echo trail."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self.args = args
        self.config = config
        self.echo: dict = {}

    def get(self, key: str, default=None, cast=None):
        value = getattr(self.args, key, None)
        if value is None:
            if key in self.config:
                value = self.config[key]
            else:
                env = os.environ.get(_ENV_PREFIX + key.upper())
                value = env if env is not None else default
        if cast is not None and isinstance(value, str):
            value = cast(value)
        self.echo[key] = value if not isinstance(value, tuple) else list(value)
        return value


def _cast_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _cast_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"expected LO or LO:HI, got {text!r}") from None
    return lo, hi


def _parse_param_value(text: str):
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if "," in text:
        return tuple(int(p) for p in text.split(","))
    for caster in (int, float):
        try:
            return caster(text)
        except ValueError:
            continue
    return text


def _parse_params(items: list[str] | None, scoped: bool) -> dict:
    """KEY=VALUE items; scoped form accepts algo.key=value."""
    out: dict = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        try:
            parsed = _parse_param_value(value)
        except UsageError:
            raise
        if scoped:
            if "." not in key:
                raise UsageError(f"--param expects ALGO.KEY=VALUE, got {item!r}")
            algo, sub = key.split(".", 1)
            out.setdefault(algo, {})[sub] = parsed
        else:
            out[key] = parsed
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(r: Resolver) -> int:
    out_dir = r.get("out")
    spec = CorpusSpec(
        bundles_per_class=r.get("per_class", 10, int),
        services=r.get("services", 3, int),
        noise_lines=r.get("noise_lines", (20, 40), _cast_range),
        signature_strength=r.get("signature_strength", 0.5, float),
        seed=r.get("seed", 0, int),
        line_scale=50 if r.get("jumbo", False, _cast_bool) else 1,
    )
    manifest = generate_corpus(spec, out_dir)
    log.info("generated %d bundles under %s", len(manifest.entries), out_dir)
    print(str(Path(out_dir) / "manifest.jsonl"))
    return EXIT_OK


def cmd_ingest(r: Resolver) -> int:
    root = r.get("root")
    patterns = r.get("pattern") or None
    rules = SelectionRules(tuple(patterns)) if patterns else SelectionRules()
    bundle = scan_dump(root, rules)
    stats = compute_reduction(root, bundle)
    payload = {
        "total_bytes": stats.total_bytes,
        "selected_bytes": stats.selected_bytes,
        "reduction": stats.reduction_rounded,
    }
    stats_out = r.get("stats_out")
    if stats_out:
        with open(stats_out, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
    log.info(
        "selected %d files (%d of %d bytes)",
        len(bundle.files), stats.selected_bytes, stats.total_bytes,
    )
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_preprocess(r: Resolver) -> int:
    root = r.get("root")
    bundle = scan_dump(root)
    doc = preprocess_bundle(bundle)
    line = " ".join(doc.tokens) + "\n"
    out = r.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(line)
        log.info("wrote %d tokens to %s", doc.token_count, out)
    else:
        sys.stdout.write(line)
    return EXIT_OK


def _load_corpus(r: Resolver) -> tuple:
    root = r.get("data") or r.get("root")
    manifest_path = r.get("manifest") or str(Path(root) / "manifest.jsonl")
    r.echo["manifest"] = manifest_path
    entries = load_manifest(manifest_path)
    docs, labels = load_documents(root, entries)
    return root, docs, labels


def cmd_train(r: Resolver) -> int:
    algo = r.get("algo")
    if algo not in ALGORITHM_NAMES:
        raise UsageError(f"--algo must be one of: {', '.join(ALGORITHM_NAMES)}")
    _, docs, labels = _load_corpus(r)
    min_df = r.get("min_df", 2, int)
    vocab = build_vocabulary(docs, min_df=min_df)
    data = Dataset(
        tuple(vectorize(vocab, d) for d in docs), tuple(labels),
        vocab_checksum=vocab.checksum(),
    )
    params = _parse_params(r.get("param"), scoped=False)
    spec = ClassifierSpec(algo, seed=r.get("seed", 0, int), params=params)
    model = fit_model(data, spec)

    model_out = r.get("model_out")
    vocab_out = r.get("vocab_out") or f"{model_out}.vocab"
    save_vocabulary(vocab, vocab_out)
    checksum = save_model(model, model_out)
    log.info("model %s saved to %s (vocabulary: %s)", algo, model_out, vocab_out)
    print(checksum)
    return EXIT_OK


def cmd_predict(r: Resolver) -> int:
    model_path = r.get("model")
    vocab_path = r.get("vocab") or f"{model_path}.vocab"
    model = load_model(model_path)
    vocab = load_vocabulary(vocab_path)
    if model.vocab_checksum and vocab.checksum() != model.vocab_checksum:
        raise ValidationError(
            f"vocabulary {vocab_path} does not match the one the model was trained with"
        )
    root = r.get("root")
    bundle = scan_dump(root)
    doc = preprocess_bundle(bundle)
    label = model.predict([vectorize(vocab, doc)])[0]
    print(json.dumps({"root": str(root), "label": label.value}, sort_keys=True))
    return EXIT_OK


def cmd_evaluate(r: Resolver) -> int:
    root, docs, labels = _load_corpus(r)
    algos_text = r.get("algos", ",".join(ALGORITHM_NAMES))
    algos = [a.strip() for a in algos_text.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHM_NAMES:
            raise UsageError(f"unknown algorithm {a!r} in --algos")
    seed = r.get("seed", 0, int)
    k = r.get("k", 10, int)
    min_df = r.get("min_df", 2, int)
    overrides = _parse_params(r.get("param"), scoped=True)
    unknown = set(overrides) - set(ALGORITHM_NAMES)
    if unknown:
        raise UsageError(f"--param names unknown algorithms: {', '.join(sorted(unknown))}")
    specs = [ClassifierSpec(a, seed=seed, params=overrides.get(a, {})) for a in algos]

    report = run_cv_documents(
        docs, labels, specs, k=k, seed=seed, min_df=min_df,
        config_echo={**r.echo, "algos": algos, "params": {a: s.to_dict()["params"] for a, s in zip(algos, specs)}},
    )

    out_dir = Path(r.get("report_out", "triage-report"))
    out_dir.mkdir(parents=True, exist_ok=True)
    save_report(report, out_dir / "report.json")
    (out_dir / "scores.json").write_text(render_scores_json(report), encoding="utf-8")
    (out_dir / "folds.csv").write_text(render_csv(report), encoding="utf-8")
    for metric, matrix in (("accuracy", report.accuracy_matrix), ("f1", report.f1_matrix)):
        lines = [",".join(report.algorithms)]
        lines += [",".join(repr(float(v)) for v in row) for row in matrix]
        (out_dir / f"folds_{metric}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    tables = render_tables(report)
    (out_dir / "tables.txt").write_text(tables, encoding="utf-8")
    if not r.get("quiet", False):
        sys.stdout.write(tables)
    log.info("report written under %s", out_dir)
    return EXIT_OK


def cmd_stats(r: Resolver) -> int:
    scores_path = r.get("scores")
    try:
        with open(scores_path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = [row for row in reader if row]
    except FileNotFoundError:
        raise TriageError(f"scores file not found: {scores_path}") from None
    if len(rows) < 3:
        raise ValidationError("scores CSV needs a header row and at least two data rows")
    names = [c.strip() for c in rows[0]]
    try:
        values = np.array([[float(c) for c in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"scores CSV has a non-numeric cell: {exc}") from None
    matrix = ScoreMatrix(values, tuple(names))
    fr = friedman_test(matrix)
    ne = nemenyi_pairwise(matrix)

    payload = {
        "treatments": names,
        "friedman": {
            "q_statistic": fr.q_statistic,
            "p_value": fr.p_value,
            "mean_ranks": list(fr.mean_ranks),
            "tie_correction": fr.tie_correction,
            "fully_tied": fr.fully_tied,
        },
        "nemenyi": {
            "p_matrix": [[float(v) for v in row] for row in ne.p_matrix],
            "critical_difference": float(ne.critical_difference),
        },
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    out = r.get("out")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)

    lines = [f"Friedman Q = {fr.q_statistic:.4f}, p = {fr.p_value:.5f}"]
    header = [""] + names
    rows_txt = []
    for i, name in enumerate(names):
        cells = [name]
        for j in range(len(names)):
            p = ne.p_matrix[i][j]
            cells.append(f"{p:.4f}{'*' if i != j and p < 0.05 else ''}")
        rows_txt.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in rows_txt)) for i, h in enumerate(header)]
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows_txt:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    sys.stderr.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_report(r: Resolver) -> int:
    report = load_report(r.get("report"))
    style = r.get("style", "table")
    if style == "json":
        text = render_json(report)
    elif style == "csv":
        text = render_csv(report)
    elif style == "table":
        text = render_tables(report)
    else:
        raise UsageError(f"--style must be json, csv, or table, got {style!r}")
    out = r.get("out")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="triage", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"triage {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p: _Parser):
        p.add_argument("--seed", type=int, default=None, help="global random seed")
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--quiet", action="store_const", const=True, default=None)
        p.add_argument("--verbose", action="store_const", const=True, default=None)

    p = sub.add_parser("generate", help="write a labeled synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", dest="per_class", type=int, default=None)
    p.add_argument("--signature-strength", dest="signature_strength", type=float, default=None)
    p.add_argument("--services", type=int, default=None)
    p.add_argument("--noise-lines", dest="noise_lines", type=_cast_range, default=None)
    p.add_argument("--jumbo", action="store_const", const=True, default=None)
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="select informative files and report size reduction")
    p.add_argument("--root", required=True)
    p.add_argument("--pattern", action="append", default=None)
    p.add_argument("--stats-out", dest="stats_out", default=None)
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("preprocess", help="clean and tokenize one dump into a token line")
    p.add_argument("--root", required=True)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="fit one algorithm on a labeled corpus")
    p.add_argument("--algo", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--manifest", default=None)
    p.add_argument("--model-out", dest="model_out", required=True)
    p.add_argument("--vocab-out", dest="vocab_out", default=None)
    p.add_argument("--min-df", dest="min_df", type=int, default=None)
    p.add_argument("--param", action="append", default=None, help="KEY=VALUE hyperparameter")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify one dump with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", default=None)
    p.add_argument("--root", required=True)
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="stratified k-fold comparison of algorithms")
    p.add_argument("--root", required=True)
    p.add_argument("--manifest", default=None)
    p.add_argument("--algos", default=None, help="comma-separated algorithm names")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--min-df", dest="min_df", type=int, default=None)
    p.add_argument("--report-out", dest="report_out", default=None)
    p.add_argument("--param", action="append", default=None, help="ALGO.KEY=VALUE override")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="Friedman + Nemenyi over a fold-score CSV")
    p.add_argument("--scores", required=True, help="N x K CSV with a treatment header row")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("report", help="re-render a saved comparison report")
    p.add_argument("--report", required=True)
    p.add_argument("--style", default=None, choices=("json", "csv", "table"))
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_report)

    return parser


def _setup_logging(quiet: bool, verbose: bool) -> None:
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    if quiet:
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        config = _load_config_file(getattr(args, "config", None))
        resolver = Resolver(args, config)
        quiet = resolver.get("quiet", False, _cast_bool) or False
        verbose = resolver.get("verbose", False, _cast_bool) or False
        _setup_logging(quiet, verbose)
        return args.func(resolver)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TriageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
