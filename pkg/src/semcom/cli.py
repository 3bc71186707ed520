"""Command-line front end.

One binary, subcommand per task. Flags override values from an optional
JSON config file (``--config``), which in turn overrides the built-in
defaults; the fully resolved configuration of every run is logged to
stderr as a single JSON line. Relative default output paths land in the
directory named by the SEMCOM_DATA_DIR environment variable (current
directory when unset); explicitly given paths are used as-is.

Exit codes: 0 success, 2 usage error, 3 input error, 4 infeasible
optimization.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import experiments
from .channel import ber_theoretical, simulate_bit_errors
from .corpus import (
    build_vocabulary,
    generate_synthetic_corpus,
    load_corpus,
    save_corpus,
    synthetic_base_keywords,
)
from .errors import SemcomError
from .info import bound_gap_trials, gap_sign_counts
from .kb import build_base_kb, load_keywords, save_keywords
from .lm import NGramLanguageModel
from .pipeline import SemanticTransceiver

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INFEASIBLE = 4

_DEFAULTS = {
    "make-corpus": {
        "seed": 7, "n": 1000, "template_set": "football",
        "out": "corpus.txt", "kb_out": None,
    },
    "ingest": {"out": "vocab.csv"},
    "train": {
        "order": 3, "train_frac": 0.8, "m": 4, "beam_width": 8, "seed": 0,
        "out_dir": "model",
    },
    "run": {
        "rho": 0.0, "scheme": "ordered", "snr_db": 6.0, "m": 4,
        "beam_width": 8, "order": 3, "seed": 0, "train_frac": 0.8,
        "eval_frac": 0.2, "out": "results.csv",
    },
    "sweep": {
        "scheme": "ordered", "rho_grid": "0,0.2,0.4,0.6,0.8,1.0",
        "seeds": 10, "snr_db": 6.0, "m": 4, "beam_width": 8, "order": 3,
        "seed": 0, "train_frac": 0.8, "eval_frac": 0.2, "out": "curve.csv",
    },
    "optimize": {
        "tau": "0.5", "scheme": "ordered", "rho_grid": "0,0.2,0.4,0.6,0.8,1.0",
        "snr_db": 6.0, "m": 4, "beam_width": 8, "order": 3, "seed": 0,
        "train_frac": 0.8, "eval_frac": 0.2, "seeds": 10, "bleu_order": 1,
        "out": "optimize.csv",
    },
    "verify-bound": {
        "trials": 1000, "support": 8, "gamma": 0.1, "seed": 0,
        "out": "bound.csv",
    },
    "channel-test": {"snr_db": 6.0, "bits": 1_000_000, "seed": 0},
}


def _data_dir() -> Path:
    return Path(os.environ.get("SEMCOM_DATA_DIR", "."))


def _out_path(value, default_name: str) -> Path:
    if value is None:
        return _data_dir() / default_name
    return Path(value)


def _snr(value) -> float:
    if isinstance(value, str) and value.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    return float(value)


def _float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if str(x).strip() != ""]


def _resolve(args: argparse.Namespace, command: str) -> dict:
    """Merge defaults, config-file values, and explicit flags (flags win)."""
    resolved = dict(_DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            file_values = json.load(fh)
        for key, value in file_values.items():
            if key in resolved:
                resolved[key] = value
            else:
                print(f"warning: ignoring unknown config key {key!r}",
                      file=sys.stderr)
    for key in resolved:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    for key in ("corpus", "kb"):
        if hasattr(args, key):
            resolved[key] = getattr(args, key)
    return resolved


def _log_config(command: str, resolved: dict) -> None:
    shown = {k: (None if v is None else (str(v) if isinstance(v, Path) else v))
             for k, v in sorted(resolved.items())}
    print(f"config {command}: {json.dumps(shown)}", file=sys.stderr)


def _pipeline_config(resolved: dict, scheme: str, rho: float = 0.0,
                     seeds: int = 1) -> experiments.PipelineConfig:
    return experiments.PipelineConfig(
        scheme=scheme,
        rho=rho,
        master_seed=int(resolved["seed"]),
        snr_db=_snr(resolved["snr_db"]),
        lm_order=int(resolved["order"]),
        n_candidates=int(resolved["m"]),
        beam_width=int(resolved["beam_width"]),
        train_frac=float(resolved["train_frac"]),
        eval_frac=float(resolved["eval_frac"]),
        kb_seed_count=seeds,
        tau_bleu_order=int(resolved.get("bleu_order", 1)),
    )


def cmd_make_corpus(args) -> int:
    resolved = _resolve(args, "make-corpus")
    _log_config("make-corpus", resolved)
    corpus = generate_synthetic_corpus(
        seed=int(resolved["seed"]),
        n_sentences=int(resolved["n"]),
        template_set_id=resolved["template_set"],
    )
    out = _out_path(resolved["out"], "corpus.txt")
    save_corpus(corpus, out)
    print(f"wrote {len(corpus)} sentences to {out}")
    if resolved["kb_out"]:
        words = synthetic_base_keywords(resolved["template_set"])
        save_keywords(resolved["kb_out"], words)
        print(f"wrote {len(words)} base keywords to {resolved['kb_out']}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    resolved = _resolve(args, "ingest")
    _log_config("ingest", resolved)
    corpus = load_corpus(resolved["corpus"])
    vocab = build_vocabulary(corpus)
    out = _out_path(resolved["out"], "vocab.csv")
    experiments.write_vocabulary(out, vocab)
    print(
        f"sentences: {len(corpus)}  tokens: {vocab.total_tokens}  "
        f"vocabulary: {len(vocab)}"
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_train(args) -> int:
    resolved = _resolve(args, "train")
    _log_config("train", resolved)
    corpus = load_corpus(resolved["corpus"])
    base_kb = build_base_kb(load_keywords(resolved["kb"]))
    cfg = experiments.PipelineConfig(
        scheme="BASE",
        master_seed=int(resolved["seed"]),
        lm_order=int(resolved["order"]),
        n_candidates=int(resolved["m"]),
        beam_width=int(resolved["beam_width"]),
        train_frac=float(resolved["train_frac"]),
        eval_frac=min(0.999999, 1.0 - float(resolved["train_frac"])),
    )
    train, _ = experiments.split_corpus(corpus, cfg)
    tx = SemanticTransceiver(
        kb=base_kb,
        lm_order=cfg.lm_order,
        n_candidates=cfg.n_candidates,
        beam_width=cfg.beam_width,
        seed=cfg.master_seed,
        cache_training_reconstructions=True,
    ).fit(train)
    out_dir = _out_path(resolved["out_dir"], "model")
    out_dir.mkdir(parents=True, exist_ok=True)
    lm_path = out_dir / "lm.json"
    save_language_model(tx.lm_, lm_path)
    cache_path = out_dir / "train_reconstructions.txt"
    with cache_path.open("w", encoding="utf-8", newline="") as fh:
        for sentence in tx.training_reconstructions_:
            fh.write(sentence.text() + "\n")
    print(f"trained on {len(train)} sentences; wrote {lm_path} and {cache_path}")
    return EXIT_OK


def save_language_model(lm: NGramLanguageModel, path) -> None:
    """Versioned text dump of the count tables."""
    payload = {
        "format": "semcom-ngram-v1",
        "order": lm.order,
        "discount": lm.discount,
        "counts": {
            "".join(ctx): dict(sorted(counts.items()))
            for ctx, (_, counts, _) in sorted(lm._table.items())
        },
    }
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")


def load_language_model(path) -> NGramLanguageModel:
    with Path(path).open("r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != "semcom-ngram-v1":
        raise ValueError(f"{path}: unknown language-model format")
    lm = NGramLanguageModel(order=payload["order"], discount=payload["discount"])
    table = {}
    for key, counts in payload["counts"].items():
        ctx = tuple(key.split("")) if key else ()
        table[ctx] = (sum(counts.values()), dict(counts), len(counts))
    lm._table = table
    lm._ranked = {
        ctx: tuple(
            w for w in sorted(c, key=lambda w: (-c[w], w))
            if w not in ("<s>", "</s>")
        )
        for ctx, (_, c, _) in table.items()
    }
    lm.vocab_ = frozenset(w for w in table[()][1] if w not in ("<s>", "</s>"))
    lm.events_ = tuple(sorted(table[()][1]))
    lm.n_sentences_ = table[()][1].get("</s>", 0)
    return lm


def cmd_run(args) -> int:
    resolved = _resolve(args, "run")
    _log_config("run", resolved)
    corpus = load_corpus(resolved["corpus"])
    base_kb = build_base_kb(load_keywords(resolved["kb"]))
    cfg = _pipeline_config(
        resolved, scheme=str(resolved["scheme"]).upper(),
        rho=float(resolved["rho"]),
    )
    results = experiments.run_pipeline(corpus, base_kb, cfg)
    out = _out_path(resolved["out"], "results.csv")
    experiments.write_sentence_results(out, results)
    print(
        f"evaluated {len(results)} sentences: "
        f"mean_bleu_1={sum(r.bleu_scores[0] for r in results) / len(results):.4f} "
        f"w_bar={experiments.avg_words(results):.4f}"
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    resolved = _resolve(args, "sweep")
    _log_config("sweep", resolved)
    corpus = load_corpus(resolved["corpus"])
    base_kb = build_base_kb(load_keywords(resolved["kb"]))
    scheme = str(resolved["scheme"]).upper()
    cfg = _pipeline_config(resolved, scheme=scheme,
                           seeds=int(resolved["seeds"]))
    points = experiments.sweep_rho(
        corpus, base_kb, scheme, _float_list(resolved["rho_grid"]), cfg
    )
    out = _out_path(resolved["out"], "curve.csv")
    experiments.write_curve_points(out, points)
    print(f"wrote {len(points)} curve points to {out}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    resolved = _resolve(args, "optimize")
    _log_config("optimize", resolved)
    corpus = load_corpus(resolved["corpus"])
    base_kb = build_base_kb(load_keywords(resolved["kb"]))
    scheme = str(resolved["scheme"]).upper()
    cfg = _pipeline_config(resolved, scheme=scheme,
                           seeds=int(resolved["seeds"]))
    grid = _float_list(resolved["rho_grid"])
    rows = [
        experiments.min_words_for_tau(corpus, base_kb, scheme, tau, cfg, grid)
        for tau in _float_list(resolved["tau"])
    ]
    out = _out_path(resolved["out"], "optimize.csv")
    experiments.write_optimization_results(out, rows)
    for row in rows:
        star = "none" if row.rho_star is None else f"{row.rho_star:g}"
        print(
            f"tau={row.tau:g} rho_star={star} w_bar={row.w_bar:.4f} "
            f"feasible={str(row.feasible).lower()} "
            f"satisfaction_rate={row.satisfaction_rate:.4f}"
        )
    print(f"wrote {out}")
    if any(not row.feasible for row in rows):
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    resolved = _resolve(args, "verify-bound")
    _log_config("verify-bound", resolved)
    reports = bound_gap_trials(
        trials=int(resolved["trials"]),
        support_size=int(resolved["support"]),
        gamma=float(resolved["gamma"]),
        seed=int(resolved["seed"]),
    )
    out = _out_path(resolved["out"], "bound.csv")
    experiments.write_bound_reports(out, reports)
    signs = gap_sign_counts(reports)
    print(
        f"gap signs over {len(reports)} trials: "
        f"negative={signs['negative']} zero={signs['zero']} "
        f"positive={signs['positive']}"
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_channel_test(args) -> int:
    resolved = _resolve(args, "channel-test")
    _log_config("channel-test", resolved)
    snr_db = _snr(resolved["snr_db"])
    empirical = simulate_bit_errors(
        snr_db, int(resolved["bits"]), seed=int(resolved["seed"])
    )
    theoretical = ber_theoretical(snr_db)
    rel = (abs(empirical - theoretical) / theoretical
           if theoretical > 0 else 0.0)
    print(f"empirical_ber: {empirical:.6e}")
    print(f"theoretical_ber: {theoretical:.6e}")
    print(f"relative_difference: {rel:.6f}")
    return EXIT_OK


def _add_common(sub, *names):
    sub.add_argument("--config", help="JSON config file; flags override it")
    if "snr" in names:
        sub.add_argument("--snr-db", dest="snr_db",
                         help="channel SNR in dB, or 'inf' (default 6)")
    if "gen" in names:
        sub.add_argument("--m", type=int, dest="m",
                         help="candidate sentences per reconstruction (default 4)")
        sub.add_argument("--beam-width", type=int, dest="beam_width",
                         help="beam width of the gap filler (default 8)")
        sub.add_argument("--order", type=int,
                         help="language-model order (default 3)")
    if "seed" in names:
        sub.add_argument("--seed", type=int, help="master seed (default 0)")
    if "split" in names:
        sub.add_argument("--train-frac", type=float, dest="train_frac",
                         help="training fraction of the corpus (default 0.8)")
        sub.add_argument("--eval-frac", type=float, dest="eval_frac",
                         help="evaluation fraction of the corpus (default 0.2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semcom",
        description="Keyword-based semantic communication simulator",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser(
        "make-corpus", help="generate a synthetic commentary corpus"
    )
    sub.add_argument("--seed", type=int, help="generator seed (default 7)")
    sub.add_argument("--n", type=int, help="number of sentences (default 1000)")
    sub.add_argument("--template-set", dest="template_set",
                     help="bundled template family (default football)")
    sub.add_argument("--out", help="corpus output path (default corpus.txt)")
    sub.add_argument("--kb-out", dest="kb_out",
                     help="also write the family's base keywords to this path")
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.set_defaults(func=cmd_make_corpus)

    sub = subparsers.add_parser(
        "ingest", help="tokenize a corpus and report vocabulary statistics"
    )
    sub.add_argument("corpus", help="corpus file, one sentence per line")
    sub.add_argument("--out", help="vocabulary CSV path (default vocab.csv)")
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.set_defaults(func=cmd_ingest)

    sub = subparsers.add_parser(
        "train",
        help="fit the language model and cache transmitter-side "
             "reconstructions of the training split",
    )
    sub.add_argument("corpus")
    sub.add_argument("--kb", required=True, help="keyword file (JSON array)")
    sub.add_argument("--out-dir", dest="out_dir",
                     help="output directory (default model)")
    sub.add_argument("--train-frac", type=float, dest="train_frac",
                     help="training fraction of the corpus (default 0.8)")
    _add_common(sub, "gen", "seed")
    sub.set_defaults(func=cmd_train)

    sub = subparsers.add_parser(
        "run", help="single end-to-end evaluation, per-sentence CSV"
    )
    sub.add_argument("corpus")
    sub.add_argument("--kb", required=True, help="keyword file (JSON array)")
    sub.add_argument("--rho", type=float,
                     help="vocabulary fraction added to the KB (default 0)")
    sub.add_argument("--scheme",
                     choices=["base", "random", "ordered", "full"],
                     help="augmentation scheme (default ordered)")
    sub.add_argument("--out", help="per-sentence CSV path (default results.csv)")
    _add_common(sub, "snr", "gen", "seed", "split")
    sub.set_defaults(func=cmd_run)

    sub = subparsers.add_parser(
        "sweep", help="BLEU and words-per-sentence curves over a rho grid"
    )
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--kb", required=True)
    sub.add_argument("--scheme", choices=["random", "ordered"],
                     help="augmentation scheme (default ordered)")
    sub.add_argument("--rho-grid", dest="rho_grid",
                     help="comma-separated rho values "
                          "(default 0,0.2,0.4,0.6,0.8,1.0)")
    sub.add_argument("--seeds", type=int,
                     help="KB seeds averaged for RANDOM (default 10)")
    sub.add_argument("--out", help="curve CSV path (default curve.csv)")
    _add_common(sub, "snr", "gen", "seed", "split")
    sub.set_defaults(func=cmd_sweep)

    sub = subparsers.add_parser(
        "optimize",
        help="smallest rho meeting a per-sentence BLEU threshold",
    )
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--kb", required=True)
    sub.add_argument("--tau",
                     help="accuracy threshold(s), comma-separated (default 0.5)")
    sub.add_argument("--scheme", choices=["random", "ordered"],
                     help="augmentation scheme (default ordered)")
    sub.add_argument("--rho-grid", dest="rho_grid",
                     help="comma-separated rho values "
                          "(default 0,0.2,0.4,0.6,0.8,1.0)")
    sub.add_argument("--seeds", type=int,
                     help="KB seeds averaged for RANDOM (default 10)")
    sub.add_argument("--bleu-order", type=int, dest="bleu_order",
                     help="BLEU order used in the constraint (default 1)")
    sub.add_argument("--out", help="optimization CSV path (default optimize.csv)")
    _add_common(sub, "snr", "gen", "seed", "split")
    sub.set_defaults(func=cmd_optimize)

    sub = subparsers.add_parser(
        "verify-bound",
        help="sample random distribution triples and report the "
             "distortion/bound gap decomposition",
    )
    sub.add_argument("--trials", type=int, help="number of trials (default 1000)")
    sub.add_argument("--support", type=int, help="support size (default 8)")
    sub.add_argument("--gamma", type=float,
                     help="mutual-information weight (default 0.1)")
    sub.add_argument("--out", help="trial CSV path (default bound.csv)")
    _add_common(sub, "seed")
    sub.set_defaults(func=cmd_verify_bound)

    sub = subparsers.add_parser(
        "channel-test",
        help="Monte-Carlo bit error rate against the closed form",
    )
    sub.add_argument("--bits", type=int, help="bits to simulate (default 1e6)")
    _add_common(sub, "snr", "seed")
    sub.set_defaults(func=cmd_channel_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SemcomError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
