"""Command-line front end.

    crosseval eval --scores s.tsv --manifest m.csv --mode matrix --out out/
    crosseval pool --matrix out/matrix.json --out pooled/
    crosseval simulate --config fig1.cfg --seed 7 --out sim/
    crosseval report --matrix out/matrix.json --out figs/

Exit status is 0 on success, 1 on validation errors and 2 on I/O errors.
Diagnostics go to stderr; stdout only lists the files written.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import crosstest, figures, ingest, report, simulate
from .errors import ValidationError

log = logging.getLogger("crosseval")

MATRIX_FILES = {
    "matrix_csv": "matrix.csv",
    "thresholds_csv": "thresholds.csv",
    "matrix_json": "matrix.json",
    "heatmap_svg": "heatmap.svg",
    "pooled_md": "pooled.md",
}


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    out_dir: Path
    scores_path: Path | None = None
    manifest_path: Path | None = None
    matrix_path: Path | None = None
    config_path: Path | None = None
    mode: str = "matrix"
    invert_scores: bool = False
    weights: dict[str, float] = field(default_factory=dict)
    seed: int | None = None
    parallelism: int = 1
    force: bool = False


def parse_weights(text: str | None) -> dict[str, float]:
    """``"a=0.1,b=1"`` -> ``{"a": 0.1, "b": 1.0}``."""
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        sid, sep, value = item.partition("=")
        try:
            if not sep or not sid.strip():
                raise ValueError
            out[sid.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad weight {item!r}; expected subset_id=fraction") from None
        if not 0.0 < out[sid.strip()] <= 1.0:
            raise UsageError(f"weight for {sid.strip()!r} must lie in (0, 1]")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crosseval", description="Bona fide x spoof cross-testing of detector score files.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--out", dest="out_dir", type=Path, required=True, help="output directory")
        p.add_argument("--force", action="store_true", help="overwrite files in a non-empty output directory")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="PRNG seed (default 0)")

    p = sub.add_parser("eval", help="evaluate a score file against a manifest")
    p.add_argument("--scores", dest="scores_path", type=Path, required=True)
    p.add_argument("--manifest", dest="manifest_path", type=Path, required=True)
    p.add_argument("--mode", choices=["matrix", "spoof-cross", "combined"], default="matrix")
    p.add_argument("--invert-scores", action="store_true", help="negate scores (for detectors where higher means spoof)")
    p.add_argument("--weights", type=parse_weights, default={}, help="combined mode: subset_id=fraction,...")
    p.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    common(p)

    p = sub.add_parser("pool", help="recompute the pooled summary from matrix.json")
    p.add_argument("--matrix", dest="matrix_path", type=Path, required=True)
    common(p, seed=False)

    p = sub.add_parser("simulate", help="generate Gaussian score subsets and run the drift experiment")
    p.add_argument("--config", dest="config_path", type=Path, default=None, help="simulation config (default: bundled)")
    common(p)

    p = sub.add_parser("report", help="render all report files and figures from matrix.json")
    p.add_argument("--matrix", dest="matrix_path", type=Path, required=True)
    common(p, seed=False)
    return parser


def _prepare_out(cfg: RunConfig):
    out = cfg.out_dir
    if out.exists() and any(out.iterdir()) and not cfg.force:
        raise UsageError(f"output directory {out} is not empty; pass --force to overwrite")
    out.mkdir(parents=True, exist_ok=True)


def _write(cfg: RunConfig, name: str, text: str):
    path = cfg.out_dir / name
    path.write_bytes(text.encode("utf-8"))
    print(f"wrote {path}")


def _metadata(cfg: RunConfig, **extra):
    return {"seed": cfg.seed if cfg.seed is not None else 0, **extra}


def _write_matrix_bundle(cfg, matrix, metadata):
    bundle = report.emit_matrix(matrix, metadata)
    bundle["heatmap_svg"] = report.render_heatmap(matrix)
    bundle["pooled_md"] = report.emit_pooled(crosstest.pool(matrix), len(matrix.spoof_ids))
    for key, name in MATRIX_FILES.items():
        _write(cfg, name, bundle[key])


def cmd_eval(cfg: RunConfig):
    if cfg.parallelism < 1:
        raise UsageError("--parallelism must be positive")
    if cfg.weights and cfg.mode != "combined":
        raise UsageError("--weights only applies to --mode combined")
    store = ingest.load_store(cfg.scores_path, cfg.manifest_path, cfg.invert_scores)
    _prepare_out(cfg)
    meta = _metadata(cfg, mode=cfg.mode, invert_scores=cfg.invert_scores)
    if cfg.mode == "matrix":
        _write_matrix_bundle(cfg, crosstest.cross_test(store, cfg.parallelism), meta)
        return
    bona = crosstest.pooled_bonafide(store)
    if cfg.mode == "spoof-cross":
        outcomes = crosstest.spoof_cross_test(bona, store.spoof_subsets)
        _write(cfg, "spoof_cross.csv", report.outcomes_csv(store.spoof_ids, outcomes))
    else:
        outcome = crosstest.combined_eer(bona, store.spoof_subsets, cfg.weights, meta["seed"])
        meta["weights"] = {sid: cfg.weights.get(sid, 1.0) for sid in store.spoof_ids}
        _write(cfg, "combined.json", report.outcome_json(outcome, meta))


def _read_matrix(path):
    try:
        return report.matrix_from_json(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: not a matrix.json file ({exc})") from exc


def cmd_pool(cfg: RunConfig):
    matrix = _read_matrix(cfg.matrix_path)
    _prepare_out(cfg)
    _write(cfg, "pooled.md", report.emit_pooled(crosstest.pool(matrix), len(matrix.spoof_ids)))


def cmd_report(cfg: RunConfig):
    matrix = _read_matrix(cfg.matrix_path)
    meta = json.loads(Path(cfg.matrix_path).read_text(encoding="utf-8")).get("metadata", {})
    _prepare_out(cfg)
    _write_matrix_bundle(cfg, matrix, meta)
    figures.heatmap_figure(matrix, cfg.out_dir / "heatmap.png")
    print(f"wrote {cfg.out_dir / 'heatmap.png'}")


def cmd_simulate(cfg: RunConfig):
    if cfg.config_path is None:
        spec = simulate.parse_spec(simulate.default_spec_text(), cfg.seed)
    else:
        spec = simulate.load_spec(cfg.config_path, cfg.seed)
    store = simulate.generate(spec)
    _prepare_out(cfg)
    _write(cfg, "scores.tsv", ingest.format_scores(store))
    _write(cfg, "manifest.csv", ingest.format_manifest(store))
    meta = {
        "seed": spec.seed,
        "components": [vars(c) for c in spec.components],
        "shrink": spec.shrink,
        "fractions": list(spec.fractions),
    }
    _write(cfg, "simulation.json", json.dumps(meta, indent=1) + "\n")
    if spec.shrink is None:
        log.info("no [simulation] shrink subset configured; skipping drift experiment")
        return
    drift = simulate.drift_experiment(spec, spec.shrink, spec.fractions)
    _write(cfg, "drift.csv", report.drift_csv(drift))
    figures.drift_figure(store, drift, cfg.out_dir / "drift.png")
    print(f"wrote {cfg.out_dir / 'drift.png'}")


COMMANDS = {"eval": cmd_eval, "pool": cmd_pool, "simulate": cmd_simulate, "report": cmd_report}


def run(cfg: RunConfig) -> int:
    try:
        COMMANDS[cfg.command](cfg)
    except (ValidationError, UnicodeDecodeError) as exc:
        print(f"crosseval {cfg.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"crosseval {cfg.command}: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as exc:
        print(f"crosseval: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return run(RunConfig(**fields))


if __name__ == "__main__":
    sys.exit(main())
