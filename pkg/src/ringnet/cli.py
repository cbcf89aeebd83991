"""Command line front end.

Three subcommands: ``simulate`` runs one ensemble and writes distribution,
verdict, and variance-trace files; ``scan-alpha`` repeats the final-depth
classification across a list of disorder strengths; ``spectrum`` writes the
eigen-level localization summary of the composed transfer matrix and of a
single disordered step.

Exit codes: 0 success, 1 config problem, 2 numerical failure, 3 I/O failure.
All result files are deterministic byte for byte given the same config.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import warnings

import numpy as np

from .analysis import RegimeVerdict, classify, eigenvector_localization
from .config import ConfigError, RunConfig, effective_config, load_config, parse_config
from .linalg import BranchCutWarning, ConvergenceError, NonUnitaryError
from .network import ScenarioKind, compose, disordered_motif
from .simulate import Distribution, run_ensemble


def _json_value(value, indent: int) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite number {x!r}")
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_json_value(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if len(value) == 0:
            return "[]"
        inner = ",\n".join(f"{pad}  {_json_value(v, indent + 1)}" for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} to JSON")


def render_json(value) -> str:
    """Serialize to JSON with stable key order and 17-significant-digit floats.

    The stdlib encoder ties float text to repr shortest-round-trip rules;
    pinning the format here keeps output files byte-identical across Python
    versions, which the reproducibility checks rely on.
    """
    return _json_value(value, 0) + "\n"


def _write_text(path: str, text: str, quiet: bool):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    if not quiet:
        print(f"wrote {path}")


def distribution_csv(dist: Distribution, floor: float) -> str:
    """CSV of one distribution: one-based port, probability, log10 probability.

    The log column is left empty for probabilities at or below the fit floor,
    the same cut the fits apply. A trailing comment line carries the sum as a
    quick integrity check.
    """
    lines = ["port,probability,log10_probability"]
    for i, p in enumerate(dist.probabilities):
        log_field = format(math.log10(p), ".17g") if p > floor else ""
        lines.append(f"{i + 1},{format(p, '.17g')},{log_field}")
    total = float(dist.probabilities.sum())
    lines.append(f"# sum={format(total, '.17g')}")
    return "\n".join(lines) + "\n"


def _fit_payload(fit) -> dict:
    return {
        "amplitude_log": fit.amplitude_log,
        "decay": fit.decay,
        "ssr": fit.ssr,
        "n_points": fit.n_points,
    }


def _verdict_payload(verdict: RegimeVerdict, depth: int, cfg: RunConfig) -> dict:
    ratio = verdict.ssr_ratio if math.isfinite(verdict.ssr_ratio) else None
    return {
        "depth": depth,
        "runs": cfg.runs,
        "input_port": cfg.input_port,
        "regime": verdict.regime.value,
        "ssr_ratio": ratio,
        "localization_length": verdict.localization_length,
        "fits": {
            "gaussian": _fit_payload(verdict.gaussian),
            "exponential": _fit_payload(verdict.exponential),
        },
    }


def _prepare_out_dir(cfg: RunConfig, args) -> str:
    out_dir = args.out if args.out is not None else (cfg.output or ".")
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _load(args) -> RunConfig:
    if args.config is None:
        raise ConfigError("--config", "a config file is required")
    data = load_config(args.config)
    return parse_config(data, seed_override=args.seed, runs_override=args.runs)


def cmd_simulate(args) -> int:
    cfg = _load(args)
    out_dir = _prepare_out_dir(cfg, args)
    result = run_ensemble(cfg.scenario, cfg.input_index, cfg.depths, cfg.runs)

    for sample in result.samples:
        if "distributions" in cfg.emit:
            _write_text(
                os.path.join(out_dir, f"dist_M{sample.depth}.csv"),
                distribution_csv(sample.distribution, cfg.fit_floor),
                args.quiet,
            )
        if "fits" in cfg.emit:
            verdict = classify(sample.distribution, cfg.thresholds, cfg.fit_floor)
            payload = _verdict_payload(verdict, sample.depth, cfg)
            payload["variance"] = sample.variance
            payload["ipr"] = sample.ipr
            payload["realization_ipr_mean"] = sample.realization_ipr_mean
            _write_text(
                os.path.join(out_dir, f"verdict_M{sample.depth}.json"),
                render_json(payload),
                args.quiet,
            )

    if "variance_trace" in cfg.emit:
        lines = ["depth,variance,ipr"]
        for sample in result.samples:
            lines.append(
                f"{sample.depth},{format(sample.variance, '.17g')},"
                f"{format(sample.ipr, '.17g')}"
            )
        _write_text(
            os.path.join(out_dir, "variance_trace.csv"),
            "\n".join(lines) + "\n",
            args.quiet,
        )

    if "spectral" in cfg.emit:
        _write_text(
            os.path.join(out_dir, "spectral.json"),
            render_json(_spectral_payload(cfg.scenario)),
            args.quiet,
        )

    _write_text(
        os.path.join(out_dir, "effective_config.json"),
        render_json(effective_config(cfg)),
        args.quiet,
    )
    return 0


def _scan_axis(kind: ScenarioKind) -> str:
    if kind in (ScenarioKind.FULLY_RANDOM, ScenarioKind.INTERMEDIATE):
        return "alpha_layer"
    if kind is ScenarioKind.FIXED_DISORDER:
        return "alpha_fixed"
    raise ConfigError(
        "scenario.kind", f"kind {kind.value!r} has no disorder strength to scan"
    )


def cmd_scan_alpha(args) -> int:
    cfg = _load(args)
    if cfg.alphas is None:
        raise ConfigError("alphas", "required key is missing for scan-alpha")
    out_dir = _prepare_out_dir(cfg, args)
    axis = _scan_axis(cfg.scenario.kind)

    summary = ["alpha,ipr,ssr_ratio,regime"]
    for idx, alpha in enumerate(cfg.alphas):
        # same seed for every strength: differences along the scan come from
        # the strength alone, not from resampled noise
        scenario = dataclasses.replace(cfg.scenario, **{axis: alpha})
        result = run_ensemble(
            scenario, cfg.input_index, (scenario.depth,), cfg.runs
        )
        sample = result.final
        verdict = classify(sample.distribution, cfg.thresholds, cfg.fit_floor)
        if "distributions" in cfg.emit:
            _write_text(
                os.path.join(out_dir, f"dist_alpha{idx}.csv"),
                distribution_csv(sample.distribution, cfg.fit_floor),
                args.quiet,
            )
        if "fits" in cfg.emit:
            payload = _verdict_payload(verdict, sample.depth, cfg)
            payload["alpha"] = float(alpha)
            payload["variance"] = sample.variance
            payload["ipr"] = sample.ipr
            payload["realization_ipr_mean"] = sample.realization_ipr_mean
            _write_text(
                os.path.join(out_dir, f"verdict_alpha{idx}.json"),
                render_json(payload),
                args.quiet,
            )
        ratio_field = (
            format(verdict.ssr_ratio, ".17g")
            if math.isfinite(verdict.ssr_ratio)
            else ""
        )
        summary.append(
            f"{format(float(alpha), '.17g')},{format(sample.ipr, '.17g')},"
            f"{ratio_field},{verdict.regime.value}"
        )

    _write_text(
        os.path.join(out_dir, "scan_summary.csv"),
        "\n".join(summary) + "\n",
        args.quiet,
    )
    _write_text(
        os.path.join(out_dir, "effective_config.json"),
        render_json(effective_config(cfg)),
        args.quiet,
    )
    return 0


def _spectral_section(w: np.ndarray, depth: int) -> dict:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = eigenvector_localization(w, depth)
    branch_hits = sum(
        1 for c in caught if issubclass(c.category, BranchCutWarning)
    )
    return {
        "eigenvector_ipr_mean": report.eigenvector_ipr_mean,
        "branch_cut_count": branch_hits,
        "eigenphases": report.eigenphases,
        "eigenvector_ipr": report.eigenvector_ipr,
        "band_fractions": report.band_fractions,
    }


def _spectral_payload(scenario) -> dict:
    return {
        "n_modes": scenario.n_modes,
        "depth": scenario.depth,
        "single_step": _spectral_section(disordered_motif(scenario), 1),
        "full_product": _spectral_section(compose(scenario), scenario.depth),
    }


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    out_dir = _prepare_out_dir(cfg, args)
    _write_text(
        os.path.join(out_dir, "spectral.json"),
        render_json(_spectral_payload(cfg.scenario)),
        args.quiet,
    )
    _write_text(
        os.path.join(out_dir, "effective_config.json"),
        render_json(effective_config(cfg)),
        args.quiet,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringnet",
        description="Single-excitation transport on disordered coupler rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("simulate", cmd_simulate, "run one ensemble and write its outputs"),
        ("scan-alpha", cmd_scan_alpha, "classify across disorder strengths"),
        ("spectrum", cmd_spectrum, "eigen-level summary of the transfer matrix"),
    ]
    for name, func, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="path to a JSON run config")
        p.add_argument("--out", help="output directory (default: config output or .)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--runs", type=int, help="override the realization count")
        p.add_argument("--quiet", action="store_true", help="suppress per-file notes")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, NonUnitaryError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
