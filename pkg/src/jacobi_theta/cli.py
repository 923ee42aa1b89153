"""Config-driven command line front end.

One command per invocation.  Records go to stdout as JSON lines (one per
sample or coefficient, then one summary record); a short human summary goes
to stderr.  Exit codes: 0 success, 1 a verification failed, 2 configuration
or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import TextIO

import jsonschema

from . import __version__
from .errors import ConfigError, ThetaError
from .expansion import FORMATS, dumps
from .quadform import make_directions, validate_form
from .series import (
    ThetaSpec,
    psi_coeffs,
    psi_eval,
    record_truncation,
    theta_coeffs,
    theta_eval_info,
)
from .verify import (
    VerificationReport,
    quasi_depth_fit,
    sample_points,
    verify_congruence,
    verify_elliptic,
    verify_generating,
    verify_modular,
    verify_support,
    verify_translation_polynomial,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULT_TOLERANCE = {
    "verify-generating": 1e-6,
    "verify-support": 0.0,
    "quasi-depth": 1e-6,
}
DEFAULTS = {
    "k": 0,
    "kind": "theta",
    "eps": 1e-10,
    "seed": 0,
    "format": "json-records",
    "smax": 2,
    "tmax": 1,
    "sampling": {"count": 8, "im_tau": [0.5, 2.0], "re_tau": 0.5, "z_radius": 0.3},
}


def _schema() -> dict:
    text = resources.files("jacobi_theta").joinpath("schema/run_config.schema.json").read_text()
    return json.loads(text)


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    validate_config(config)
    return config


def validate_config(config: dict) -> None:
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {err.message}")


def _complex(pair) -> complex:
    return complex(pair[0], pair[1])


def _cpair(x: complex) -> list[float]:
    return [complex(x).real, complex(x).imag]


def resolve_config(config: dict, tolerance=None, seed=None, fmt=None) -> dict:
    """Fill defaults, apply command-line overrides and materialise sample points."""
    out = json.loads(json.dumps(config))
    for key, value in DEFAULTS.items():
        if key == "sampling":
            out["sampling"] = {**value, **out.get("sampling", {})}
        else:
            out.setdefault(key, value)
    if tolerance is not None:
        out["tolerance"] = tolerance
    out.setdefault("tolerance", DEFAULT_TOLERANCE.get(out["command"], 1e-8))
    if seed is not None:
        out["seed"] = seed
    if fmt is not None:
        out["format"] = fmt
    f = len(out["form"]["matrix"])
    out.setdefault("v", [[0.0, 0.0]] * f)
    n = len(out["directions"])
    if out["command"].startswith("verify-") and out["command"] != "verify-support" and "points" not in out:
        s = out["sampling"]
        pts = sample_points(n, s["count"], out["seed"], tuple(s["im_tau"]), s["re_tau"], s["z_radius"])
        out["points"] = [{"tau": _cpair(t), "z": [_cpair(x) for x in z]} for t, z in pts]
    return out


def _points(items) -> list:
    return [(_complex(p["tau"]), tuple(_complex(x) for x in p["z"])) for p in items]


def _spec(cfg: dict) -> ThetaSpec:
    form = validate_form(cfg["form"]["matrix"])
    directions = make_directions(form, cfg["directions"])
    v = [_complex(x) for x in cfg["v"]]
    return ThetaSpec.build(form, directions, v, cfg["k"])


def emit_expansion(spec: ThetaSpec, lmax: int, fmt: str = "json-records", path=None, kind: str = "theta") -> str:
    """Dump the coefficients of ``theta`` (or ``Psi``) up to ``lmax``; also write to ``path`` if given."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}")
    expansion = psi_coeffs(spec, lmax) if kind == "psi" else theta_coeffs(spec, lmax)
    text = dumps(expansion, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text


class _Output:
    def __init__(self, stdout: TextIO, stderr: TextIO, quiet: bool):
        self.stdout, self.stderr, self.quiet = stdout, stderr, quiet

    def record(self, rec: dict) -> None:
        self.stdout.write(json.dumps(rec) + "\n")

    def raw(self, text: str) -> None:
        self.stdout.write(text)

    def note(self, line: str) -> None:
        if not self.quiet:
            self.stderr.write(line + "\n")


def _merge_truncation(reports: list[VerificationReport]) -> dict:
    infos = [r.truncation for r in reports if r.truncation]
    return {
        "eps": next((t.get("eps") for t in infos if t.get("eps") is not None), None),
        "evaluations": sum(t.get("evaluations", 0) for t in infos),
        "max_radius": max((t.get("max_radius", 0) for t in infos), default=0),
        "max_points": max((t.get("max_points", 0) for t in infos), default=0),
        "max_increment": max((t.get("max_increment", 0.0) for t in infos), default=0.0),
    }


def _run_reports(cfg: dict, out: _Output) -> tuple[list[VerificationReport], dict]:
    command, tol, eps = cfg["command"], cfg["tolerance"], cfg["eps"]
    points = _points(cfg.get("points", []))
    reports: list[VerificationReport] = []
    if command == "verify-support":
        spec = _spec(cfg)
        expansion = theta_coeffs(spec, cfg["lmax"])
        reports.append(verify_support(expansion, spec.directions.G, tol))
    elif command == "verify-modular":
        spec = _spec(cfg)
        for g in cfg["gammas"]:
            reports.append(verify_modular(cfg["kind"], spec, g, points, tol, eps))
    elif command in ("verify-elliptic", "verify-translation"):
        spec = _spec(cfg)
        for tr in cfg["translations"]:
            lam, mu = tr["lambda"], tr.get("mu", [0] * len(tr["lambda"]))
            if command == "verify-elliptic":
                reports.append(verify_elliptic(cfg["kind"], spec, lam, mu, points, tol, eps))
            else:
                reports.append(verify_translation_polynomial(spec, lam, mu, points, tol, eps))
    elif command == "verify-generating":
        spec = _spec(cfg)
        for g in cfg["gammas"]:
            reports.append(verify_generating(spec.form, spec.directions, spec.v, g, cfg["T"], points, tol, eps))
    elif command == "verify-congruence":
        spec = _spec(cfg)
        ell = [_complex(x) for x in cfg["ell"]]
        for p in cfg["p"]:
            for g in cfg["gammas"]:
                reports.append(verify_congruence(spec.form, p, ell, cfg["k"], spec.directions, g, points, tol, eps))
    for report in reports:
        for rec in report.sample_records():
            out.record(rec)
        out.record({"record": "report", **report.summary()})
        out.note(
            f"{report.identity_name.value}: {report.verdict.value.upper()} "
            f"(max residual {report.max_residual:.3g}, tolerance {report.tolerance:.3g}, {len(report.samples)} samples)"
        )
    passed = all(r.passed for r in reports)
    summary = {
        "verdict": "pass" if passed else "fail",
        "reports": len(reports),
        "max_residual": max((r.max_residual for r in reports), default=0.0),
        "tolerance": tol,
        "truncation": _merge_truncation(reports),
    }
    return reports, summary


def _run_command(cfg: dict, out: _Output) -> tuple[int, dict]:
    command = cfg["command"]
    if command == "coeffs":
        spec = _spec(cfg)
        text = emit_expansion(spec, cfg["lmax"], cfg["format"], cfg.get("output"), cfg["kind"])
        count = sum(1 for line in text.splitlines()[1:] if line.strip())
        if cfg["format"] == "csv" and "output" not in cfg:
            out.raw(text)
        elif "output" not in cfg:
            for line in text.splitlines():
                out.record(json.loads(line))
        out.note(f"coeffs: {count} nonzero coefficients up to q^{cfg['lmax']}")
        return EXIT_OK, {"verdict": "computed", "coefficients": count, "truncation": {"lmax": cfg["lmax"]}}
    if command == "eval":
        spec = _spec(cfg)
        tau, z = _complex(cfg["tau"]), [_complex(x) for x in cfg["z"]]
        with record_truncation() as infos:
            if cfg["kind"] == "psi":
                value = psi_eval(spec, tau, z, cfg["eps"])
            else:
                value = theta_eval_info(spec, tau, z, cfg["eps"])[0]
        truncation = {
            "eps": cfg["eps"],
            "evaluations": len(infos),
            "max_radius": max(i.radius for i in infos),
            "max_points": max(i.points for i in infos),
            "max_increment": max(i.increment for i in infos),
        }
        out.record({"record": "value", "kind": cfg["kind"], "value": _cpair(value)})
        out.note(f"eval: {cfg['kind']} = {value:.15g}")
        return EXIT_OK, {"verdict": "computed", "truncation": truncation}
    if command == "quasi-depth":
        spec = _spec(cfg)
        fit = quasi_depth_fit(
            spec,
            _points(cfg["base_points"]),
            cfg.get("gammas"),
            cfg.get("lambdas"),
            cfg["smax"],
            cfg["tmax"],
            cfg["tolerance"],
            cfg["eps"],
        )
        expected = cfg.get("expected_depth")
        passed = fit.residual <= cfg["tolerance"] and (expected is None or list(fit.depth) == list(expected))
        out.record(
            {
                "record": "depth",
                "depth": list(fit.depth),
                "lambda_depth": list(fit.lambda_depth),
                "residual": fit.residual,
                "condition": fit.condition,
                "base_points": fit.base_points,
            }
        )
        out.note(f"quasi-depth: depth {fit.depth}, fit residual {fit.residual:.3g}")
        summary = {"verdict": "pass" if passed else "fail", "depth": list(fit.depth), "residual": fit.residual}
        return (EXIT_OK if passed else EXIT_FAIL), summary
    _, summary = _run_reports(cfg, out)
    return (EXIT_OK if summary["verdict"] == "pass" else EXIT_FAIL), summary


def run_config(
    path,
    tolerance: float | None = None,
    seed: int | None = None,
    fmt: str | None = None,
    quiet: bool = False,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Run one configuration file and return the exit code."""
    out = _Output(stdout or sys.stdout, stderr or sys.stderr, quiet)
    try:
        cfg = resolve_config(load_config(path), tolerance, seed, fmt)
        code, summary = _run_command(cfg, out)
    except ThetaError as exc:
        out.record({"record": "error", "code": exc.code, "message": str(exc), "version": __version__})
        out.note(f"error: {exc.code}: {exc}")
        return EXIT_CONFIG
    if not (cfg["command"] == "coeffs" and cfg["format"] == "csv"):
        out.record({"record": "summary", "command": cfg["command"], **summary, "version": __version__, "config": cfg})
    out.note(f"{cfg['command']}: {summary['verdict']}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi-theta", description=__doc__.splitlines()[0])
    parser.add_argument("--config", required=True, help="run configuration (JSON)")
    parser.add_argument("--tolerance", type=float, help="override the verdict tolerance")
    parser.add_argument("--seed", type=int, help="override the sample-point seed")
    parser.add_argument("--format", choices=FORMATS, help="coefficient dump format")
    parser.add_argument("--quiet", action="store_true", help="no human summary on stderr")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run_config(args.config, args.tolerance, args.seed, args.format, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
