"""Command-line front end.

Every subcommand emits a machine-readable report, JSON by default
(top-level keys: command, params, result, trace, warnings) or CSV with a
single header row.  Floats are always formatted with 17 significant
digits and dictionary key order is fixed, so identical invocations
produce byte-identical reports.

Exit status: 0 success, 2 parameter/input validation failure (diagnostic
names the offending flag), 3 estimate did not converge (partial trace is
still emitted).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .almost_periodicity import estimate_inclusion_length, find_translation_numbers
from .bohr_analysis import bohr_coefficient, bohr_mean, scan_spectrum
from .bounds import check_decay_bound, check_taibleson
from .errors import (
    ApSpectraError,
    EmptyList,
    NotConverged,
    SignalFormatError,
)
from .signal_model import load_signal
from .variation import average_variation, total_variation
from .zeta_app import ZetaTruncation, zeta_bound_experiment, zeta_to_trig

MAX_ZETA_N = 10_000

DEFAULTS = {
    "tol": 1e-4,
    "t_initial": 64.0,
    "growth": 2.0,
    "max_doublings": 16,
    "J": 0,
    "n": 0,
    "format": "json",
}

# per-subcommand defaults layered on top of the shared ones
SUBCOMMAND_DEFAULTS = {
    "taibleson": {"n": 10},
    "zeta": {"mode": "eval", "x": 0.5, "step": None, "threshold": 0.1},
}


# ---------------------------------------------------------------------------
# Deterministic report formatting
# ---------------------------------------------------------------------------


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _render(value) -> str:
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(k)}: {_render(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _g17(value)
    if isinstance(value, complex):
        return _render({"re": value.real, "im": value.imag})
    return json.dumps(value)


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return _g17(value)
    return str(value)


def _render_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _complex_fields(value: complex) -> dict:
    return {"re": value.real, "im": value.imag}


class _Report:
    def __init__(self, command, params, result, trace, warnings, csv_header, csv_rows):
        self.doc = {
            "command": command,
            "params": {k: params[k] for k in sorted(params)},
            "result": result,
            "trace": trace,
            "warnings": warnings,
        }
        self.csv_header = csv_header
        self.csv_rows = csv_rows

    def text(self, fmt: str) -> str:
        if fmt == "csv":
            return _render_csv(self.csv_header, self.csv_rows)
        return _render(self.doc) + "\n"


class _UsageError(Exception):
    """Maps to exit status 2; message names the offending flag."""


# ---------------------------------------------------------------------------
# Parameter plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apspectra",
        description="Numerical analysis of almost periodic signals",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, signal_source=True):
        if signal_source:
            p.add_argument("--signal", metavar="PATH", help="signal specification JSON file")
            p.add_argument("--zeta-x", type=float, dest="zeta_x", metavar="F",
                           help="inline zeta-truncation signal: abscissa")
            p.add_argument("--zeta-N", type=int, dest="zeta_N", metavar="I",
                           help="inline zeta-truncation signal: length (<= 10000)")
            p.add_argument("--J", type=int, metavar="I",
                           help="derivative order of the zeta truncation (default: 0)")
        p.add_argument("--tol", type=float, metavar="F",
                       help="relative convergence tolerance (default: 0.0001)")
        p.add_argument("--t-initial", type=float, dest="t_initial", metavar="F",
                       help="first averaging window length (default: 64)")
        p.add_argument("--growth", type=float, metavar="F",
                       help="window growth factor (default: 2)")
        p.add_argument("--max-doublings", type=int, dest="max_doublings", metavar="I",
                       help="window growth steps allowed (default: 16)")
        p.add_argument("--out", metavar="PATH", help="also write the report to PATH")
        p.add_argument("--format", choices=["json", "csv"],
                       help="report format (default: json)")
        p.add_argument("--config", metavar="PATH",
                       help="JSON file of defaults (snake_case flag names)")

    p = sub.add_parser("mean", help="Bohr mean value of the signal")
    common(p)

    p = sub.add_parser("coeff", help="Bohr-Fourier coefficient at one frequency")
    p.add_argument("--lambda", type=float, dest="lam", metavar="F",
                   help="demodulation frequency (required)")
    common(p)

    p = sub.add_parser("scan", help="detect Fourier exponents in a frequency range")
    p.add_argument("--range", type=float, nargs=2, metavar=("F", "F"),
                   help="frequency range to sweep (required)")
    p.add_argument("--step", type=float, metavar="F", help="sweep grid step (required)")
    p.add_argument("--threshold", type=float, metavar="F",
                   help="detection magnitude floor (required)")
    common(p)

    p = sub.add_parser("periods", help="find epsilon-almost-periods")
    p.add_argument("--epsilon", type=float, metavar="F",
                   help="translation tolerance (required)")
    p.add_argument("--range", type=float, nargs=2, metavar=("F", "F"),
                   help="shift range to search (required)")
    p.add_argument("--step", type=float, metavar="F", help="shift grid step (required)")
    common(p)

    p = sub.add_parser("variation", help="total or average total variation")
    p.add_argument("--range", type=float, nargs=2, metavar=("F", "F"),
                   help="interval [a, b]; omit to estimate the average variation")
    common(p)

    p = sub.add_parser("bound-check", help="coefficient decay bound at order n")
    p.add_argument("--n", type=int, metavar="I",
                   help="derivative order of the bound (default: 0)")
    common(p)

    p = sub.add_parser("taibleson", help="classical 1-periodic coefficient bound")
    p.add_argument("--n", type=int, metavar="I",
                   help="largest harmonic index checked (default: 10)")
    common(p)

    p = sub.add_parser("zeta", help="zeta-truncation experiments")
    p.add_argument("--x", type=float, metavar="F", help="abscissa (default: 0.5)")
    p.add_argument("--N", type=int, metavar="I", help="truncation length (required)")
    p.add_argument("--J", type=int, metavar="I", help="derivative order (default: 0)")
    p.add_argument("--mode", choices=["eval", "spectrum", "bound"],
                   help="experiment to run (default: eval)")
    p.add_argument("--range", type=float, nargs=2, metavar=("F", "F"),
                   help="sample range (eval) or frequency range (spectrum)")
    p.add_argument("--step", type=float, metavar="F", help="sample or sweep step")
    p.add_argument("--threshold", type=float, metavar="F",
                   help="detection floor for spectrum mode (default: 0.1)")
    common(p, signal_source=False)
    return parser


def _merge_params(args: argparse.Namespace) -> dict:
    """Apply precedence: explicit flags > config file > built-in defaults."""
    given = {k: v for k, v in vars(args).items() if k != "command" and v is not None}
    merged = dict(DEFAULTS)
    merged.update(SUBCOMMAND_DEFAULTS.get(args.command, {}))
    if "config" in given:
        try:
            with open(given["config"], "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as e:
            raise _UsageError(f"--config: cannot read {given['config']}: {e}") from e
        except json.JSONDecodeError as e:
            raise _UsageError(f"--config: invalid JSON: {e}") from e
        if not isinstance(config, dict):
            raise _UsageError("--config: top-level value must be an object")
        known = set(vars(args)) - {"command"}
        for key, value in config.items():
            if key not in known:
                raise _UsageError(f"--config: unknown parameter {key!r}")
            merged[key] = value
    merged.update(given)
    return merged


def _need(params: dict, key: str, flag: str):
    if params.get(key) is None:
        raise _UsageError(f"{flag} is required")
    return params[key]


def _check_positive(params: dict, key: str, flag: str):
    value = params.get(key)
    if value is not None and value <= 0:
        raise _UsageError(f"{flag} must be positive (got {value:g})")


def _validate_window_flags(params: dict):
    _check_positive(params, "tol", "--tol")
    _check_positive(params, "t_initial", "--t-initial")
    if params["growth"] <= 1:
        raise _UsageError(f"--growth must exceed 1 (got {params['growth']:g})")
    if params["max_doublings"] < 0:
        raise _UsageError("--max-doublings must be nonnegative")


def _load_source_signal(params: dict):
    """Signal from --signal or from --zeta-x/--zeta-N, plus its description."""
    has_file = params.get("signal") is not None
    has_zeta = params.get("zeta_x") is not None or params.get("zeta_N") is not None
    if has_file and has_zeta:
        raise _UsageError("--signal and --zeta-x/--zeta-N are mutually exclusive")
    if has_file:
        try:
            return load_signal(params["signal"]), {"signal": params["signal"]}
        except OSError as e:
            raise _UsageError(f"--signal: cannot read {params['signal']}: {e}") from e
        except SignalFormatError as e:
            raise _UsageError(f"--signal: {e.detail}") from e
    if has_zeta:
        x = _need(params, "zeta_x", "--zeta-x")
        n = _need(params, "zeta_N", "--zeta-N")
        j = params["J"]
        if not 1 <= n <= MAX_ZETA_N:
            raise _UsageError(f"--zeta-N must be in 1..{MAX_ZETA_N} (got {n})")
        if j < 0:
            raise _UsageError(f"--J must be nonnegative (got {j})")
        return (
            zeta_to_trig(ZetaTruncation(x, n, j)),
            {"zeta_x": x, "zeta_N": n, "J": j},
        )
    raise _UsageError("--signal (or --zeta-x with --zeta-N) is required")


def _window_kwargs(params: dict) -> dict:
    return {
        "T_initial": params["t_initial"],
        "growth": params["growth"],
        "tolerance": params["tol"],
        "max_doublings": params["max_doublings"],
    }


# ---------------------------------------------------------------------------
# Subcommand runners: each returns (_Report, exit_status)
# ---------------------------------------------------------------------------


def _mean_trace(estimate) -> list[dict]:
    return [{"T": t, **_complex_fields(v)} for t, v in estimate.windows]


def _run_mean_like(command: str, params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    _validate_window_flags(params)
    echo = {**source, **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")}}
    warnings: list[str] = []
    status = 0
    if command == "coeff":
        lam = _need(params, "lam", "--lambda")
        echo["lambda"] = lam
        runner = lambda: bohr_coefficient(f, lam, **_window_kwargs(params))
    else:
        runner = lambda: bohr_mean(f, **_window_kwargs(params))
    try:
        est = runner()
    except NotConverged as e:
        est = e.estimate
        warnings.append(str(e))
        status = 3
    result = {
        "value": _complex_fields(est.value),
        "converged": est.converged,
        "tolerance": est.tolerance,
    }
    report = _Report(
        command, echo, result, _mean_trace(est), warnings,
        ["T", "re", "im"],
        [(t, v.real, v.imag) for t, v in est.windows],
    )
    return report, status


def _spectrum_report(command, echo, estimate) -> _Report:
    lines = [
        {
            "lambda": e.frequency,
            **_complex_fields(e.coefficient),
            "magnitude": e.magnitude,
        }
        for e in estimate.exponents
    ]
    result = {"exponents": lines, "count": len(lines)}
    grid_rows = [
        (lam, c.real, c.imag, abs(c))
        for lam, c in zip(estimate.grid_frequencies, estimate.grid_coefficients)
    ]
    return _Report(
        command, echo, result, [], [],
        ["lambda", "re", "im", "magnitude"], grid_rows,
    )


def _run_scan(params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    _validate_window_flags(params)
    rng = _need(params, "range", "--range")
    step = _need(params, "step", "--step")
    threshold = _need(params, "threshold", "--threshold")
    if step <= 0:
        raise _UsageError(f"--step must be positive (got {step:g})")
    if threshold <= 0:
        raise _UsageError(f"--threshold must be positive (got {threshold:g})")
    if not rng[1] > rng[0]:
        raise _UsageError(f"--range must be increasing (got {rng[0]:g} {rng[1]:g})")
    echo = {
        **source,
        "range": [rng[0], rng[1]],
        "step": step,
        "threshold": threshold,
        **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")},
    }
    est = scan_spectrum(f, (rng[0], rng[1]), step, threshold, **_window_kwargs(params))
    return _spectrum_report("scan", echo, est), 0


def _run_periods(params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    epsilon = _need(params, "epsilon", "--epsilon")
    rng = _need(params, "range", "--range")
    step = _need(params, "step", "--step")
    if epsilon <= 0:
        raise _UsageError(f"--epsilon must be positive (got {epsilon:g})")
    if step <= 0:
        raise _UsageError(f"--step must be positive (got {step:g})")
    if not rng[1] > rng[0]:
        raise _UsageError(f"--range must be increasing (got {rng[0]:g} {rng[1]:g})")
    echo = {**source, "epsilon": epsilon, "range": [rng[0], rng[1]], "step": step}
    shifts = find_translation_numbers(f, epsilon, (rng[0], rng[1]), step)
    result = {"count": len(shifts)}
    warnings: list[str] = []
    try:
        incl = estimate_inclusion_length(shifts, (rng[0], rng[1]))
        result["inclusion_length"] = incl.l_estimate
    except EmptyList as e:
        result["inclusion_length"] = None
        warnings.append(str(e))
    trace = [{"tau": s.tau, "discrepancy": s.discrepancy} for s in shifts]
    return _Report(
        "periods", echo, result, trace, warnings,
        ["tau", "discrepancy"], [(s.tau, s.discrepancy) for s in shifts],
    ), 0


def _run_variation(params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    _validate_window_flags(params)
    warnings: list[str] = []
    status = 0
    if params.get("range") is not None:
        a, b = params["range"]
        if b < a:
            raise _UsageError(f"--range must not be reversed (got {a:g} {b:g})")
        echo = {**source, "range": [a, b], "tol": params["tol"]}
        try:
            est = total_variation(f, a, b, tolerance=params["tol"])
        except NotConverged as e:
            est = e.estimate
            warnings.append(str(e))
            status = 3
        result = {
            "interval": [est.interval[0], est.interval[1]],
            "value": est.value,
            "method": est.method,
        }
        trace = [{"grid_size": n, "estimate": s} for n, s in est.refinement_trace]
        rows = [(n, s) for n, s in est.refinement_trace]
        return _Report(
            "variation", echo, result, trace, warnings,
            ["grid_size", "estimate"], rows,
        ), status
    echo = {**source, **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")}}
    try:
        est = average_variation(f, **_window_kwargs(params))
    except NotConverged as e:
        est = e.estimate
        warnings.append(str(e))
        status = 3
    result = {
        "value": est.value,
        "method": "average",
        "converged": est.converged,
    }
    trace = [{"T": t, "v_over_t": v} for t, v in est.windows]
    return _Report(
        "variation", echo, result, trace, warnings,
        ["T", "v_over_t"], list(est.windows),
    ), status


def _bound_report(command, echo, report, warnings, status) -> tuple[_Report, int]:
    entries = [
        {
            "lambda": e.exponent,
            "coeff": e.coefficient_magnitude,
            "bound": e.bound,
            "margin": e.margin,
            "satisfied": e.satisfied,
        }
        for e in report.entries
    ]
    result = {
        "derivative_order": report.derivative_order,
        "variation_value": report.variation_value,
        "all_satisfied": report.all_satisfied,
    }
    rows = [
        (e.exponent, e.coefficient_magnitude, e.bound, e.margin, e.satisfied)
        for e in report.entries
    ]
    return _Report(
        command, echo, result, entries, warnings,
        ["lambda", "coeff", "bound", "margin", "satisfied"], rows,
    ), status


def _run_bound_check(params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    _validate_window_flags(params)
    n = params["n"]
    if n < 0:
        raise _UsageError(f"--n must be nonnegative (got {n})")
    exponents = [lam for lam in f.frequencies if lam != 0.0]
    if not exponents:
        raise _UsageError("--signal has no nonzero frequencies to check")
    echo = {**source, "n": n,
            **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")}}
    report = check_decay_bound(f, exponents, n, **_window_kwargs(params))
    return _bound_report("bound-check", echo, report, [], 0)


def _run_taibleson(params: dict) -> tuple[_Report, int]:
    f, source = _load_source_signal(params)
    _validate_window_flags(params)
    j_max = params["n"]
    if j_max < 1:
        raise _UsageError(f"--n must be at least 1 (got {j_max})")
    echo = {**source, "n": j_max,
            **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")}}
    report = check_taibleson(f, j_max, **_window_kwargs(params))
    return _bound_report("taibleson", echo, report, [], 0)


def _run_zeta(params: dict) -> tuple[_Report, int]:
    _validate_window_flags(params)
    x = params["x"]
    n = _need(params, "N", "--N")
    j = params["J"]
    mode = params["mode"]
    if not 1 <= n <= MAX_ZETA_N:
        raise _UsageError(f"--N must be in 1..{MAX_ZETA_N} (got {n})")
    if j < 0:
        raise _UsageError(f"--J must be nonnegative (got {j})")
    truncation = ZetaTruncation(x, n, j)
    echo = {"x": x, "N": n, "J": j, "mode": mode}

    if mode == "eval":
        rng = params.get("range") or [0.0, 30.0]
        step = params.get("step")
        step = 0.1 if step is None else step
        if step <= 0:
            raise _UsageError(f"--step must be positive (got {step:g})")
        if not rng[1] > rng[0]:
            raise _UsageError(f"--range must be increasing (got {rng[0]:g} {rng[1]:g})")
        echo.update({"range": [rng[0], rng[1]], "step": step})
        ys = rng[0] + step * np.arange(int(math.floor((rng[1] - rng[0]) / step + 1e-9)) + 1)
        values = truncation.evaluate(ys)
        result = {"samples": len(ys)}
        trace = [
            {"y": float(y), **_complex_fields(complex(v))} for y, v in zip(ys, values)
        ]
        rows = [(float(y), float(v.real), float(v.imag)) for y, v in zip(ys, values)]
        return _Report("zeta", echo, result, trace, [], ["y", "re", "im"], rows), 0

    if mode == "spectrum":
        rng = params.get("range") or [-math.log(n) - 0.5, 0.5]
        step = params.get("step")
        step = 0.005 if step is None else step
        threshold = params["threshold"]
        if step <= 0:
            raise _UsageError(f"--step must be positive (got {step:g})")
        if threshold <= 0:
            raise _UsageError(f"--threshold must be positive (got {threshold:g})")
        if not rng[1] > rng[0]:
            raise _UsageError(f"--range must be increasing (got {rng[0]:g} {rng[1]:g})")
        echo.update({"range": [rng[0], rng[1]], "step": step, "threshold": threshold,
                     **{k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")}})
        est = scan_spectrum(
            zeta_to_trig(truncation), (rng[0], rng[1]), step, threshold,
            **_window_kwargs(params),
        )
        return _spectrum_report("zeta", echo, est), 0

    # mode == "bound"
    echo.update({k: params[k] for k in ("tol", "t_initial", "growth", "max_doublings")})
    warnings: list[str] = []
    status = 0
    try:
        report = zeta_bound_experiment(x, n, j, **_window_kwargs(params))
        windows = report.windows
        result = {
            "estimated_variation": report.estimated_variation,
            "lower_bound": report.lower_bound,
            "margin": report.margin,
            "satisfied": report.satisfied,
        }
    except NotConverged as e:
        est = e.estimate
        windows = est.windows
        warnings.append(str(e))
        status = 3
        result = {
            "estimated_variation": est.value,
            "lower_bound": None,
            "margin": None,
            "satisfied": False,
        }
    trace = [{"T": t, "v_over_t": v} for t, v in windows]
    return _Report(
        "zeta", echo, result, trace, warnings, ["T", "v_over_t"], list(windows)
    ), status


_RUNNERS = {
    "mean": lambda p: _run_mean_like("mean", p),
    "coeff": lambda p: _run_mean_like("coeff", p),
    "scan": _run_scan,
    "periods": _run_periods,
    "variation": _run_variation,
    "bound-check": _run_bound_check,
    "taibleson": _run_taibleson,
    "zeta": _run_zeta,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = _merge_params(args)
        report, status = _RUNNERS[args.command](params)
    except _UsageError as e:
        print(f"apspectra {args.command}: error: {e}", file=sys.stderr)
        return 2
    except ApSpectraError as e:
        print(f"apspectra {args.command}: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"apspectra {args.command}: error: {e}", file=sys.stderr)
        return 2
    text = report.text(params["format"])
    out_path = params.get("out")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
