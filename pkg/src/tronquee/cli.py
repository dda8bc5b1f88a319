"""Command-line front end.

Subcommands: ``solve``, ``integral``, ``verify``, ``parametrix-check``,
``tw`` and ``thinned``.  Settings come from an optional ``key=value`` config
file overridden by flags.  Exit codes: 0 when every requested check passes,
2 for invalid input, 3 for numerical failures and failed checks.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import mpmath as mp

from . import apps, parametrix, regint, series
from .config import DEFAULT_PRECISION, DEFAULT_S0, DEFAULT_TOL
from .errors import DomainError, NumericalError, ValidationError
from .painleve import Params, solve

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

_CONFIG_KEYS = {
    "alpha": str,
    "omega": str,
    "beta_imag": str,
    "precision_bits": int,
    "s0": float,
    "s_end": float,
    "tol": float,
    "c": str,
    "format": str,
    "out": str,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated settings shared by all subcommands."""

    alpha: str = "0"
    omega: str | None = None
    beta_imag: str | None = None
    precision_bits: int = DEFAULT_PRECISION
    s0: float = DEFAULT_S0
    s_end: float = -8.0
    tol: float = DEFAULT_TOL
    c: str | None = None
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.omega is not None and self.beta_imag is not None:
            raise ValidationError("give either omega or beta_imag, not both")
        if self.precision_bits < 53:
            raise ValidationError("precision_bits must be at least 53")
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.s_end >= self.s0:
            raise ValidationError("s_end must lie below s0")
        _ = self.params  # constructing Params validates alpha and omega

    @property
    def params(self) -> Params:
        if self.beta_imag is not None:
            return Params.from_beta(self.alpha, self.beta_imag)
        return Params(self.alpha, self.omega if self.omega is not None else "0")


def read_config(path: str) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_KEYS:
            raise ValidationError(f"{path}:{lineno}: expected one of {sorted(_CONFIG_KEYS)} as key=value")
        try:
            values[key] = _CONFIG_KEYS[key](value.strip())
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return values


# -- formatting -------------------------------------------------------------------------


def _digits(cfg: RunConfig) -> int:
    return max(15, int(cfg.precision_bits * math.log10(2)))


def _num(x, digits: int) -> str:
    """Full-precision decimal string."""
    x = mp.mpmathify(x)
    if isinstance(x, mp.mpc):
        return f"{mp.nstr(x.real, digits)}{'+' if x.imag >= 0 else '-'}{mp.nstr(abs(x.imag), digits)}j"
    return mp.nstr(x, digits)


def _pair(x, digits: int) -> dict:
    """Full-precision value plus a rounded display column."""
    return {"value": _num(x, digits), "display": _num(x, 10)}


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _check(name: str, value, tol) -> dict:
    return {"check": name, "value": _num(value, 6), "tolerance": _num(tol, 3), "pass": bool(value <= tol)}


def _finish(cfg: RunConfig, payload: dict, checks: list[dict]) -> int:
    payload["checks"] = checks
    payload["pass"] = all(c["pass"] for c in checks)
    _emit(cfg, _dump(payload))
    for c in checks:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['check']}: {c['value']} (tol {c['tolerance']})", file=sys.stderr)
    return EXIT_OK if payload["pass"] else EXIT_NUMERIC


def _params_header(cfg: RunConfig) -> dict:
    p = cfg.params
    d = _digits(cfg)
    return {"alpha": _num(p.alpha, d), "omega": _num(p.omega, d), "precision_bits": cfg.precision_bits}


# -- subcommands ------------------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    """Integrate a trajectory and write its CSV or JSON export."""
    with mp.workprec(cfg.precision_bits):
        traj = solve(cfg.params, s_end=mp.mpf(cfg.s_end), tol=cfg.tol, s0=mp.mpf(cfg.s0), prec=cfg.precision_bits)
        text = traj.to_csv() if cfg.format == "csv" else traj.to_json()
    _emit(cfg, text)
    return EXIT_OK


_INTEGRALS = {"I1": regint.I1, "I1tilde": regint.I1_tilde, "I2": regint.I2, "I3": regint.I3}


def cmd_integral(cfg: RunConfig, which: str, s, c_sweep=None) -> int:
    """Evaluate one regularized integral and emit its IntegralResult JSON.

    With ``c_sweep`` the integral is evaluated at a second cut point and the
    run passes iff both values agree within their combined bounds.
    """
    func = _INTEGRALS[which]
    p = cfg.params
    digits = _digits(cfg)
    kwargs = {"prec": cfg.precision_bits}
    if cfg.c is not None:
        kwargs["c"] = mp.mpf(cfg.c)
    with mp.workprec(cfg.precision_bits):
        res = func(mp.mpf(s), p, **kwargs)
        payload = {"integral": which, **_params_header(cfg), "s": _num(mp.mpf(s), digits)}
        payload.update(res.to_dict(digits))
        payload["c"] = payload.pop("c_used")
        checks = []
        if c_sweep is not None:
            other = func(mp.mpf(s), p, prec=cfg.precision_bits, c=mp.mpf(c_sweep))
            diff = abs(res.value - other.value)
            allowed = res.tail_bound + other.tail_bound + 2 * regint.QUAD_TOL + res.quad_error + other.quad_error
            payload["c_sweep"] = {"c": _num(other.c_used, digits), "value": _num(other.value, digits)}
            checks.append(_check("c-independence", diff, allowed))
    return _finish(cfg, payload, checks)


def _verify_thm1(cfg: RunConfig) -> tuple[dict, list]:
    p = cfg.params
    if p.beta is None:
        d = apps.i1_decay_check(p, prec=cfg.precision_bits)
        payload = {
            "nodes": [_num(s, 6) for s in d.nodes],
            "residuals": [_num(r, 10) for r in d.residuals],
            "slope": _num(d.slope, 8),
            "offset": _num(d.offset, 8),
        }
        return payload, [_check("slope - (-1.5)", abs(d.slope + 1.5), 0.3), _check("extrapolated offset", abs(d.offset), 1e-4)]
    fit = apps.i1_offset_fit(p, prec=cfg.precision_bits)
    payload = {
        "window": [_num(v, 6) for v in fit.window],
        "nodes": fit.nodes,
        "coefficients": {k: _num(v, 10) for k, v in fit.coefficients.items()},
        "fit_residual": _num(fit.residual_norm, 4),
    }
    return payload, [_check("extrapolated offset", abs(fit.constant), 1e-3)]


def _verify_thm2(cfg: RunConfig) -> tuple[dict, list]:
    p = cfg.params
    if p.beta is None:
        fit = apps.i2_constant_fit(p, prec=cfg.precision_bits)
    else:
        fit = apps.i2_constant_fit(p, window=(-22, -10), nodes=25, prec=cfg.precision_bits)
    expected = apps.predicted_i2_constant(p)
    payload = {
        "window": [_num(v, 6) for v in fit.window],
        "nodes": fit.nodes,
        "coefficients": {k: _num(v, 12) for k, v in fit.coefficients.items()},
        "fit_residual": _num(fit.residual_norm, 4),
        "expected_constant": _num(expected, 15),
    }
    return payload, [_check("constant mismatch", abs(fit.constant - expected), 1e-3)]


def _verify_lemmas(cfg: RunConfig) -> tuple[dict, list]:
    p = cfg.params
    end = mp.mpf(cfg.s_end)
    traj = solve(p, s_end=end, tol=cfg.tol, s0=mp.mpf(cfg.s0), prec=cfg.precision_bits)
    limit = 100 * cfg.tol
    pole_locs = [pl.location for pl in traj.poles]
    samples = [end + (mp.mpf(cfg.s0) - end) * k / 20 for k in range(1, 20)]
    samples = [s for s in samples if all(abs(s - x) > mp.mpf("0.05") for x in pole_locs)]
    worst = {}
    rows = []
    for s in samples:
        r = regint.lemma_residuals(s, p, traj=traj, prec=cfg.precision_bits)
        rows.append({"s": _num(s, 8), **{k: _num(v, 4) for k, v in sorted(r.items())}})
        for k, v in r.items():
            worst[k] = max(worst.get(k, 0), v)
    checks = [_check(f"{k} (max)", v, limit) for k, v in sorted(worst.items())]
    checks.append(_check("first-integral drift", traj.max_drift, 10 * cfg.tol))
    return {"table": rows}, checks


def _verify_identity_h(cfg: RunConfig) -> tuple[dict, list]:
    p = cfg.params
    s_values = [mp.mpf(v) for v in (-4, -1, 2)]
    rows = []
    checks = []
    for s in s_values:
        r = regint.identity_integral_H(s, p, prec=cfg.precision_bits)
        rows.append({"s": _num(s, 6), "residual": _num(r, 6)})
        checks.append(_check(f"identity residual at s={_num(s, 4)}", r, 1e-6))
    return {"table": rows}, checks


_THEOREMS = {"thm1": _verify_thm1, "thm2": _verify_thm2, "lemmas": _verify_lemmas, "identityH": _verify_identity_h}


def cmd_verify(cfg: RunConfig, theorem: str) -> int:
    """Run one residual sweep and report pass/fail against its tolerance."""
    with mp.workprec(cfg.precision_bits):
        body, checks = _THEOREMS[theorem](cfg)
        payload = {"theorem": theorem, **_params_header(cfg), **body}
    return _finish(cfg, payload, checks)


def _flat(m: parametrix.Mat2C) -> tuple:
    return (m.a, m.b, m.c, m.d)


def cmd_parametrix(cfg: RunConfig, which: str, two_alpha=None, z_far="400") -> int:
    """Jump, determinant and asymptotic residual report for one parametrix."""
    prec = cfg.precision_bits
    tol = mp.mpf("1e-8")
    with mp.workprec(prec):
        if which == "airy":
            params = {}
        elif which == "bessel":
            nu = mp.mpf(two_alpha if two_alpha is not None else "-0.4")
            if nu <= -1:
                raise ValidationError("Bessel order must exceed -1")
            params = {"two_alpha": nu}
        elif which == "chf":
            beta = mp.mpc(0, mp.mpf(cfg.beta_imag if cfg.beta_imag is not None else "0.2"))
            params = {"alpha": cfg.params.alpha, "beta": beta}
        else:
            raise ValidationError(f"unknown parametrix {which!r}")
        jumps = parametrix.jump_residuals(which, params, prec=prec)
        spread, _ = parametrix.det_spread(which, params, prec=prec)
        payload = {
            "parametrix": which,
            "precision_bits": prec,
            "params": {k: _num(v, 20) for k, v in sorted(params.items())},
            "jump_residuals": {str(k): _num(v, 4) for k, v in sorted(jumps.items())},
            "det_spread": _num(spread, 4),
        }
        checks = [_check(f"jump ray {k}", v, tol) for k, v in sorted(jumps.items())]
        checks.append(_check("determinant spread", spread, tol))
        if which == "bessel":
            nu = params["two_alpha"]
            corr = parametrix.bessel_first_correction(mp.mpf(z_far) * mp.expjpi(mp.mpf("0.3")), nu, prec)
            target = (-1 - 4 * nu**2, mp.mpc(0, -2), mp.mpc(0, -2), 1 + 4 * nu**2)
            rel = max(abs(a - b) / abs(b) for a, b in zip(_flat(corr), target))
            payload["first_correction"] = [_num(v, 8) for v in _flat(corr)]
            checks.append(_check(f"first correction at |z|={z_far} (relative)", rel, mp.mpf("0.1")))
            dev = parametrix.bessel_origin_deviation(nu, prec)
            payload["origin_deviation"] = _num(dev, 6)
            checks.append(_check("origin behaviour", dev, mp.mpf("0.05")))
        else:
            z = mp.mpf(z_far) * mp.expjpi(mp.mpf("0.3"))
            asy = parametrix.airy_asymptotic_residual(z, prec) if which == "airy" else (
                parametrix.chf_asymptotic_residual(z, params["alpha"], params["beta"], prec)
            )
            payload["asymptotic_residual"] = {"abs_z": z_far, "value": _num(asy, 6)}
        if which == "chf":
            cyc = parametrix.chf_cyclic_product(params["alpha"], params["beta"], prec)
            tr_err = abs(cyc.trace() - 2 * mp.cos(2 * mp.pi * params["alpha"]))
            checks.append(_check("cyclic product trace", tr_err, tol))
            checks.append(_check("cyclic product det", abs(cyc.det() - 1), tol))
    return _finish(cfg, payload, checks)


def _grid(lo, hi, step):
    lo, hi, step = mp.mpf(lo), mp.mpf(hi), mp.mpf(step)
    if step <= 0 or hi < lo:
        raise ValidationError("need x_min <= x_max and a positive step")
    count = int(mp.floor((hi - lo) / step + mp.mpf("1e-9"))) + 1
    return [lo + k * step for k in range(count)]


def _table(cfg: RunConfig, name: str, rows: list, summary: dict) -> int:
    digits = _digits(cfg)
    if cfg.format == "csv":
        lines = [f"{name},lnF,lnF_rounded"] + [f"{_num(x, 12)},{_num(v, digits)},{_num(v, 10)}" for x, v in rows]
        _emit(cfg, "\n".join(lines))
        print(_dump(summary), file=sys.stderr)
    else:
        payload = {"rows": [{name: _num(x, 12), "lnF": _pair(v, digits)} for x, v in rows], "summary": summary}
        _emit(cfg, _dump(payload))
    return EXIT_OK


def cmd_tw(cfg: RunConfig, x_min, x_max, step, fit: bool) -> int:
    """Table of ln F_TW(x) plus an optional large-gap fit summary."""
    with mp.workprec(cfg.precision_bits):
        rows = [(x, apps.tw_log_cdf(x, cfg.precision_bits)) for x in _grid(x_min, x_max, step)]
        summary = {"precision_bits": cfg.precision_bits}
        if fit:
            f = apps.tw_left_tail_fit(prec=cfg.precision_bits)
            summary["fit"] = {
                "window": [_num(v, 6) for v in f.window],
                "nodes": f.nodes,
                "coefficients": {k: _num(v, 12) for k, v in f.coefficients.items()},
                "fit_residual": _num(f.residual_norm, 4),
                "c0": _num(series.c0(), 15),
            }
    return _table(cfg, "x", rows, summary)


def cmd_thinned(cfg: RunConfig, s_min, s_max, step, fit: bool) -> int:
    """Table of the thinned-GUE ln F(s) plus an optional constant fit."""
    p = cfg.params
    if not 0 < p.omega < 1:
        raise ValidationError("thinned GUE needs 0 < omega < 1")
    with mp.workprec(cfg.precision_bits):
        rows = [(s, apps.thinned_gue_log_cdf(s, p.omega, cfg.precision_bits)) for s in _grid(s_min, s_max, step)]
        summary = {"omega": _num(p.omega, 20), "precision_bits": cfg.precision_bits}
        if fit:
            f = apps.i2_constant_fit(Params(0, p.omega), window=(-22, -10), nodes=25, prec=cfg.precision_bits)
            expected = apps.predicted_i2_constant(Params(0, p.omega))
            summary["fit"] = {
                "window": [_num(v, 6) for v in f.window],
                "nodes": f.nodes,
                "lnF_constant": _num(-f.constant, 12),
                "expected": _num(-expected, 12),
                "fit_residual": _num(f.residual_norm, 4),
            }
    return _table(cfg, "s", rows, summary)


# -- argument parsing -------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value settings file; flags override it")
    parser.add_argument("--alpha")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--omega")
    group.add_argument("--beta-imag", dest="beta_imag", help="Im(beta); omega = exp(2 pi Im beta)")
    parser.add_argument("--precision-bits", dest="precision_bits", type=int)
    parser.add_argument("--s0", type=float)
    parser.add_argument("--s-end", dest="s_end", type=float)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--c")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tronquee", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="integrate a trajectory and export it")
    _common(p)

    p = sub.add_parser("integral", help="evaluate a regularized integral")
    p.add_argument("which", choices=sorted(_INTEGRALS))
    p.add_argument("--s", required=True)
    p.add_argument("--c-sweep", dest="c_sweep", help="second cut point for a c-independence check")
    _common(p)

    p = sub.add_parser("verify", help="theorem and identity residual sweeps")
    p.add_argument("theorem", choices=sorted(_THEOREMS))
    _common(p)

    p = sub.add_parser("parametrix-check", help="jump and asymptotic residuals of a parametrix")
    p.add_argument("which", choices=("airy", "bessel", "chf"))
    p.add_argument("--two-alpha", dest="two_alpha", help="Bessel order")
    _common(p)

    for name, var in (("tw", "x"), ("thinned", "s")):
        p = sub.add_parser(name, help=f"ln F table over {var} with a large-gap fit")
        p.add_argument(f"--{var}-min", dest="lo", default="-4")
        p.add_argument(f"--{var}-max", dest="hi", default="4")
        p.add_argument("--step", default="1")
        p.add_argument("--fit", action="store_true", help="add the large-gap constant fit")
        _common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if args.command == "solve" and "format" not in values:
        values["format"] = "csv"
    if "omega" in values and "beta_imag" in values:
        # A flag for one of the pair overrides the config's other member.
        if getattr(args, "omega", None) is not None:
            values.pop("beta_imag")
        elif getattr(args, "beta_imag", None) is not None:
            values.pop("omega")
    return RunConfig(**values)


def _dispatch(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.command == "solve":
        return cmd_solve(cfg)
    if args.command == "integral":
        return cmd_integral(cfg, args.which, args.s, args.c_sweep)
    if args.command == "verify":
        return cmd_verify(cfg, args.theorem)
    if args.command == "parametrix-check":
        return cmd_parametrix(cfg, args.which, args.two_alpha)
    if args.command == "tw":
        return cmd_tw(cfg, args.lo, args.hi, args.step, args.fit)
    return cmd_thinned(cfg, args.lo, args.hi, args.step, args.fit)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _dispatch(args, cfg)
    except (ValidationError, DomainError, ValueError) as exc:
        print(_dump({"error": "validation", "reason": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ArithmeticError) as exc:
        print(_dump({"error": "numeric", "type": type(exc).__name__, "reason": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
