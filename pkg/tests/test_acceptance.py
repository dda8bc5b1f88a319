"""Acceptance criteria, each at its stated tolerance.

Every criterion records one ``criterion N: PASS|FAIL`` line, printed in the
"acceptance criteria" section of the pytest summary and echoed to stdout.
Run alone with ``pytest tests/test_acceptance.py`` or
``python tests/test_acceptance.py``.
"""

import mpmath as mp
import pytest

from conftest import ACCEPTANCE_LINES
from tronquee.apps import (
    i1_decay_check,
    i1_offset_fit,
    i2_constant_fit,
    p34_tail_identity,
)
from tronquee.painleve import Params
from tronquee.parametrix import (
    Mat2C,
    bessel_first_correction,
    bessel_origin_deviation,
    det_spread,
    jump_residuals,
)
from tronquee.regint import (
    I1,
    I2,
    I3,
    I1_tilde,
    alpha_derivative_residual,
    identity_integral_H,
    lemma_residuals,
)
from tronquee.series import c0
from tronquee.specfun import ln_barnes_g, zeta_prime_minus_one


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def fmt(x) -> str:
    return mp.nstr(x, 3)


def test_criterion_1_closed_form_family(airy_traj):
    worst_w = mp.mpf(0)
    worst_sigma = mp.mpf(0)
    zeros = [mp.airyaizero(k) for k in range(1, 8)]
    for k in range(1101):
        s = -8 + mp.mpf(11) * k / 1100
        worst_sigma = max(worst_sigma, abs(airy_traj.sigma_derivs(s, 1)[0]))
        if any(abs(s - z) < mp.mpf(10) ** -3 for z in zeros):
            continue
        exact = mp.airyai(s, derivative=1) / mp.airyai(s)
        worst_w = max(worst_w, abs(airy_traj.w_at(s) - exact))
    ok = worst_w <= 1e-10 and worst_sigma <= 1e-20
    report(1, ok, f"max|w - Ai'/Ai| = {fmt(worst_w)} (<= 1e-10), max|sigma| = {fmt(worst_sigma)} (<= 1e-20)")
    assert ok


def test_criterion_2_hastings_mcleod_total_integral():
    value = I1(40, Params("-0.25", 0)).value
    err = abs(value - mp.log(2) / 2)
    ok = err <= 1e-6
    report(2, ok, f"|I1(40) - ln2/2| = {fmt(err)} (<= 1e-6)")
    assert ok


def test_criterion_3_total_integral_omega_zero():
    details, ok = [], True
    for alpha in ("0", "0.3", "1"):
        d = i1_decay_check(Params(alpha, 0), nodes=(20, 40, 80))
        good = abs(d.slope + mp.mpf(1.5)) <= 0.3 and abs(d.offset) <= 1e-4
        ok = ok and good
        details.append(f"alpha={alpha}: slope {mp.nstr(d.slope, 4)}, offset {fmt(d.offset)}")
    report(3, ok, "; ".join(details) + " (slope -1.5 +- 0.3, offset <= 1e-4)")
    assert ok


def test_criterion_4_total_integral_omega_positive():
    details, ok = [], True
    for omega in ("1", "2"):
        fit = i1_offset_fit(Params(0, omega))
        good = abs(fit.constant) <= 1e-3
        ok = ok and good
        details.append(f"omega={omega}: offset {fmt(fit.constant)} on {fit.nodes} nodes")
    report(4, ok, "; ".join(details) + " (<= 1e-3)")
    assert ok


def _hard_edge_constant(alpha):
    alpha = mp.mpf(alpha)
    return alpha - mp.log(2) / 24 - zeta_prime_minus_one() + ln_barnes_g(1 + 2 * alpha) - alpha * mp.log(2 * mp.pi)


def test_criterion_5_hamiltonian_integral_omega_zero():
    details, ok = [], True
    for alpha in ("0", "0.3"):
        fit = i2_constant_fit(Params(alpha, 0), window=(-16, -10), nodes=13)
        err = abs(fit.constant - _hard_edge_constant(alpha))
        ok = ok and err <= 1e-3
        details.append(f"alpha={alpha}: |constant - expected| = {fmt(err)}")
        if alpha == "0":
            # ln F_TW = -I2 at alpha = omega = 0, so the constant is -c0.
            details.append(f"|constant + c0| = {fmt(abs(fit.constant + c0()))}")
    report(5, ok, "; ".join(details) + " (<= 1e-3)")
    assert ok


def test_criterion_6_hamiltonian_integral_omega_positive():
    details, ok = [], True
    for label, omega in (("e^(pi/2)", mp.exp(mp.pi / 2)), ("2", mp.mpf(2))):
        p = Params(0, omega)
        beta = p.beta
        expected = mp.re(3 * beta**2 * mp.log(2) - ln_barnes_g(1 + beta) - ln_barnes_g(1 - beta))
        fit = i2_constant_fit(p, window=(-22, -10), nodes=25)
        err = abs(fit.constant - expected)
        ok = ok and err <= 1e-3
        details.append(f"omega={label}: |constant - expected| = {fmt(err)}")
    report(6, ok, "; ".join(details) + " (<= 1e-3)")
    assert ok


def test_criterion_7_identity_suite(hm_traj, mixed_traj, oscillatory_traj, airy_traj):
    failures = []
    trajectories = (hm_traj, mixed_traj, oscillatory_traj, airy_traj)

    drift = max(t.max_drift / t.tol for t in trajectories)
    if drift > 10:
        failures.append(f"first-integral drift {fmt(drift)} tol")

    worst = mp.mpf(0)
    for traj in trajectories:
        lo, hi = mp.mpf(traj.s_min), mp.mpf(traj.s_max)
        for k in range(1, 40):
            s = lo + (hi - lo) * k / 40
            if any(abs(s - pl.location) < mp.mpf("0.05") for pl in traj.poles):
                continue
            res = lemma_residuals(s, traj.params, traj=traj)
            worst = max(worst, max(v / traj.tol for v in res.values()))
    if worst > 100:
        failures.append(f"pointwise identities {fmt(worst)} tol")

    ratios = []
    for alpha, omega, s in (("0.3", "0", "1"), ("0.2", "0.5", "-3")):
        p = Params(alpha, omega)
        coarse = alpha_derivative_residual(s, p, delta="1e-3")
        fine = alpha_derivative_residual(s, p, delta="5e-4")
        ratios.append(coarse / fine)
    if not all(3 < r < 5 for r in ratios):
        failures.append(f"alpha-derivative halving ratios {[fmt(r) for r in ratios]}")

    triples = [("0.3", "0", "-4"), ("0.3", "0", "1"), ("-0.2", "2", "-6"), ("0", "2", "-2"), ("0.2", "0.5", "-3")]
    identity = max(identity_integral_H(s, Params(a, o)) for a, o, s in triples)
    if identity > 1e-6:
        failures.append(f"integral identity {fmt(identity)}")

    sweep = mp.mpf(0)
    for traj in (hm_traj, mixed_traj):
        p = traj.params
        for func, c1, c2, s in ((I1_tilde, 1, 4, -2), (I2, 1, 4, -2), (I3, 1, 4, -2), (I1, -1, -4, 2)):
            kwargs = {} if func is I1 else {"traj": traj}
            a, b = func(s, p, c=c1, **kwargs), func(s, p, c=c2, **kwargs)
            allowed = a.tail_bound + b.tail_bound + a.quad_error + b.quad_error + mp.mpf(10) ** -25
            sweep = max(sweep, abs(a.value - b.value) / allowed)
    if sweep > 1:
        failures.append(f"c-independence {fmt(sweep)} of bound")

    ok = not failures
    detail = (
        f"drift {fmt(drift)} tol, identities {fmt(worst)} tol, d/dalpha ratios {[mp.nstr(r, 3) for r in ratios]}, "
        f"integral identity {fmt(identity)}, c-sweep {fmt(sweep)} of bound"
    )
    report(7, ok, detail if ok else "; ".join(failures))
    assert ok


def test_criterion_8_parametrix_suite():
    cases = [
        ("airy", {}),
        ("bessel", {"two_alpha": 0}),
        ("bessel", {"two_alpha": "0.6"}),
        ("bessel", {"two_alpha": "-0.4"}),
        ("chf", {"alpha": "0.3", "beta": 0.2j}),
        ("chf", {"alpha": "-0.2", "beta": -0.1j}),
    ]
    jump = max(max(jump_residuals(f, prm).values()) for f, prm in cases)
    det = max(det_spread(f, prm)[0] for f, prm in cases)
    corr = mp.mpf(0)
    for nu in (mp.mpf(0), mp.mpf("0.6"), mp.mpf("-0.4")):
        limit = Mat2C(-1 - 4 * nu**2, mp.mpc(0, -2), mp.mpc(0, -2), 1 + 4 * nu**2)
        for angle in ("0", "0.4", "-0.55"):
            got = bessel_first_correction(400 * mp.expjpi(mp.mpf(angle)), nu)
            pairs = zip((got.a, got.b, got.c, got.d), (limit.a, limit.b, limit.c, limit.d))
            corr = max(corr, max(abs(g - e) / abs(e) for g, e in pairs))
    origin = max(bessel_origin_deviation(nu) for nu in ("0", "0.6", "-0.4", "1.4"))
    ok = jump <= 1e-8 and det <= 1e-8 and corr <= 0.1 and origin <= 0.05
    report(
        8,
        ok,
        f"jumps {fmt(jump)} (<= 1e-8), det spread {fmt(det)} (<= 1e-8), "
        f"first correction {fmt(corr)} (<= 0.1), origin exponents {fmt(origin)} (<= 0.05)",
    )
    assert ok


def test_criterion_9_p34_tail_identity():
    details, ok = [], True
    for alpha, omega, t in (("0.3", "0", "2"), ("0.2", "0.5", "3")):
        tail = p34_tail_identity(t, Params(alpha, omega))
        ok = ok and tail.residual <= 1e-8
        details.append(f"(alpha, omega, t) = ({alpha}, {omega}, {t}): residual {fmt(tail.residual)}")
    report(9, ok, "; ".join(details) + " (<= 1e-8)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
