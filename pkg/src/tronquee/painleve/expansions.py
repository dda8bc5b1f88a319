"""Formal expansions of the Hamiltonian at +/- infinity.

With sigma = H the sigma-form constraint

    (sigma'')^2 + 4 sigma' (sigma'^2 - s sigma' + sigma) = 4 alpha^2

is solved order by order:

* s -> +inf:  sigma = s^(1/2) sum_k h_k x^k,  x = s^(-3/2),  h_0 = -2 alpha;
* s -> -inf (pole-free member):  sigma = s^2 sum_k g_k y^k,  y = s^(-3),
  g_0 = 1/4;
* the Riccati variable w = -s^(1/2) sum_k W_k x^k at +inf;
* the exponentially small solution of the linearised third-order equation
  at +inf, exp(-(4/3) s^(3/2)) sum_j m_j s^(mu_0 - 3j/2), mu_0 = -1 - 3 alpha.

All series are divergent; evaluation uses optimal truncation (stop before
the smallest term) unless an explicit order is requested.  Coefficients are
cached per (alpha, precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

__all__ = [
    "plus_sigma_coeffs",
    "plus_w_coeffs",
    "mode_coeffs",
    "minus_sigma_coeffs",
    "SeriesValue",
    "plus_sigma",
    "plus_w",
    "mode_function",
    "minus_sigma",
    "mode_amplitude_unit",
]

_MAX_TERMS = 160


def _key(alpha) -> str:
    return mp.nstr(mp.mpf(alpha), 80)


@lru_cache(maxsize=64)
def _plus_sigma_cached(alpha_key: str, prec: int, count: int):
    with mp.workprec(prec + 32):
        alpha = mp.mpf(alpha_key)
        if alpha == 0:
            return tuple([mp.mpf(0)] * count)
        half = mp.mpf(1) / 2
        h = [-2 * alpha]
        A = [h[0]]
        B = [half * h[0]]
        C = [-half * B[0]]
        B2 = [B[0] ** 2]
        B3 = [B2[0] * B[0]]
        for k in range(1, count):
            # Residual of x^2 C^2 + 4 x B^3 - 4 B^2 + 4 A B - 4 alpha^2 at
            # order k with h_k = 0; h_k enters with coefficient -4 alpha.
            res = mp.mpf(0)
            if k >= 2:
                res += mp.fsum(C[i] * C[k - 2 - i] for i in range(k - 1))
            res += 4 * B3[k - 1]
            b2_partial = mp.fsum(B[i] * B[k - i] for i in range(1, k))
            res -= 4 * b2_partial
            res += 4 * mp.fsum(A[i] * B[k - i] for i in range(1, k))
            hk = res / (4 * alpha)
            bk = (half - mp.mpf(3 * k) / 2) * hk
            h.append(hk)
            A.append(hk)
            B.append(bk)
            C.append((-half - mp.mpf(3 * k) / 2) * bk)
            B2.append(b2_partial + 2 * B[0] * bk)
            B3.append(mp.fsum(B2[i] * B[k - i] for i in range(k + 1)))
        return tuple(+v for v in h)


def plus_sigma_coeffs(alpha, count: int):
    """h_0..h_{count-1} of sigma = sum_k h_k s^(1/2 - 3k/2) at +inf."""
    return _plus_sigma_cached(_key(alpha), mp.mp.prec, count)


@lru_cache(maxsize=64)
def _plus_w_cached(alpha_key: str, prec: int, count: int):
    with mp.workprec(prec + 32):
        half = mp.mpf(1) / 2
        h = _plus_sigma_cached(alpha_key, prec, count)
        B = [(half - mp.mpf(3 * k) / 2) * h[k] for k in range(count)]
        W = [mp.mpf(1)]
        for k in range(1, count):
            d_prev = (half - mp.mpf(3 * (k - 1)) / 2) * W[k - 1]
            cross = mp.fsum(W[i] * W[k - i] for i in range(1, k))
            W.append((d_prev - 2 * B[k - 1] - cross) / 2)
        return tuple(+v for v in W)


def plus_w_coeffs(alpha, count: int):
    """W_0..W_{count-1} of w = -sum_k W_k s^(1/2 - 3k/2) at +inf."""
    return _plus_w_cached(_key(alpha), mp.mp.prec, count)


@lru_cache(maxsize=64)
def _mode_cached(alpha_key: str, prec: int, count: int, h_count: int):
    with mp.workprec(prec + 32):
        alpha = mp.mpf(alpha_key)
        half = mp.mpf(1) / 2
        h = list(_plus_sigma_cached(alpha_key, prec, h_count)) + [mp.mpf(0)] * (count + 3)
        B = [(half - mp.mpf(3 * k) / 2) * h[k] for k in range(len(h))]
        mu0 = -1 - 3 * alpha
        m = [mp.mpf(1)]
        for n in range(1, count):
            acc = mp.mpf(0)
            for j in range(n):
                k = n - j
                mu = mu0 - mp.mpf(3 * j) / 2
                t = -24 * B[k] + 12 * mu * B[k - 1]
                if k == 1:
                    t -= (4 * mu + 1) * (mu - half) + 2 * mu * (mu - 1)
                elif k == 2:
                    t += mu * (mu - 1) * (mu - 2)
                acc += m[j] * t
            m.append(acc / (12 * n))
        return tuple(+v for v in m), +mu0


def mode_coeffs(alpha, count: int, h_count: int | None = None):
    """(m_j, mu_0) of the exponentially small mode at +inf, m_0 = 1.

    ``h_count`` fixes how many sigma coefficients enter the linearisation;
    it defaults to ``count + 2`` which makes the mode series exact to the
    returned order.
    """
    h_count = count + 2 if h_count is None else h_count
    return _mode_cached(_key(alpha), mp.mp.prec, count, h_count)


@lru_cache(maxsize=64)
def _minus_sigma_cached(alpha_key: str, prec: int, count: int):
    with mp.workprec(prec + 32):
        alpha = mp.mpf(alpha_key)
        g = [mp.mpf(1) / 4]
        P = [2 * g[0]]
        R = [2 * g[0]]
        P2 = [P[0] ** 2]
        for k in range(1, count):
            # y R^2 + 4 (P^3 - P^2 + P G) - 4 alpha^2 y at order k, g_k = 0;
            # g_k enters with coefficient 2.
            res = mp.fsum(R[i] * R[k - 1 - i] for i in range(k))
            if k == 1:
                res -= 4 * alpha**2
            p2_partial = mp.fsum(P[i] * P[k - i] for i in range(1, k))
            p3_partial = mp.fsum(P2[i] * P[k - i] for i in range(1, k)) + P[0] * p2_partial
            pg_partial = mp.fsum(P[i] * g[k - i] for i in range(1, k))
            res += 4 * (p3_partial - p2_partial + pg_partial)
            gk = -res / 2
            pk = (2 - 3 * k) * gk
            g.append(gk)
            P.append(pk)
            R.append((2 - 3 * k) * (1 - 3 * k) * gk)
            P2.append(p2_partial + 2 * P[0] * pk)
        return tuple(+v for v in g)


def minus_sigma_coeffs(alpha, count: int):
    """g_0..g_{count-1} of sigma = sum_k g_k s^(2 - 3k) at -inf (omega = 0)."""
    return _minus_sigma_cached(_key(alpha), mp.mp.prec, count)


@dataclass(frozen=True)
class SeriesValue:
    """Value and first two derivatives of a truncated series.

    ``terms`` is the number of terms summed and ``error`` the magnitude of the
    first omitted term (scaled to the same derivative as ``values[0]``).
    """

    values: tuple
    terms: int
    error: object


def _truncation(magnitudes, order):
    """Number of terms to keep: ``order`` or optimal truncation."""
    if order is not None:
        return min(order, len(magnitudes) - 1)
    nonzero = [k for k, m in enumerate(magnitudes) if m != 0]
    if not nonzero:
        return len(magnitudes)
    if nonzero[-1] < len(magnitudes) - 8:
        # Terminating series: keep every term, the remainder is exactly zero.
        return nonzero[-1] + 1
    best = 0
    for k in range(1, len(magnitudes)):
        if magnitudes[k] == 0:
            continue
        if magnitudes[best] == 0 or magnitudes[k] < magnitudes[best]:
            best = k
        elif k > best + 3:
            break
    return best


def _power_series(coeffs, e0, step, s, order):
    """sum_k c_k s^(e0 + step k) with derivatives 0..2 and truncation."""
    exps = [e0 + step * k for k in range(len(coeffs))]
    mags = [abs(c) * abs(s) ** e for c, e in zip(coeffs, exps)]
    n = _truncation(mags, order)
    vals = [mp.mpf(0)] * 3
    for c, e in zip(coeffs[:n], exps[:n]):
        t = c * s**e
        vals[0] += t
        vals[1] += e * t / s
        vals[2] += e * (e - 1) * t / (s * s)
    error = mags[n] if n < len(mags) else mp.mpf(0)
    return SeriesValue(tuple(vals), n, error)


def plus_sigma(alpha, s, order: int | None = None, count: int = _MAX_TERMS) -> SeriesValue:
    """Truncated +inf expansion of (sigma, sigma', sigma'') at s > 0."""
    s = mp.mpf(s)
    coeffs = plus_sigma_coeffs(alpha, count)
    if all(c == 0 for c in coeffs):
        return SeriesValue((mp.mpf(0),) * 3, 0, mp.mpf(0))
    return _power_series(coeffs, mp.mpf(1) / 2, -mp.mpf(3) / 2, s, order)


def plus_w(alpha, s, order: int | None = None, count: int = _MAX_TERMS) -> SeriesValue:
    """Truncated +inf expansion of (w, w', w'') at s > 0."""
    s = mp.mpf(s)
    coeffs = [-c for c in plus_w_coeffs(alpha, count)]
    return _power_series(coeffs, mp.mpf(1) / 2, -mp.mpf(3) / 2, s, order)


def minus_sigma(alpha, s, order: int | None = None, count: int = _MAX_TERMS) -> SeriesValue:
    """Truncated -inf expansion of (sigma, sigma', sigma'') for omega = 0, s < 0."""
    s = mp.mpf(s)
    coeffs = minus_sigma_coeffs(alpha, count)
    # Integer exponents: s^e is well defined for negative s.
    exps = [2 - 3 * k for k in range(len(coeffs))]
    mags = [abs(c) * abs(s) ** e for c, e in zip(coeffs, exps)]
    n = _truncation(mags, order)
    vals = [mp.mpf(0)] * 3
    for c, e in zip(coeffs[:n], exps[:n]):
        t = c * s**e
        vals[0] += t
        vals[1] += e * t / s
        vals[2] += e * (e - 1) * t / (s * s)
    error = mags[n] if n < len(mags) else mp.mpf(0)
    return SeriesValue(tuple(vals), n, error)


def mode_function(alpha, s, count: int = 40) -> SeriesValue:
    """Exponentially small mode f(s) = E(s) sum_j m_j s^(mu_j) and f', f''.

    E(s) = exp(-(4/3) s^(3/2)), mu_j = mu_0 - 3j/2.  Derivatives are exact
    for each term:

        (E s^mu)'  = E (mu s^(mu-1) - 2 s^(mu+1/2)),
        (E s^mu)'' = E (4 s^(mu+1) - (4 mu + 1) s^(mu-1/2) + mu (mu-1) s^(mu-2)).
    """
    s = mp.mpf(s)
    m, mu0 = mode_coeffs(alpha, count)
    mags = [abs(c) * s ** (-mp.mpf(3 * j) / 2) for j, c in enumerate(m)]
    n = _truncation(mags, None)
    big_e = mp.exp(-mp.mpf(4) / 3 * s**1.5)
    half = mp.mpf(1) / 2
    vals = [mp.mpf(0)] * 3
    for j in range(n):
        mu = mu0 - mp.mpf(3 * j) / 2
        c = m[j]
        vals[0] += c * s**mu
        vals[1] += c * (mu * s ** (mu - 1) - 2 * s ** (mu + half))
        vals[2] += c * (4 * s ** (mu + 1) - (4 * mu + 1) * s ** (mu - half) + mu * (mu - 1) * s ** (mu - 2))
    error = big_e * (mags[n] if n < len(mags) else 0) * s**mu0
    return SeriesValue(tuple(big_e * v for v in vals), n, error)


def mode_amplitude_unit(alpha):
    """C_alpha / 2 with C_alpha = Gamma(2 alpha + 1) / (2^(2 + 6 alpha) pi).

    The seed adds (kappa - omega) * mode_amplitude_unit(alpha) * f(s); with
    this normalisation sigma' carries the term
    -(kappa - omega) C_alpha s^(mu_0 + 1/2) E(s) to leading order.
    """
    alpha = mp.mpf(alpha)
    return mp.gamma(2 * alpha + 1) / (2 ** (2 + 6 * alpha) * mp.pi) / 2
