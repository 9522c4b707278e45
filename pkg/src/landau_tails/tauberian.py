"""Exponential Tauberian converter between Laplace and low-energy asymptotics.

The conversion: for a conjugate pair (f, f#) of slowly varying functions and
gamma in [0, 1),

    log Ntilde(t) ~ -t^gamma [f(t)]^(gamma-1)        (t -> inf)
iff
    log N(eta+E) ~ -(1-gamma) (gamma/E)^(gamma/(1-gamma)) f#(E^(1/(gamma-1)))
                                                      (E -> 0+),

with the gamma = 0 boundary case reducing to f(t) log Ntilde(t) -> -1 iff
log N(eta+E) / f#(1/E) -> -1. A log-domain numeric Laplace-Stieltjes
transformer supports round-trip validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .regvar import (
    ConstantFn,
    SlowVar,
    de_bruijn_conjugate,
    slowvar_to_json,
)

__all__ = [
    "LaplaceAsymptote",
    "IdosAsymptote",
    "forward",
    "backward",
    "forward_gamma0",
    "numeric_laplace_stieltjes",
    "log_laplace_stieltjes",
    "roundtrip_check",
    "synthetic_log_idos",
]


@dataclass(frozen=True)
class LaplaceAsymptote:
    """log Ntilde(t) ~ -t^gamma [f(t)]^(gamma-1)."""

    gamma: float
    slow: SlowVar

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")

    def log_transform(self, t: float) -> float:
        if self.gamma == 0.0:
            # degenerate normalization: the pairing is f(t) log Ntilde -> -1
            return -1.0 / self.slow(t)
        return -(t**self.gamma) * self.slow(t) ** (self.gamma - 1.0)


@dataclass(frozen=True)
class IdosAsymptote:
    """log N(eta+E) ~ -(1-gamma)(gamma/E)^(gamma/(1-gamma)) f#(E^(1/(gamma-1)))."""

    eta: float
    gamma: float
    conj: SlowVar

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")

    def log_idos(self, E: float) -> float:
        """The asymptote at energy eta + E, for small E > 0."""
        if E <= 0:
            raise ValueError("E must be positive")
        if self.gamma == 0.0:
            return -self.conj(1.0 / E)
        g = self.gamma
        # guard against overflow at extremely small E: the power factor is
        # exponentiated from its log, the slowly varying argument is clamped
        # (a relative error negligible against the e^700-scale prefactor)
        log_power = (g / (1.0 - g)) * (math.log(g) - math.log(E))
        if log_power > 700.0:
            return -math.inf
        log_arg = math.log(E) / (g - 1.0)  # log of (1/E)^(1/(1-gamma)) -> inf
        arg = math.exp(min(log_arg, 700.0))
        return -(1.0 - g) * math.exp(log_power) * self.conj(arg)


def forward(la: LaplaceAsymptote, eta: float) -> IdosAsymptote:
    """Laplace-side asymptote to energy-side asymptote (gamma > 0)."""
    if la.gamma == 0.0:
        raise ValueError("gamma = 0 is handled by forward_gamma0")
    return IdosAsymptote(eta, la.gamma, de_bruijn_conjugate(la.slow))


def backward(ia: IdosAsymptote) -> LaplaceAsymptote:
    """Energy-side asymptote back to the Laplace side."""
    if ia.gamma == 0.0:
        return LaplaceAsymptote(0.0, de_bruijn_conjugate(ia.conj))
    return LaplaceAsymptote(ia.gamma, de_bruijn_conjugate(ia.conj))


def forward_gamma0(f: SlowVar, eta: float) -> IdosAsymptote:
    """Boundary case: log N(eta+E) ~ -f#(1/E), paired with f(t) log Ntilde -> -1.

    For constant f(t) -> c the distribution function simply has a jump of
    size e^{-1/c} at eta; the conjugate ConstantFn(1/c) encodes that.
    """
    return IdosAsymptote(eta, 0.0, de_bruijn_conjugate(f))


# ---------------------------------------------------------------------------
# numeric Laplace-Stieltjes transform

def log_laplace_stieltjes(log_N: Callable[[float], float], eta: float, t: float,
                          rtol: float = 1e-9) -> float:
    """log Ntilde(t) with Ntilde(t) = t int_eta^inf N(E) e^{-t(E-eta)} dE.

    Works entirely in the log domain (substitution E - eta = e^u) so that
    transforms as small as e^{-10^5} remain computable. log_N takes the
    energy above eta and may return -inf.
    """
    if t <= 0:
        raise ValueError("t must be positive")

    def h(u: float) -> float:
        E = math.exp(u)
        ln = log_N(E)
        if ln == -math.inf:
            return -math.inf
        return ln - t * E + u

    # scan the whole representable range: when log N itself falls off fast
    # the maximizer of h can sit far above the naive e^{-tE} cutoff
    us = np.linspace(-740.0, 690.0, 6000)
    hs = np.array([h(u) for u in us])
    i = int(np.argmax(hs))
    if not math.isfinite(hs[i]):
        raise ValueError("integrand vanishes everywhere (transform divergent or zero)")
    u_star, h_star = float(us[i]), float(hs[i])
    # refine the anchor so h - h_star stays <= 0 near the peak
    refine = minimize_scalar(lambda u: -h(u),
                             bounds=(us[max(i - 1, 0)], us[min(i + 1, len(us) - 1)]),
                             method="bounded")
    if math.isfinite(refine.fun) and -refine.fun > h_star:
        u_star, h_star = float(refine.x), float(-refine.fun)

    def g(u: float) -> float:
        val = h(u) - h_star
        if val <= -745:
            return 0.0
        return math.exp(min(val, 700.0))

    # restrict to where the rescaled integrand is representable: regions with
    # h below h_star - 760 contribute less than e^-745 relative and the grid
    # step of margin on each side keeps the support strictly inside
    step = float(us[1] - us[0])
    support = np.flatnonzero(hs > h_star - 760.0)
    u_lo = max(float(us[support[0]]) - step, -740.0)
    u_hi = min(float(us[support[-1]]) + step, 690.0)
    total = 0.0
    for lo, hi in [(u_lo, u_star), (u_star, u_hi)]:
        if hi <= lo:
            continue
        v, _ = quad(g, lo, hi, limit=500)
        total += v
    return math.log(t) + h_star + math.log(total)


def numeric_laplace_stieltjes(N: Callable[[float], float], eta: float, t: float,
                              rtol: float = 1e-9) -> float:
    """Ntilde(t) in the linear domain (N evaluated at absolute energies)."""

    def log_N(E: float) -> float:
        val = N(eta + E)
        if val < 0:
            raise ValueError("N must be non-negative")
        return math.log(val) if val > 0 else -math.inf

    return math.exp(log_laplace_stieltjes(log_N, eta, t, rtol))


def synthetic_log_idos(ia: IdosAsymptote) -> Callable[[float], float]:
    """log N for the exact exponential of an energy-side asymptote.

    N(eta+E) = exp(asymptote) clamped to be a distribution function:
    non-positive log, set to 0 (N = 1) once the asymptote leaves its
    validity domain or turns non-negative.
    """

    def log_N(E: float) -> float:
        if E <= 0:
            return -math.inf
        try:
            val = ia.log_idos(E)
        except ValueError:
            return 0.0  # beyond the small-E validity window: N = 1
        return min(val, 0.0)

    return log_N


def roundtrip_check(la: LaplaceAsymptote, eta: float, t_grid) -> dict:
    """Build the exact synthetic N from the asymptote and transform it back.

    For gamma > 0 reports |log Ntilde_num(t) / log_asymptote(t) - 1|; for
    gamma = 0 reports |f(t) log Ntilde_num(t) + 1|.
    """
    if la.gamma == 0.0:
        ia = forward_gamma0(la.slow, eta)
    else:
        ia = forward(la, eta)
    log_N = synthetic_log_idos(ia)
    deviations = []
    for t in t_grid:
        lt = log_laplace_stieltjes(log_N, eta, t)
        if la.gamma == 0.0:
            deviations.append(abs(la.slow(t) * lt + 1.0))
        else:
            deviations.append(abs(lt / la.log_transform(t) - 1.0))
    try:
        f_json = slowvar_to_json(la.slow)
    except TypeError:
        f_json = {"kind": "opaque"}
    return {
        "gamma": la.gamma,
        "f": f_json,
        "t_grid": list(map(float, t_grid)),
        "deviations": deviations,
        "max_deviation": max(deviations),
    }


def chernoff_bound_holds(log_N: Callable[[float], float], conj: SlowVar,
                         eps: float, E: float, eta: float = 0.0) -> bool:
    """N(E) <= e^{eps f#(1/E)} Ntilde(eps f#(1/E)/E), the Chernoff direction."""
    fsharp = conj(1.0 / E)
    t = eps * fsharp / E
    log_rhs = eps * fsharp + log_laplace_stieltjes(log_N, eta, t)
    return log_N(E) <= log_rhs + 1e-9
