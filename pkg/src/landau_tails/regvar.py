"""Calculus of slowly and regularly varying functions.

Symbolic-first: the closed families (iterated-log products, exp-log-power,
constants) admit exact de Bruijn conjugation and asymptotic inversion.
Everything outside the grammar falls back to Opaque wrappers backed by
fixed-point iteration or root finding.

Conventions for the rapid-variation boundary cases:
    c^(+inf) = 0, 1, inf   for c < 1, c = 1, c > 1
    c^(-inf) = inf, 1, 0   for c < 1, c = 1, c > 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from scipy.optimize import brentq

__all__ = [
    "SlowVar",
    "IterLogProduct",
    "ExpLogPower",
    "ConstantFn",
    "OpaqueSlowVar",
    "RegVarFn",
    "ConjugateError",
    "de_bruijn_conjugate",
    "verify_conjugate_pair",
    "asymptotic_inverse",
    "potter_check",
    "rapid_power",
    "pow_slowvar",
    "scale_slowvar",
    "compose_power",
    "slowvar_to_json",
    "slowvar_from_json",
    "regvar_to_json",
    "regvar_from_json",
]


class ConjugateError(RuntimeError):
    """Fixed-point iteration for an Opaque conjugate failed to converge."""

    def __init__(self, t: float, iterations: int):
        super().__init__(
            f"de Bruijn fixed point did not converge at t={t:g} "
            f"after {iterations} iterations"
        )
        self.t = t
        self.iterations = iterations


def _iterated_log(t: float, j: int) -> float:
    for _ in range(j):
        t = math.log(t)
    return t


def _iterated_exp(x: float, j: int) -> float:
    for _ in range(j):
        x = math.exp(x)
    return x


class SlowVar:
    """Base class for slowly varying functions (index-0 regular variation)."""

    t_min: float = 0.0

    def __call__(self, t: float) -> float:
        raise NotImplementedError

    def _check_domain(self, t: float) -> None:
        if t <= self.t_min:
            raise ValueError(
                f"{type(self).__name__} not evaluable at t={t:g} "
                f"(validity threshold {self.t_min:g})"
            )


@dataclass(frozen=True)
class IterLogProduct(SlowVar):
    """a0 * prod_j (log_j t)^{a_j}, log_j the j-times iterated logarithm."""

    a0: float
    exps: tuple[float, ...] = ()

    def __post_init__(self):
        if self.a0 <= 0:
            raise ValueError("a0 must be positive")
        object.__setattr__(self, "exps", tuple(self.exps))

    @property
    def t_min(self) -> float:
        # all iterated logs must exceed 1
        return _iterated_exp(1.0, len(self.exps)) if self.exps else 0.0

    def __call__(self, t: float) -> float:
        self._check_domain(t)
        out = self.a0
        x = t
        for a in self.exps:
            x = math.log(x)
            if a != 0.0:
                out *= x**a
        return out


@dataclass(frozen=True)
class ExpLogPower(SlowVar):
    """exp[(log t)^a] with a in (0, 1)."""

    a: float
    t_min: float = field(default=math.e, init=False)

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ValueError("exponent a must lie in (0, 1)")

    def __call__(self, t: float) -> float:
        self._check_domain(t)
        return math.exp(math.log(t) ** self.a)


@dataclass(frozen=True)
class ConstantFn(SlowVar):
    c: float
    t_min: float = field(default=0.0, init=False)

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("constant must be positive")

    def __call__(self, t: float) -> float:
        return self.c


@dataclass(frozen=True)
class OpaqueSlowVar(SlowVar):
    """Numeric evaluator with a validity threshold; not serializable."""

    fn: Callable[[float], float]
    t_min: float
    label: str = "opaque"

    def __call__(self, t: float) -> float:
        self._check_domain(t)
        return self.fn(t)


@dataclass(frozen=True)
class RegVarFn:
    """F(t) = t^gamma * f(t) with f slowly varying.

    ``gamma`` may be +-inf for rapid variation, in which case ``slow`` is
    absent and ``evaluator`` supplies the values.
    """

    gamma: float
    slow: SlowVar | None = None
    evaluator: Callable[[float], float] | None = None

    def __post_init__(self):
        if math.isinf(self.gamma):
            if self.evaluator is None:
                raise ValueError("rapidly varying RegVarFn needs an evaluator")
        elif self.slow is None:
            raise ValueError("finite-index RegVarFn needs a slowly varying part")

    @property
    def t_min(self) -> float:
        return self.slow.t_min if self.slow is not None else 0.0

    def __call__(self, t: float) -> float:
        if self.evaluator is not None:
            return self.evaluator(t)
        return t**self.gamma * self.slow(t)


# ---------------------------------------------------------------------------
# grammar-closure helpers

def pow_slowvar(f: SlowVar, q: float) -> SlowVar:
    """f(t)^q, staying in the symbolic grammar where possible."""
    if q == 0:
        return ConstantFn(1.0)
    if isinstance(f, ConstantFn):
        return ConstantFn(f.c**q)
    if isinstance(f, IterLogProduct):
        return IterLogProduct(f.a0**q, tuple(a * q for a in f.exps))
    return OpaqueSlowVar(lambda t, f=f, q=q: f(t) ** q, f.t_min, f"({f})^{q:g}")


def scale_slowvar(f: SlowVar, c: float) -> SlowVar:
    """c * f(t)."""
    if c <= 0:
        raise ValueError("scale factor must be positive")
    if isinstance(f, ConstantFn):
        return ConstantFn(c * f.c)
    if isinstance(f, IterLogProduct):
        return IterLogProduct(c * f.a0, f.exps)
    return OpaqueSlowVar(lambda t, f=f, c=c: c * f(t), f.t_min, f"{c:g}*({f})")


def compose_power(f: SlowVar, p: float) -> SlowVar:
    """Leading asymptotic form of t -> f(t^p) for p > 0.

    For an iterated-log product only the outermost log scales by p; the
    deeper iterated logs are unchanged to leading order.
    """
    if p <= 0:
        raise ValueError("power must be positive")
    if isinstance(f, ConstantFn) or p == 1.0:
        return f
    if isinstance(f, IterLogProduct):
        a1 = f.exps[0] if f.exps else 0.0
        return IterLogProduct(f.a0 * p**a1, f.exps)
    return OpaqueSlowVar(lambda t, f=f, p=p: f(t**p), f.t_min ** (1.0 / p), f"({f})(t^{p:g})")


# ---------------------------------------------------------------------------
# de Bruijn conjugation

_FIXED_POINT_MAX_ITER = 200
_FIXED_POINT_RTOL = 1e-6


def _fixed_point_conjugate_at(f: SlowVar, t: float,
                              max_iter: int = _FIXED_POINT_MAX_ITER,
                              rtol: float = _FIXED_POINT_RTOL) -> float:
    # iterate y <- 1/f(t*y), starting from 1/f(t); contracts for the
    # families in scope (validated by tests, not proven)
    y = 1.0 / f(t)
    for _ in range(max_iter):
        y_next = 1.0 / f(t * y)
        if abs(y_next - y) <= rtol * abs(y_next):
            return y_next
        y = y_next
    raise ConjugateError(t, max_iter)


def de_bruijn_conjugate(f: SlowVar) -> SlowVar:
    """The de Bruijn conjugate f#, with f(t) f#(t f(t)) -> 1.

    Iterated-log products satisfy the simple criterion f(t f(t)) ~ f(t),
    hence f# = 1/f exactly (as an asymptotic-equivalence class); constants
    conjugate to their reciprocals. Anything else gets an Opaque conjugate
    computed pointwise by fixed-point iteration.
    """
    if isinstance(f, ConstantFn):
        return ConstantFn(1.0 / f.c)
    if isinstance(f, IterLogProduct):
        return IterLogProduct(1.0 / f.a0, tuple(-a for a in f.exps))
    t_min = max(f.t_min * 2.0, 2.0)
    return OpaqueSlowVar(
        lambda t, f=f: _fixed_point_conjugate_at(f, t), t_min, "fixed-point conjugate"
    )


def verify_conjugate_pair(f: SlowVar, g: SlowVar, probes: Sequence[float]) -> float:
    """Max residual of the defining relations over the probe points."""
    worst = 0.0
    for t in probes:
        worst = max(worst, abs(f(t) * g(t * f(t)) - 1.0))
        worst = max(worst, abs(g(t) * f(t * g(t)) - 1.0))
    return worst


# ---------------------------------------------------------------------------
# asymptotic inversion

def asymptotic_inverse(F: RegVarFn, delta: float = 1.0) -> RegVarFn:
    """An asymptotic inverse G of F, i.e. G(F(t)) ~ F(G(t)) ~ t.

    For F(t) = t^{gamma*delta} (f(t^delta))^gamma with gamma, delta > 0:
        G(t) = t^{1/(gamma*delta)} (f#(t^{1/gamma}))^{1/delta}.
    For slowly varying F growing to infinity (index 0) the inverse is
    rapidly varying; it is returned as an Opaque evaluator backed by
    root finding on log t.
    """
    if math.isinf(F.gamma):
        raise ValueError("inverting a rapidly varying function is not supported")
    gamma = F.gamma / delta
    if gamma < 0:
        raise ValueError("asymptotic inverse requires non-negative index")
    if gamma == 0.0:
        return _rapid_inverse(F)
    base = F.slow if delta == 1.0 else compose_power(F.slow, 1.0 / delta)
    conj = de_bruijn_conjugate(pow_slowvar(base, gamma))
    slow = pow_slowvar(compose_power(conj, 1.0 / gamma), 1.0 / delta)
    return RegVarFn(1.0 / F.gamma, slow)


def _rapid_inverse(F: RegVarFn) -> RegVarFn:
    def inv(t: float) -> float:
        lo = math.log(max(F.t_min * 1.0000001, 2.0))
        hi = lo + 1.0
        for _ in range(2000):
            if F(math.exp(hi)) >= t:
                break
            hi += max(1.0, 0.5 * (hi - lo))
        else:
            raise ValueError(f"could not bracket inverse at t={t:g}")
        return math.exp(brentq(lambda u: F(math.exp(u)) - t, lo, hi, xtol=1e-12))

    return RegVarFn(math.inf, evaluator=inv)


# ---------------------------------------------------------------------------
# Potter bounds and rapid-variation conventions

def potter_check(f: SlowVar, A: float, delta: float,
                 pairs: Sequence[tuple[float, float]]) -> bool:
    """True iff f(t)/f(s) <= A*max{(t/s)^delta, (t/s)^-delta} on all pairs."""
    if A <= 1 or delta <= 0:
        raise ValueError("Potter bounds require A > 1 and delta > 0")
    for t, s in pairs:
        ratio = t / s
        if f(t) / f(s) > A * max(ratio**delta, ratio**-delta):
            return False
    return True


def rapid_power(c: float, sign: float) -> float:
    """c^(+inf) or c^(-inf) under the rapid-variation conventions."""
    if c <= 0:
        raise ValueError("base must be positive")
    if not math.isinf(sign):
        raise ValueError("sign must be +inf or -inf")
    if c == 1.0:
        return 1.0
    above_one = c > 1.0
    if sign > 0:
        return math.inf if above_one else 0.0
    return 0.0 if above_one else math.inf


# ---------------------------------------------------------------------------
# JSON grammar

def slowvar_to_json(f: SlowVar) -> dict:
    if isinstance(f, IterLogProduct):
        return {"kind": "iterlog", "a0": f.a0, "exps": list(f.exps)}
    if isinstance(f, ExpLogPower):
        return {"kind": "explogpow", "a": f.a}
    if isinstance(f, ConstantFn):
        return {"kind": "const", "c": f.c}
    raise TypeError(f"{type(f).__name__} is not serializable")


def slowvar_from_json(obj: dict) -> SlowVar:
    kind = obj.get("kind")
    if kind == "iterlog":
        return IterLogProduct(float(obj["a0"]), tuple(float(a) for a in obj["exps"]))
    if kind == "explogpow":
        return ExpLogPower(float(obj["a"]))
    if kind == "const":
        return ConstantFn(float(obj["c"]))
    raise ValueError(f"unknown slowly varying kind: {kind!r}")


def regvar_to_json(F: RegVarFn) -> dict:
    if math.isinf(F.gamma):
        raise TypeError("rapidly varying functions are not serializable")
    return {"kind": "regvar", "gamma": F.gamma, "slow": slowvar_to_json(F.slow)}


def regvar_from_json(obj: dict) -> RegVarFn:
    if obj.get("kind") != "regvar":
        raise ValueError("expected a regvar object")
    return RegVarFn(float(obj["gamma"]), slowvar_from_json(obj["slow"]))
