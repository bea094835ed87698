"""Closed-form tail and expectation bounds, evaluated in the log2 domain.

Every calculator returns a :class:`BoundReport`.  Bounds above 1 are kept as
they are and flagged ``vacuous``; failed side conditions are recorded in
``reasons`` rather than silently clamped.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Any

import mpmath

from .percolation import Estimate

GOLDEN_CONJUGATE = (math.sqrt(5) - 1) / 2
LOG2_GOLDEN_CONJUGATE = math.log2(GOLDEN_CONJUGATE)


class DomainError(ValueError):
    """Inputs outside the domain where a bound is defined."""


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict[str, Any]
    log2_value: float
    preconditions_met: bool = True
    reasons: tuple[str, ...] = ()
    sense: str = "upper"  # "upper": quantity <= bound, "lower": quantity >= bound
    quantity: str = "probability"
    compared_against: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def value(self) -> float:
        try:
            return 2.0 ** self.log2_value
        except OverflowError:
            return math.inf

    @property
    def vacuous(self) -> bool:
        return self.sense == "upper" and self.quantity == "probability" and self.log2_value > 0

    @property
    def verdict(self) -> str | None:
        return None if self.compared_against is None else self.compared_against["verdict"]

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        out["reasons"] = list(self.reasons)
        out["value"] = self.value
        out["vacuous"] = self.vacuous
        if self.compared_against is None:
            del out["compared_against"]
        return _jsonable(out)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _positive_int(name: str, x) -> int:
    if isinstance(x, bool) or int(x) != x or x < 1:
        raise DomainError(f"{name} must be a positive integer, got {x!r}")
    return int(x)


def er_tail_bound(k: int, d: int, strict: bool = False) -> BoundReport:
    """Union bound d^k * 2^(-k^2/4d) on Pr[chi(G(k,1/2)) <= d].

    The monochromatic-edge count behind it needs d < k/2; outside that range
    the report is flagged, or ``DomainError`` is raised when ``strict``.
    """
    k, d = _positive_int("k", k), _positive_int("d", d)
    reasons = []
    if not 2 * d < k:
        if strict:
            raise DomainError(f"requires d < k/2, got k={k}, d={d}")
        reasons.append(f"d < k/2 fails (k={k}, d={d})")
    log2 = k * math.log2(d) - k * k / (4 * d)
    return BoundReport("er_tail", {"k": k, "d": d}, log2, not reasons, tuple(reasons))


def union_tail_bound(n: int, k: int, d: int) -> BoundReport:
    """d^n * 2^(-k^2/4d) on Pr[chi(G_1/2) <= d] for an n-vertex graph with chi = k."""
    n, k, d = _positive_int("n", n), _positive_int("k", k), _positive_int("d", d)
    if not d <= k <= n:
        raise DomainError(f"requires d <= k <= n, got n={n}, k={k}, d={d}")
    log2 = n * math.log2(d) - k * k / (4 * d)
    return BoundReport("union_tail", {"n": n, "k": k, "d": d}, log2)


def frankl_tail_bound(t: int) -> BoundReport:
    """((sqrt 5 - 1)/2)^t, the tail bound for graphs t-far from d^3-colourable."""
    if isinstance(t, bool) or int(t) != t or t < 0:
        raise DomainError(f"t must be a non-negative integer, got {t!r}")
    t = int(t)
    return BoundReport("frankl_tail", {"t": t}, t * LOG2_GOLDEN_CONJUGATE)


def item2_threshold(k: int, d: int) -> int:
    """ceil(k(k - d^3) / (2 d^3)): monochromatic edges forced in any d^3-colouring."""
    c = d**3
    return max(0, math.ceil(Fraction(k * (k - c), 2 * c)))


def thm_item2_bound(k: int, d: int) -> BoundReport:
    k, d = _positive_int("k", k), _positive_int("d", d)
    if d**3 > k:
        raise DomainError(f"requires d <= k^(1/3), got k={k}, d={d}")
    t_low = item2_threshold(k, d)
    inner = frankl_tail_bound(t_low)
    return BoundReport("thm_item2", {"k": k, "d": d}, inner.log2_value,
                       details={"t_low": t_low})


def alpha_tail_bound(n: int, k: int, C: float, p: float, d: int) -> BoundReport:
    """2^(-pkn / (8 C d^2)) on Pr[alpha(G_p) >= n/d] when alpha(G) <= C n / k.

    The value is returned whatever happens to the side condition
    d <= pk / (16 C ln(pk)); its status is recorded on the report.
    """
    for name, x in (("n", n), ("k", k), ("C", C), ("p", p), ("d", d)):
        if x <= 0:
            raise DomainError(f"{name} must be positive, got {x!r}")
    if p > 1:
        raise DomainError(f"p must be at most 1, got {p!r}")
    reasons = []
    if C < 1:
        reasons.append(f"C >= 1 fails (C={C})")
    pk = float(p) * k
    if pk <= 1:
        reasons.append(f"pk > 1 fails (pk={pk})")
        limit = None
    else:
        limit = pk / (16 * C * math.log(pk))
        if d > limit:
            reasons.append(f"d <= pk/(16 C ln pk) = {limit:.6g} fails (d={d})")
    log2 = -float(p) * k * n / (8 * C * d * d)
    return BoundReport("alpha_tail", {"n": n, "k": k, "C": C, "p": p, "d": d}, log2,
                       not reasons, tuple(reasons), details={"d_limit": limit})


def expectation_lower_bounds(k: int, C: float | None = None, p: float | None = None) -> list[BoundReport]:
    """Lower bounds on E[chi(G_p)]: sqrt(k) at p = 1/2, and pk/(32 C ln(pk)) when pk > 1."""
    k = _positive_int("k", k)
    out = [BoundReport("sqrt_k", {"k": k}, 0.5 * math.log2(k), sense="lower",
                       quantity="expectation")]
    if C is not None and p is not None:
        if C <= 0 or not 0 < p <= 1:
            raise DomainError(f"need C > 0 and 0 < p <= 1, got C={C}, p={p}")
        pk = float(p) * k
        if pk > 1:
            value = pk / (32 * C * math.log(pk))
            out.append(BoundReport("alpha_expectation", {"k": k, "C": C, "p": p},
                                   math.log2(value), sense="lower", quantity="expectation"))
    return out


def _log2_exact(x: Fraction):
    if x <= 0:
        return -mpmath.inf
    with mpmath.workdps(60):
        return mpmath.log(x.numerator, 2) - mpmath.log(x.denominator, 2)


def _log2_float(x: float):
    if x <= 0:
        return -mpmath.inf
    with mpmath.workdps(60):
        return mpmath.log(mpmath.mpf(x), 2)


def verify_bound(report: BoundReport, empirical, quantity: str | None = None) -> str:
    """"holds" or "violated".

    Exact values are compared directly.  For an :class:`Estimate` an upper
    bound is only violated when the whole interval lies above it (a lower
    bound when the whole interval lies below it).
    """
    if isinstance(empirical, Estimate):
        kind = empirical.quantity
        side = empirical.ci_low if report.sense == "upper" else empirical.ci_high
        lhs = _log2_float(side)
    else:
        kind = quantity or report.quantity
        if isinstance(empirical, float):
            lhs = _log2_float(empirical)
        else:
            exact = Fraction(empirical)
            if kind != report.quantity:
                raise ValueError(f"cannot compare a {kind} against a {report.quantity} bound")
            if float(report.log2_value).is_integer() and abs(report.log2_value) < 1e6:
                # dyadic bound: decide in exact rational arithmetic
                bound = Fraction(2) ** int(report.log2_value)
                ok = exact <= bound if report.sense == "upper" else exact >= bound
                return "holds" if ok else "violated"
            lhs = _log2_exact(exact)
    if kind != report.quantity:
        raise ValueError(f"cannot compare a {kind} against a {report.quantity} bound")
    with mpmath.workdps(60):
        rhs = mpmath.mpf(report.log2_value)
        ok = lhs <= rhs if report.sense == "upper" else lhs >= rhs
    return "holds" if ok else "violated"


def compare(report: BoundReport, empirical, quantity: str | None = None) -> BoundReport:
    """Copy of ``report`` with the comparison against ``empirical`` attached."""
    verdict = verify_bound(report, empirical, quantity)
    if isinstance(empirical, Estimate):
        shown: Any = empirical.to_json()
    elif isinstance(empirical, float):
        shown = empirical
    else:
        fr = Fraction(empirical)
        shown = {"exact": str(fr), "decimal": float(fr)}
    return replace(report, compared_against={"empirical": shown, "verdict": verdict})
