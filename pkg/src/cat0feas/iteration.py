"""Picard iteration, explicit asymptotic-regularity rates, and certification.

The rate formulas are uniform: they depend only on a bound b on the distance
from the start to a fixed point (and, for the projection-gap rate, on a bound
M to the lifted best pair).  With

    k_b(eps) = ceil(2 b / eps)

the averaged map (1-lam) T1 + lam T2 of two quadratically firmly nonexpansive
maps satisfies d(x_n, x_{n+1}) <= eps for every

    n >= k_b(eps) * ceil(2 b (1 + 2^{k_b(eps)}) / eps) + 1,

and for averaged projections the gap d(P_A x_n, P_B x_n) is within eps of the
set distance once n >= floor(64 M^2 b / (eps^4 lam (1-lam))) + 2.

All rate arithmetic is exact: float arguments are read as the decimal literal
of their shortest repr, so floor/ceil at decimal boundaries (eps = 0.1, ...)
match hand arithmetic, and the power 2^k is an arbitrary-precision integer.

A certificate checks a recorded trace against a bound.  A finite trace can
only falsify the bound beyond its horizon, with one exception: when the
iteration reaches an exact fixed point (consecutive iterates structurally
equal), the trace's infinite extension is the constant tail, every later
residual is exactly zero, and the bound is decided for all n.  Traces that
are both shorter than the bound and not stationary yield the distinct
"inconclusive" status.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, NumericError
from .mappings import Mapping
from .spaces import Point, Space


# -- rate formulas ---------------------------------------------------------------


def _exact(x) -> Fraction:
    """Exact rational value of a numeric argument, decimal-literal semantics."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"rate argument must be finite, got {x}")
        return Fraction(repr(x))
    return Fraction(x)


def regularity_stage_count(b: float, eps: float) -> int:
    """ceil(2 b / eps); the stage count entering the regularity rate."""
    b_, eps_ = _exact(b), _exact(eps)
    if b_ <= 0 or eps_ <= 0:
        raise DomainError("rate arguments b and eps must be positive")
    return math.ceil(2 * b_ / eps_)


def asymptotic_regularity_rate(b: float, eps: float) -> int:
    """Iterations after which the step size d(x_n, x_{n+1}) stays <= eps.

    Valid for Picard iterations of an averaged pair of quadratically firmly
    nonexpansive maps started within distance b of a fixed point.  Grows
    exponentially in 1/eps; the result is an exact (possibly huge) integer.
    """
    k = regularity_stage_count(b, eps)
    b_, eps_ = _exact(b), _exact(eps)
    return k * math.ceil(2 * b_ * (1 + 2**k) / eps_) + 1


def averaged_projection_gap_rate(M: float, b: float, eps: float, lam: float) -> int:
    """Iterations after which d(P_A x_n, P_B x_n) <= d(A,B) + eps.

    Hypotheses: d(x0, u*) <= M for the lam-combination u* of some best pair,
    and d(P_A x0, P_B x0)^2 <= b.
    """
    M_, b_, eps_ = _exact(M), _exact(b), _exact(eps)
    lam_ = _exact(lam)
    if M_ <= 0 or b_ <= 0 or eps_ <= 0:
        raise DomainError("rate arguments M, b, eps must be positive")
    if not 0 < lam_ < 1:
        raise DomainError(f"combination weight must be in (0, 1), got {lam}")
    return math.floor(64 * M_**2 * b_ / (eps_**4 * lam_ * (1 - lam_))) + 2


def composed_projection_gap_rate(M: float, b: float, eps: float) -> int:
    """Iterations after which d^2(x_n, P_B x_n) <= d^2(A,B) + eps for the
    composition P_A P_B, started within M of a best-pair endpoint and with
    d^2(P_A P_B x0, P_B x0) <= b."""
    M_, b_, eps_ = _exact(M), _exact(b), _exact(eps)
    if M_ <= 0 or b_ <= 0 or eps_ <= 0:
        raise DomainError("rate arguments M, b, eps must be positive")
    return math.floor(4 * M_**2 * b_ / eps_**2) + 2


# -- traces -----------------------------------------------------------------------


@dataclass
class IterationTrace:
    """Recorded Picard iterates with per-step diagnostics.

    residuals[n] = d(x_n, x_{n+1}); to_fixed_point[n] = d(x_n, p) when a
    reference fixed point is supplied; aux[n] = d(P_A x_n, P_B x_n) when a set
    pair is supplied.  ``stationary_from`` is the first index at which the
    next iterate equals the current one structurally; from there on the
    infinite extension of the trace is constant.
    """

    space: Space
    points: list[Point]
    residuals: list[float] = field(default_factory=list)
    to_fixed_point: list[float] | None = None
    aux: list[float] | None = None
    stationary_from: int | None = None

    def __post_init__(self):
        if len(self.residuals) != max(len(self.points) - 1, 0):
            raise DomainError("residual count must be iterate count - 1")
        for name, values in (("residual", self.residuals), ("aux", self.aux or [])):
            for v in values:
                if not (math.isfinite(v) and v >= 0.0):
                    raise DomainError(f"non-finite or negative {name} value {v}")

    @property
    def horizon(self) -> int:
        """Number of recorded residual indices."""
        return len(self.residuals)

    def residual_at(self, n: int) -> float | None:
        """Residual at step n, using the constant extension when stationary."""
        if n < len(self.residuals):
            return self.residuals[n]
        if self.stationary_from is not None:
            return 0.0
        return None


def _require_finite(point: Point, step: int) -> None:
    stack = [point.payload]
    while stack:
        payload = stack.pop()
        if isinstance(payload, Point):
            stack.append(payload.payload)
        elif isinstance(payload, complex):
            if not (math.isfinite(payload.real) and math.isfinite(payload.imag)):
                raise NumericError(f"non-finite iterate at step {step}", step=step)
        elif isinstance(payload, tuple):
            for item in payload:
                if isinstance(item, (Point, tuple)):
                    stack.append(item)
                elif isinstance(item, complex):
                    stack.append(item)
                elif isinstance(item, float) and not math.isfinite(item):
                    raise NumericError(f"non-finite iterate at step {step}", step=step)


def picard(
    mapping: Mapping,
    start: Point,
    n_max: int,
    stop_tol: float = 0.0,
    fixed_point: Point | None = None,
    aux_pair=None,
    stop_on_stationary: bool = True,
) -> IterationTrace:
    """Run x_{k+1} = T(x_k) for up to n_max steps and record diagnostics.

    stop_tol = 0 disables residual-based early stopping (the default, so rate
    certification sees the full horizon).  Exact stationarity is always
    detected; with stop_on_stationary the loop ends there, since every later
    iterate is structurally identical.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    space = mapping.space
    space.require_member(start)
    if fixed_point is not None:
        space.require_member(fixed_point)

    proj_a = proj_b = None
    if aux_pair is not None:
        set_a, set_b = aux_pair
        proj_a, proj_b = set_a.project, set_b.project

    points = [start]
    residuals: list[float] = []
    dists = [space.distance(start, fixed_point)] if fixed_point is not None else None
    aux = (
        [space.distance(proj_a(start), proj_b(start))] if proj_a is not None else None
    )
    stationary_from = None

    current = start
    for step in range(n_max):
        nxt = mapping(current)
        _require_finite(nxt, step + 1)
        residual = space.distance(current, nxt)
        points.append(nxt)
        residuals.append(residual)
        if dists is not None:
            dists.append(space.distance(nxt, fixed_point))
        if aux is not None:
            aux.append(space.distance(proj_a(nxt), proj_b(nxt)))
        if nxt == current:
            stationary_from = step
            if stop_on_stationary:
                break
        current = nxt
        if stop_tol > 0.0 and residual < stop_tol:
            break

    return IterationTrace(
        space=space,
        points=points,
        residuals=residuals,
        to_fixed_point=dists,
        aux=aux,
        stationary_from=stationary_from,
    )


# -- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class RateCertificate:
    """Verdict that a certified quantity stayed <= its target past a bound.

    status is "pass", "fail", or "inconclusive" (trace too short to see the
    bound and not stationary).  `passed` implies that the certified quantity
    is <= epsilon (+ slack) at every checked index n >= bound_n, including the
    constant extension of a stationary trace.
    """

    epsilon: float
    bound_n: int
    observed_first_n: int | None
    status: str
    horizon: int
    stationary: bool

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "bound_n": self.bound_n,
            "observed_first_n": self.observed_first_n,
            "pass": self.passed,
            "status": self.status,
        }


def _certify_values(values, stationary_value, bound, eps, slack, horizon, stationary):
    """Shared certificate logic over a recorded sequence of nonneg values."""
    target = eps + slack
    violation = any(values[n] > target for n in range(min(bound, len(values)), len(values)))
    observed = next((n for n, v in enumerate(values) if v <= eps), None)
    if observed is None and stationary and stationary_value <= eps:
        observed = len(values)
    if violation:
        status = "fail"
    elif len(values) > bound:
        status = "pass"
    elif stationary:
        # The constant extension decides the bound at every n >= bound.
        status = "pass" if stationary_value <= target else "fail"
    else:
        status = "inconclusive"
    return RateCertificate(
        epsilon=eps,
        bound_n=bound,
        observed_first_n=observed,
        status=status,
        horizon=horizon,
        stationary=stationary,
    )


def certify_asymptotic_regularity(
    trace: IterationTrace, b: float, eps_grid, slack: float = 1e-10
) -> list[RateCertificate]:
    """Check d(x_n, x_{n+1}) <= eps for all checkable n >= the regularity rate.

    Precondition (caller's responsibility): the trace starts within distance b
    of some fixed point of its mapping.
    """
    certs = []
    stationary = trace.stationary_from is not None
    for eps in eps_grid:
        bound = asymptotic_regularity_rate(b, eps)
        certs.append(
            _certify_values(
                trace.residuals, 0.0, bound, eps, slack, trace.horizon, stationary
            )
        )
    return certs


def certify_best_approx_rate(
    trace: IterationTrace,
    M: float,
    b: float,
    r: float,
    eps_grid,
    lam: float,
    slack: float = 1e-8,
) -> list[RateCertificate]:
    """Check d(P_A x_n, P_B x_n) <= r + eps past the projection-gap rate.

    Preconditions: the trace recorded aux distances; d(x0, u*) <= M for the
    lifted best pair; d(P_A x0, P_B x0)^2 <= b.
    """
    if trace.aux is None:
        raise DomainError("trace has no recorded projection-gap distances")
    certs = []
    stationary = trace.stationary_from is not None
    final_aux = trace.aux[-1]
    for eps in eps_grid:
        bound = averaged_projection_gap_rate(M, b, eps, lam)
        shifted = [v - r for v in trace.aux]
        certs.append(
            _certify_values(
                shifted,
                final_aux - r,
                bound,
                eps,
                slack,
                len(trace.aux),
                stationary,
            )
        )
    return certs


def trace_rows(trace: IterationTrace):
    """Rows (n, residual, dist_to_p, aux_dist) for CSV export; None for gaps."""
    rows = []
    for n in range(len(trace.points)):
        rows.append(
            (
                n,
                trace.residuals[n] if n < len(trace.residuals) else None,
                trace.to_fixed_point[n] if trace.to_fixed_point is not None else None,
                trace.aux[n] if trace.aux is not None else None,
            )
        )
    return rows
