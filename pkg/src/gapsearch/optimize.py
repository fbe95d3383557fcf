"""Mesh-point optimization of the total expected sweep time.

The constrained problem (keep every gap strictly ordered inside the domain)
is folded into an unconstrained objective by adding quadratic penalties on
each gap's length and on its two edges.  The penalized objective is then
minimized with a damped Newton iteration: finite-difference gradient and
Hessian, Levenberg-style diagonal damping whenever the plain Newton step
fails or climbs, and step halving until the iterate is strictly feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .distributions import DistributionSpec
from .errors import ConfigurationError, DomainError, EvaluationError, \
    NewtonStallError
from .search import SearchSpeeds, _mesh_expected_time, expected_time, row_range
from .truncation import TruncationLayout, make_truncated

_HESS_STEP = float(np.finfo(float).eps) ** 0.25   # ~1.2e-4; see fd_hessian
_MAX_DAMPING_TRIALS = 61
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class PenaltyTriple:
    """Penalty coefficients for one gap, each strictly inside (0, 1).

    ``gap_sq`` weights (gap length)^2 / v2^2, ``upper_sq`` and ``lower_sq``
    weight the squared gap edges over v1^2.
    """

    gap_sq: float
    upper_sq: float
    lower_sq: float

    def __post_init__(self):
        for name in ("gap_sq", "upper_sq", "lower_sq"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 < v < 1.0):
                raise DomainError(f"penalty {name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class PenaltyParams:
    """One :class:`PenaltyTriple` per gap, per side (nearest the origin first)."""

    left: tuple[PenaltyTriple, ...] = field(default=())
    right: tuple[PenaltyTriple, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    @classmethod
    def uniform(cls, value: float, n_left: int, n_right: int) -> "PenaltyParams":
        t = PenaltyTriple(value, value, value)
        return cls(left=(t,) * n_left, right=(t,) * n_right)


@dataclass(frozen=True)
class NewtonOptions:
    max_iterations: int = 100
    grad_tol: float = 1e-8
    step_tol: float = 1e-10
    fd_step: float = 1e-5
    initial_damping: float = 0.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        for name in ("grad_tol", "step_tol", "fd_step"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be > 0")
        if self.initial_damping < 0.0:
            raise DomainError("initial_damping must be >= 0")


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    objective: float
    grad_norm: float
    damping: float


@dataclass(frozen=True)
class OptimizationResult:
    x_star: np.ndarray
    objective: float
    grad_norm: float
    iterations: int
    converged: bool
    trace: tuple[TraceEntry, ...]
    unpenalized_objective: float | None = None


class ObjectivePart(Enum):
    LEFT_TAIL = "left-tail"
    RIGHT_TAIL = "right-tail"
    TOTAL = "total"


def _penalty_value(gaps, triples, v1: float, v2: float) -> float:
    total = 0.0
    for (lo, hi), tr in zip(gaps, triples):
        glen = hi - lo
        total += tr.gap_sq * glen * glen / (v2 * v2)
        total += (tr.upper_sq * hi * hi + tr.lower_sq * lo * lo) / (v1 * v1)
    return total


def _modified_raw(d: DistributionSpec, a: float, b: float,
                  left, right, s: SearchSpeeds, p: PenaltyParams,
                  which: ObjectivePart, half_line: bool) -> float:
    n_left, n_right = len(left), len(right)
    value = 0.0
    if which in (ObjectivePart.LEFT_TAIL, ObjectivePart.TOTAL):
        if half_line:
            raise ConfigurationError("half-line layouts have no left tail")
        value += _mesh_expected_time(d, a, b, left, right, s.v1, s.v2, 0, half_line)
        value += _penalty_value(left, p.left, s.v1, s.v2)
    if which in (ObjectivePart.RIGHT_TAIL, ObjectivePart.TOTAL):
        last = (n_right + 1) if half_line else (n_left + n_right + 1)
        value += _mesh_expected_time(d, a, b, left, right, s.v1, s.v2, last, half_line)
        value += _penalty_value(right, p.right, s.v1, s.v2)
    return value


def modified_objective(d: DistributionSpec, layout: TruncationLayout,
                       s: SearchSpeeds, p: PenaltyParams,
                       which: ObjectivePart) -> float:
    """Penalized sweep-time objective for one tail or their sum.

    The left (right) tail is the full expected sweep of that side plus the
    quadratic gap-length and gap-edge penalties for that side's gaps.  In
    the all-penalties-to-zero limit each tail reduces to the corresponding
    expected sweep time.
    """
    if len(p.left) != layout.n_left or len(p.right) != layout.n_right:
        raise ConfigurationError(
            f"penalty counts ({len(p.left)}, {len(p.right)}) do not match "
            f"gap counts ({layout.n_left}, {layout.n_right})")
    half = layout.half_line
    if half and which is ObjectivePart.TOTAL:
        which = ObjectivePart.RIGHT_TAIL
    return _modified_raw(
        d, layout.a, layout.b,
        [tuple(g) for g in layout.left_gaps],
        [tuple(g) for g in layout.right_gaps],
        s, p, which, half)


def fd_gradient(Q, x, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with per-coordinate step step*max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        h = step * max(1.0, abs(x[i]))
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        fp, fm = Q(xp), Q(xm)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            bad = xp if not math.isfinite(fp) else xm
            raise EvaluationError(f"non-finite objective at stencil point {bad}")
        g[i] = (fp - fm) / (2.0 * h)
    return g


def fd_hessian(Q, x, step: float | None = None) -> np.ndarray:
    """Central second differences, symmetrized as (H + H^T)/2.

    The default step is eps**0.25 (relative): second differences divide by
    h^2, so the 1e-5 gradient step would leave ~1e-5 of roundoff in the
    entries while eps**0.25 keeps them near 1e-8.
    """
    x = np.asarray(x, dtype=float)
    h = (step if step is not None else _HESS_STEP)
    steps = np.array([h * max(1.0, abs(v)) for v in x])
    n = x.size
    H = np.empty((n, n))
    f0 = Q(x)
    if not math.isfinite(f0):
        raise EvaluationError(f"non-finite objective at stencil point {x}")

    def at(*pairs) -> float:
        xp = x.copy()
        for i, sgn in pairs:
            xp[i] += sgn * steps[i]
        v = Q(xp)
        if not math.isfinite(v):
            raise EvaluationError(f"non-finite objective at stencil point {xp}")
        return v

    for i in range(n):
        H[i, i] = (at((i, +1)) - 2.0 * f0 + at((i, -1))) / (steps[i] * steps[i])
        for j in range(i + 1, n):
            mixed = (at((i, +1), (j, +1)) - at((i, +1), (j, -1))
                     - at((i, -1), (j, +1)) + at((i, -1), (j, -1)))
            H[i, j] = H[j, i] = mixed / (4.0 * steps[i] * steps[j])
    return 0.5 * (H + H.T)


def newton_minimize(Q, x0, opts: NewtonOptions | None = None,
                    feasible=None) -> OptimizationResult:
    """Damped Newton minimization of ``Q`` from ``x0``.

    Solves H s = -g each iteration.  If the solve fails or the step does
    not strictly decrease Q, a diagonal damping term (starting at 1e-6 and
    doubling) is added; steps leaving the feasible region are halved until
    strictly inside.  Stops when the gradient norm falls below ``grad_tol``
    (converged), the accepted step is shorter than ``step_tol``, or
    ``max_iterations`` is exhausted.  Raises :class:`NewtonStallError` when
    no feasible decreasing step exists.
    """
    opts = opts or NewtonOptions()
    x = np.asarray(x0, dtype=float).copy()
    if feasible is not None and not feasible(x):
        raise DomainError(f"starting point violates the constraints: {x}")
    if x.size == 0:
        return OptimizationResult(x_star=x, objective=float(Q(x)), grad_norm=0.0,
                                  iterations=0, converged=True, trace=())

    q = float(Q(x))
    if not math.isfinite(q):
        raise EvaluationError(f"non-finite objective at starting point {x}")
    g = fd_gradient(Q, x, opts.fd_step)
    gn = float(np.linalg.norm(g))
    trace = [TraceEntry(0, q, gn, 0.0)]
    converged = gn <= opts.grad_tol
    k = 0
    identity = np.eye(x.size)

    while not converged and k < opts.max_iterations:
        H = fd_hessian(Q, x, max(opts.fd_step, _HESS_STEP))
        lam = opts.initial_damping
        accepted = False
        step_vec = None
        q_new = None
        lam_used = lam
        for _ in range(_MAX_DAMPING_TRIALS):
            try:
                s_try = np.linalg.solve(H + lam * identity if lam > 0.0 else H, -g)
                if not np.all(np.isfinite(s_try)):
                    raise np.linalg.LinAlgError("non-finite step")
            except np.linalg.LinAlgError:
                lam = 1e-6 if lam == 0.0 else 2.0 * lam
                continue
            inside = True
            if feasible is not None:
                halvings = 0
                while not feasible(x + s_try):
                    if halvings >= _MAX_HALVINGS:
                        inside = False
                        break
                    s_try = 0.5 * s_try
                    halvings += 1
            if inside:
                try:
                    q_try = float(Q(x + s_try))
                except EvaluationError:
                    q_try = math.inf
                if math.isfinite(q_try) and q_try < q:
                    accepted = True
                    step_vec, q_new, lam_used = s_try, q_try, lam
                    break
            lam = 1e-6 if lam == 0.0 else 2.0 * lam
        if not accepted:
            raise NewtonStallError(
                f"no feasible decreasing step at iteration {k + 1} "
                f"(grad_norm={gn:.3e})", trace)
        x = x + step_vec
        q = q_new
        k += 1
        g = fd_gradient(Q, x, opts.fd_step)
        gn = float(np.linalg.norm(g))
        trace.append(TraceEntry(k, q, gn, lam_used))
        if gn <= opts.grad_tol:
            converged = True
            break
        if float(np.linalg.norm(step_vec)) <= opts.step_tol:
            break

    return OptimizationResult(x_star=x, objective=q, grad_norm=gn,
                              iterations=k, converged=converged,
                              trace=tuple(trace))


def pack_mesh(layout: TruncationLayout) -> np.ndarray:
    """Flatten gap edges to the optimization vector.

    Order: left lowers, left uppers, right lowers, right uppers, each list
    nearest the origin first.
    """
    return np.array(
        [g.lower for g in layout.left_gaps] + [g.upper for g in layout.left_gaps]
        + [g.lower for g in layout.right_gaps] + [g.upper for g in layout.right_gaps],
        dtype=float)


def unpack_mesh(x, n_left: int, n_right: int):
    x = np.asarray(x, dtype=float)
    left = [(float(x[j]), float(x[n_left + j])) for j in range(n_left)]
    off = 2 * n_left
    right = [(float(x[off + j]), float(x[off + n_right + j])) for j in range(n_right)]
    return left, right


def _mesh_feasible(x, a: float, b: float, n_left: int, n_right: int) -> bool:
    left, right = unpack_mesh(x, n_left, n_right)
    prev = 0.0
    for lo, hi in left:                      # walk outward on the left
        if not (lo < hi < prev):
            return False
        prev = lo
    if n_left and not a < prev:
        return False
    prev = 0.0
    for lo, hi in right:                     # walk outward on the right
        if not (prev < lo < hi):
            return False
        prev = hi
    if n_right and not prev < b:
        return False
    return True


def optimize_layout(d: DistributionSpec, template: TruncationLayout,
                    s: SearchSpeeds, p: PenaltyParams | None = None,
                    opts: NewtonOptions | None = None
                    ) -> tuple[TruncationLayout, OptimizationResult]:
    """Minimize the total penalized sweep time over all gap edges.

    ``template`` supplies the endpoints, the gap counts, and the starting
    mesh.  Returns the optimized layout plus the Newton result; the result
    additionally carries the unpenalized total expected time re-evaluated
    at the optimum.
    """
    n_left, n_right = template.n_left, template.n_right
    p = p or PenaltyParams.uniform(0.1, n_left, n_right)
    if len(p.left) != n_left or len(p.right) != n_right:
        raise ConfigurationError(
            f"penalty counts ({len(p.left)}, {len(p.right)}) do not match "
            f"gap counts ({n_left}, {n_right})")

    if n_left + n_right == 0:
        t = make_truncated(d, template)
        unpen = _unpenalized_total(t, s)
        result = OptimizationResult(
            x_star=np.array([]), objective=unpen, grad_norm=0.0, iterations=0,
            converged=True, trace=(), unpenalized_objective=unpen)
        return template, result

    a, b, half = template.a, template.b, template.half_line
    which = ObjectivePart.RIGHT_TAIL if half else ObjectivePart.TOTAL

    def Q(x) -> float:
        left, right = unpack_mesh(x, n_left, n_right)
        return _modified_raw(d, a, b, left, right, s, p, which, half)

    result = newton_minimize(
        Q, pack_mesh(template), opts,
        feasible=lambda x: _mesh_feasible(x, a, b, n_left, n_right))
    left, right = unpack_mesh(result.x_star, n_left, n_right)
    optimized = TruncationLayout(a=a, b=b, left_gaps=tuple(left),
                                 right_gaps=tuple(right))
    unpen = _unpenalized_total(make_truncated(d, optimized), s)
    return optimized, replace(result, unpenalized_objective=unpen)


def _unpenalized_total(t, s: SearchSpeeds) -> float:
    rows = row_range(t.layout)
    total = expected_time(t, s, rows[-1])
    if not t.layout.half_line:
        total += expected_time(t, s, 0)
    return total
