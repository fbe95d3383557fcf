"""Independent oracle implementations used to freeze and verify expectations.

Everything here deliberately avoids the library's own code paths: series
instead of the cancellation-free form, QUADPACK instead of the recursive
Simpson, an explicit segment walk instead of cached mass arrays, and the
literal piecewise CDF branch per segment instead of the unified formula.
"""

import math

from scipy.integrate import quad

from gapsearch import Side, cdf, segment_probability, truncated_pdf


def maclaurin_erf(x: float) -> float:
    """Alternating power series 2/sqrt(pi) * sum (-1)^n x^(2n+1)/(n!(2n+1))."""
    total = 0.0
    n = 0
    while True:
        term = (-1.0) ** n * x ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1))
        total += term
        if abs(term) < 1e-17 and n > 3:
            return 2.0 / math.sqrt(math.pi) * total
        n += 1


def quad_owen_t(h: float, a: float) -> float:
    """Owen T via adaptive quadrature of the defining integrand."""
    val, _ = quad(lambda v: math.exp(-0.5 * h * h * (1 + v * v)) / (1 + v * v),
                  0.0, a, epsabs=1e-14, epsrel=1e-14)
    return val / (2.0 * math.pi)


def quad_lower_gamma(kappa: float, x: float) -> float:
    """Regularized lower incomplete gamma via quadrature of t^(k-1) e^-t."""
    val, _ = quad(lambda t: t ** (kappa - 1.0) * math.exp(-t), 0.0, x,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val / math.gamma(kappa)


def simpson_iterative(f, lo: float, hi: float, tol: float) -> float:
    """Adaptive Simpson with an explicit work stack (no recursion)."""
    def panel(x0, x2):
        x1 = 0.5 * (x0 + x2)
        return x1, (x2 - x0) / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2))

    total = 0.0
    mid0, whole0 = panel(lo, hi)
    stack = [(lo, hi, mid0, whole0, tol, 0)]
    while stack:
        x0, x2, x1, whole, eps, depth = stack.pop()
        lm, left = panel(x0, x1)
        rm, right = panel(x1, x2)
        err = left + right - whole
        if depth >= 48 or abs(err) <= 15.0 * eps:
            total += left + right + err / 15.0
        else:
            stack.append((x0, x1, lm, left, eps / 2.0, depth + 1))
            stack.append((x1, x2, rm, right, eps / 2.0, depth + 1))
    return total


def integrate_truncated_pdf(t, tol: float = 1e-9) -> float:
    """Quadrature of the renormalized density over every segment."""
    return sum(simpson_iterative(lambda x: truncated_pdf(t, x),
                                 seg.lower, seg.upper, tol)
               for seg in t.segments)


def walk_expected_time(t, s, m: int) -> float:
    """Expected sweep time by explicit segment walk (independent code path).

    Walks Segment objects outward from the origin, pairing each swept
    length with the probability of the segment selected by the same
    weight-index rule the library defines (literal for the first
    ``n_right`` left terms and the boundary term, mirrored in between).
    """
    layout = t.layout
    n_left, n_right = layout.n_left, layout.n_right
    segs = t.segments
    if layout.half_line:
        order = list(range(len(segs)))          # sweep order == global order
        r = m
        swept = order[:r]
        value = sum(segs[k].length * segment_probability(t, k) for k in swept)
        gap_time = 0.0
        if r > 1:
            for k in range(r - 1):
                gap_time += segs[k + 1].lower - segs[k].upper
        return value / s.v1 + (gap_time / s.v2 if r > 1 else 0.0)

    left_order = [seg.index for seg in segs if seg.side is Side.LEFT][::-1]
    right_order = [seg.index for seg in segs if seg.side is Side.RIGHT]
    if m <= n_left:
        count = n_left + 1 - m
        value = 0.0
        for ell in range(1, count + 1):
            if ell <= n_right or ell == n_left + 1:
                widx = ell
            else:
                widx = n_left + 1 - ell
            value += segs[left_order[ell - 1]].length \
                * segment_probability(t, left_order[widx - 1])
        gap_time = 0.0
        if count > 1:
            for ell in range(n_left - m):
                upper_seg = segs[left_order[ell]]
                lower_seg = segs[left_order[ell + 1]]
                gap_time += lower_seg.upper - upper_seg.lower
        return value / s.v1 + gap_time / s.v2

    r = m - n_left
    value = sum(segs[right_order[ell]].length
                * segment_probability(t, right_order[ell])
                for ell in range(r))
    gap_time = 0.0
    if r > 1:
        for ell in range(r - 1):
            gap_time += segs[right_order[ell + 1]].lower - segs[right_order[ell]].upper
    return value / s.v1 + (gap_time / s.v2 if r > 1 else 0.0)


def piecewise_cdf(t, x: float) -> float:
    """Literal per-segment CDF branches (not the unified deleted-mass form).

    Segment 0:            (F(x) - F(a)) / A
    left segment m:       (F(x) - sum of outer left gap masses - F(a)) / A
    origin segments:      (F(x) - all left gap mass - F(a)) / A
    right segment m:      ... - right gap masses below ... / A
    Half-line: F(x)/A on [0, a1], then subtract the right gap masses.
    """
    layout = t.layout
    d = t.dist
    F = lambda u: cdf(d, u)
    A = t.norm
    segs = t.segments
    k = next(i for i, seg in enumerate(segs) if seg.lower <= x <= seg.upper)

    if layout.half_line:
        gap_mass = sum(F(g.upper) - F(g.lower) for g in layout.right_gaps[:k])
        return (F(x) - gap_mass) / A

    n_left = layout.n_left
    F_a = F(layout.a)
    # left gaps listed nearest origin first; outer gaps sit below segment k
    left_outer = layout.left_gaps[k:] if k <= n_left else ()
    a_minus = sum(F(g.upper) - F(g.lower) for g in layout.left_gaps)
    if k == 0:
        return (F(x) - F_a) / A
    if k < n_left:
        below = sum(F(g.upper) - F(g.lower) for g in left_outer)
        return (F(x) - below - F_a) / A
    if k in (n_left, n_left + 1):
        return (F(x) - a_minus - F_a) / A
    right_below = sum(F(g.upper) - F(g.lower)
                      for g in layout.right_gaps[:k - n_left - 1])
    return (F(x) - a_minus - right_below - F_a) / A
