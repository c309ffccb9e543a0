"""Concrete mean/median sequences.

Starting from the multiset {0, x, 1}, each new point is chosen so that the
mean of the enlarged multiset equals the median of the previous one:

    x_n = n * median(x_1, ..., x_{n-1}) - (x_1 + ... + x_{n-1})

The run stops at the first index whose new point equals the running median;
that index is the sequence length L and the median at that moment is the
limit value m.  All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from meanmedian._backend import kernel
from meanmedian.exact import format_rational

DEFAULT_THRESHOLD = 10000


@dataclass(frozen=True)
class RunLimit:
    """Maximum index to attempt before giving up on termination."""

    threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.threshold < 4:
            raise ValueError("threshold must be at least 4")


class NotTerminated(Exception):
    """No index up to the threshold terminated the run.

    Either the threshold was too small or ``x`` is a candidate
    counterexample to finite termination; the partial data is kept so the
    run can be inspected.
    """

    def __init__(self, x: Fraction, threshold: int, points, medians):
        super().__init__(f"no termination for x = {format_rational(x)} within {threshold} steps")
        self.x = x
        self.threshold = threshold
        self.points = points
        self.medians = medians


@dataclass(frozen=True)
class Trajectory:
    """A terminated run: points x_1..x_L and running medians m_3..m_{L-1}."""

    x: Fraction
    points: tuple[Fraction, ...]
    medians: tuple[Fraction, ...]
    L: int
    m: Fraction

    def to_json(self) -> dict:
        return {
            "x": format_rational(self.x),
            "L": self.L,
            "m": format_rational(self.m),
            "points": [format_rational(p) for p in self.points],
            "medians": [format_rational(p) for p in self.medians],
        }


def median_of(values) -> Fraction:
    """Median of a non-empty multiset: middle element, or the average of the
    two middle elements for even sizes.  Input order is irrelevant."""
    vals = sorted(values)
    if not vals:
        raise ValueError("median of an empty collection")
    n = len(vals)
    if n % 2:
        return Fraction(vals[n // 2])
    return (Fraction(vals[n // 2 - 1]) + Fraction(vals[n // 2])) / 2


def _coerce_limit(limit) -> int:
    if limit is None:
        return DEFAULT_THRESHOLD
    if isinstance(limit, RunLimit):
        return limit.threshold
    threshold = int(limit)
    if threshold < 4:
        raise ValueError("threshold must be at least 4")
    return threshold


def run_trajectory(x: Fraction, limit: RunLimit | int | None = None) -> Trajectory:
    """Run the iteration for 0 < x < 1 until it terminates.

    Raises NotTerminated when the threshold is exhausted first.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"starting point must satisfy 0 < x < 1, got {x}")
    threshold = _coerce_limit(limit)
    p, q = x.numerator, x.denominator
    terminated, n, points, medians, _ = kernel.traj_core(p, q, threshold)
    pts = tuple(Fraction(num, q << e) for num, e in points)
    meds = tuple(Fraction(num, q << e) for num, e in medians)
    if not terminated:
        raise NotTerminated(x, threshold, pts, meds)
    return Trajectory(x=x, points=pts, medians=meds, L=n, m=meds[-1])


def normalize_triple(a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    """Image of b under the increasing affine map sending a -> 0 and c -> 1.

    Requires a < b < c; degenerate triples stabilize immediately and are out
    of scope here.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if not a < b < c:
        raise ValueError(f"expected a < b < c, got {a}, {b}, {c}")
    return (b - a) / (c - a)


def verify_stability(t: Trajectory, extra_steps: int) -> bool:
    """Continue the iteration past L by brute force and confirm permanence.

    Independent of the termination test inside run_trajectory: the state is
    rebuilt from the recorded points with plain Fraction arithmetic and each
    further point and median is compared against the limit value.
    """
    if extra_steps < 0:
        raise ValueError("extra_steps must be non-negative")
    pts = list(t.points)
    total = sum(pts)
    med = median_of(pts)
    for n in range(t.L + 1, t.L + 1 + extra_steps):
        new = n * med - total
        if new != t.m:
            return False
        pts.append(new)
        total += new
        med = median_of(pts)
        if med != t.m:
            return False
    return True
