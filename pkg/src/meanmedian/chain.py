"""Symbolic replay of a run along a driving list.

A driving list is the permutation of trajectory indices that sorts the
trajectory values increasingly.  Replaying it keeps every trajectory entry as
an affine form of the starting point and maintains the total order as a chain
of strict inequalities between forms; reducing the chain yields the open
interval of starting points that share the combinatorial type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from meanmedian._backend import kernel
from meanmedian.exact import AffineForm, RInterval


class InconsistentDrivingList(ValueError):
    """The given index sequence is not a usable driving list."""


class EmptyIntervalError(Exception):
    """The chain's constraints are contradictory: no starting point satisfies them."""


class UnboundedChainError(Exception):
    """The chain failed to bound x on one side; the seeds 0 < x < 1 make this
    an internal-consistency failure, never an expected outcome."""


@dataclass(frozen=True)
class DrivingList:
    """Permutation of 1..L listing trajectory indices in increasing value order."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        L = len(self.order)
        if L < 4:
            raise InconsistentDrivingList(f"driving list needs length >= 4, got {L}")
        if sorted(self.order) != list(range(1, L + 1)):
            raise InconsistentDrivingList("driving list must be a permutation of 1..L")
        pos = {v: i for i, v in enumerate(self.order)}
        # seeds are 0, x, 1: their relative order is fixed for 0 < x < 1
        if not pos[1] < pos[2] < pos[3]:
            raise InconsistentDrivingList("seed indices 1, 2, 3 must appear in that order")

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]


@dataclass(frozen=True)
class Chain:
    """Affine forms in prescribed increasing order, with the trajectory index
    each form came from."""

    entries: tuple[AffineForm, ...]
    source_index: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.source_index):
            raise ValueError("entries and source_index must align")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SymbolicRun:
    """Result of replaying a driving list.

    ``m_form`` is the median in force when the final point was produced;
    ``step_forms`` are the forms of x_4..x_L and ``median_forms`` the medians
    each step was balanced against (the last one is ``m_form``).
    """

    chain: Chain
    m_form: AffineForm
    step_forms: tuple[AffineForm, ...]
    L: int
    median_forms: tuple[AffineForm, ...] = field(repr=False, default=())


def symbolic_median(c: Chain) -> AffineForm:
    """Middle entry of the chain, or the half-sum of the two middle entries."""
    n = len(c.entries)
    if n == 0:
        raise ValueError("median of an empty chain")
    if n % 2:
        return c.entries[n // 2]
    u, v = c.entries[n // 2 - 1], c.entries[n // 2]
    return AffineForm((u.a + v.a) / 2, (u.b + v.b) / 2)


def replay_driving_list(d: DrivingList) -> SymbolicRun:
    """Rebuild the symbolic trajectory prescribed by a driving list.

    Starting from the chain 0 < x < 1, each new form is the balance step
    applied to the current symbolic median and sum, inserted at the position
    the driving list dictates (the rank of n among the entries <= n).
    """
    if not isinstance(d, DrivingList):
        d = DrivingList(tuple(d))
    chain_a, chain_b, src, k, steps, meds = kernel.replay_core(d.order)
    den = 1 << k
    entries = tuple(
        AffineForm(Fraction(a, den), Fraction(b, den)) for a, b in zip(chain_a, chain_b)
    )
    step_forms = tuple(AffineForm(Fraction(a, 1 << e), Fraction(b, 1 << e)) for a, b, e in steps)
    median_forms = tuple(AffineForm(Fraction(a, 1 << e), Fraction(b, 1 << e)) for a, b, e in meds)
    return SymbolicRun(
        chain=Chain(entries=entries, source_index=tuple(src)),
        m_form=median_forms[-1],
        step_forms=step_forms,
        L=len(d),
        median_forms=median_forms,
    )


def dedupe_chain(c: Chain) -> Chain:
    """Drop entries structurally identical to their predecessor.

    Only exact (a, b) equality merges; distinct forms that merely agree at
    one point stay ordered by the chain, since that ordering is part of the
    interval reduction.
    """
    if not c.entries:
        return c
    entries = [c.entries[0]]
    src = [c.source_index[0]]
    for f, s in zip(c.entries[1:], c.source_index[1:]):
        if f != entries[-1]:
            entries.append(f)
            src.append(s)
    return Chain(entries=tuple(entries), source_index=tuple(src))


def reduce_chain(c: Chain) -> RInterval:
    """Intersect the strict constraints between adjacent chain entries.

    Each adjacent pair f < g contributes (g.a - f.a) x + (g.b - f.b) > 0;
    positive slope differences bound x below, negative ones above, and a zero
    slope with non-positive constant is a contradiction.  The result is the
    open interval between the best lower and upper bounds.
    """
    lo: Fraction | None = None
    hi: Fraction | None = None
    for f, g in zip(c.entries, c.entries[1:]):
        da = g.a - f.a
        db = g.b - f.b
        if da == 0:
            if db <= 0:
                raise EmptyIntervalError(f"constraint {f} < {g} cannot hold")
            continue
        root = Fraction(-db, 1) / da
        if da > 0:
            if lo is None or root > lo:
                lo = root
        else:
            if hi is None or root < hi:
                hi = root
    if lo is None or hi is None:
        raise UnboundedChainError("chain does not bound x on both sides")
    if lo >= hi:
        raise EmptyIntervalError(f"constraints reduce to the empty set ({lo} >= {hi})")
    return RInterval(lo, hi, False, False)
