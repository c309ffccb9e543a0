"""Interval certification.

An atom is a maximal interval on which the driving list (hence the length L
and the affine limit form) is constant.  Atoms are found by probing just off
a frontier point, replaying the probe's driving list symbolically and
reducing the inequality chain; endpoints are promoted to closed when the
concrete run at the endpoint matches the atom's contract.  A sweep emits
adjacent atoms (and singleton points where neither neighbour claims a shared
endpoint) in one direction; aggregation groups the stream into constant-L
subintervals, constant-form segments and the corner points between segments.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from meanmedian._backend import kernel
from meanmedian.chain import DrivingList, EmptyIntervalError, UnboundedChainError
from meanmedian.exact import AffineForm, RInterval, affine_eval, affine_intersection, format_rational
from meanmedian.trajectory import NotTerminated, RunLimit, Trajectory, _coerce_limit, run_trajectory

DEFAULT_EPS0 = Fraction(1, 100000)
DEFAULT_EPS_SHRINK = 10
DEFAULT_EPS_FLOOR = Fraction(1, 10**60)


class EpsTooLarge(Exception):
    """The probe overshot the adjacent atom; retry with a smaller eps."""


class EpsUnderflow(Exception):
    """eps fell below the floor without certifying an atom at the frontier."""

    def __init__(self, frontier: Fraction, eps: Fraction):
        super().__init__(f"eps underflow at frontier {format_rational(frontier)}")
        self.frontier = frontier
        self.eps = eps


class DiscontinuityDetected(Exception):
    """Adjacent certified pieces do not agree at their shared point.

    This would falsify local continuity of the limit map and is surfaced
    loudly, never patched over.
    """


@dataclass(frozen=True)
class Atom:
    """Certified interval: every interior point has length L, this driving
    list, and limit value m_form evaluated there; closed endpoints satisfy
    the same contract.

    ``driving`` is None only for atoms deserialized from a stream that was
    written without driving lists.
    """

    interval: RInterval
    L: int
    m_form: AffineForm
    driving: Optional[DrivingList]


@dataclass(frozen=True)
class SingletonPiece:
    """An isolated point between open-ended atoms, with its own run results."""

    point: Fraction
    L: int
    m: Fraction


Piece = Union[Atom, SingletonPiece]


@dataclass(frozen=True)
class Subinterval:
    """Maximal run of adjacent pieces sharing L (and, for atoms, the form)."""

    interval: RInterval
    L: int
    pieces: tuple[Piece, ...]

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(p for p in self.pieces if isinstance(p, Atom))


@dataclass(frozen=True)
class Segment:
    """Maximal run of subintervals sharing the affine limit form; its
    boundaries are corners of the limit map."""

    interval: RInterval
    m_form: AffineForm
    subintervals: tuple[Subinterval, ...]


@dataclass(frozen=True)
class SweepConfig:
    seed: Fraction
    direction: str  # "left" | "right"
    eps0: Fraction = DEFAULT_EPS0
    eps_shrink: int = DEFAULT_EPS_SHRINK
    eps_floor: Fraction = DEFAULT_EPS_FLOOR
    threshold: int = 10000
    max_atoms: Optional[int] = None
    target: Optional[Fraction] = None
    max_segments: Optional[int] = None

    def __post_init__(self):
        if self.direction not in ("left", "right"):
            raise ValueError(f"direction must be 'left' or 'right', got {self.direction!r}")
        if not 0 < self.seed < 1:
            raise ValueError("seed must lie strictly between 0 and 1")
        if not self.eps0 > self.eps_floor > 0:
            raise ValueError("need eps0 > eps_floor > 0")
        if self.eps_shrink < 2:
            raise ValueError("eps_shrink must be at least 2")
        if self.max_atoms is None and self.target is None and self.max_segments is None:
            raise ValueError("at least one stop condition is required")


@dataclass
class SweepState:
    """Mutable cursor of a sweep; journaled after every emitted piece so an
    interrupted sweep can resume deterministically."""

    frontier: Fraction
    covered: bool = False
    pieces: int = 0
    atoms: int = 0
    segments: int = 0
    last_form: Optional[AffineForm] = None
    done: bool = False


def driving_list_of(t: Trajectory) -> DrivingList:
    """Indices of the trajectory sorted by value, ties broken by index."""
    order = sorted(range(1, len(t.points) + 1), key=lambda i: (t.points[i - 1], i))
    return DrivingList(tuple(order))


def _driving_from_raw(points, k) -> tuple[int, ...]:
    # integer sort keys over the common final denominator; stable sort makes
    # ties fall back to the original index
    keys = [num << (k - e) for num, e in points]
    return tuple(sorted(range(1, len(points) + 1), key=lambda i: keys[i - 1]))


class _Bounds:
    """Open interval accumulated from strict linear constraints, kept as
    integer numerator/denominator pairs (denominators positive, unreduced)."""

    __slots__ = ("lo_n", "lo_d", "hi_n", "hi_d")

    def __init__(self):
        self.lo_n = self.lo_d = None
        self.hi_n = self.hi_d = None

    def add(self, da: int, db: int) -> None:
        """Constrain da*x + db > 0 (da != 0)."""
        if da > 0:
            n, d = -db, da
            if self.lo_n is None or n * self.lo_d > self.lo_n * d:
                self.lo_n, self.lo_d = n, d
        else:
            n, d = db, -da
            if self.hi_n is None or n * self.hi_d < self.hi_n * d:
                self.hi_n, self.hi_d = n, d

    def contains_in_closure(self, xn: int, xd: int) -> bool:
        return self.lo_n * xd <= xn * self.lo_d and xn * self.hi_d <= self.hi_n * xd

    def is_empty(self) -> bool:
        return self.lo_n * self.hi_d >= self.hi_n * self.lo_d


def _light_run(p: int, q: int, threshold: int):
    """(terminated, L, m) for x = p/q without materializing the points."""
    terminated, n, _points, medians, _k = kernel.traj_core(p, q, threshold)
    num, e = medians[-1]
    return terminated, n, Fraction(num, q << e)


def certify_atom(
    x0: Fraction,
    eps: Fraction,
    limit: RunLimit | int | None = None,
    side: str = "right",
) -> Atom:
    """Certify the atom adjacent to ``x0`` on the given side.

    Probes x0 +/- eps, replays the probe's driving list, reduces the
    deduplicated inequality chain, and additionally constrains every
    non-final step to keep the sign it had at the probe (so no starting
    point in the certified interval can terminate early).  Raises
    EpsTooLarge when x0 is not in the closure of the result, when the probe
    leaves (0, 1), or when the probe is degenerate (its final form does not
    match the median form structurally).

    The pipeline runs on the kernels' integer representations; results are
    identical to composing run_trajectory, replay_driving_list, dedupe_chain
    and reduce_chain, which the test suite cross-checks.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    probe = x0 + eps if side == "right" else x0 - eps
    if not 0 < probe < 1:
        raise EpsTooLarge(f"probe {probe} outside (0, 1)")
    threshold = _coerce_limit(limit)
    pn, pd = probe.numerator, probe.denominator
    terminated, L, points, medians, k = kernel.traj_core(pn, pd, threshold)
    if not terminated:
        pts = tuple(Fraction(num, pd << e) for num, e in points)
        meds = tuple(Fraction(num, pd << e) for num, e in medians)
        raise NotTerminated(probe, threshold, pts, meds)
    order = _driving_from_raw(points, k)
    chain_a, chain_b, src, kc, steps, med_forms = kernel.replay_core(order)
    if steps[-1] != med_forms[-1]:
        # the probe sat exactly where two distinct forms cross
        raise EpsTooLarge("degenerate probe: termination is not structural")

    bounds = _Bounds()
    prev_a, prev_b = chain_a[0], chain_b[0]
    for i in range(1, len(chain_a)):
        cur_a, cur_b = chain_a[i], chain_b[i]
        da = cur_a - prev_a
        db = cur_b - prev_b
        if da == 0 and db == 0:
            continue  # structural duplicate: no constraint between the copies
        if da == 0:
            if db <= 0:
                raise EmptyIntervalError("adjacent chain entries are contradictory")
        else:
            bounds.add(da, db)
        prev_a, prev_b = cur_a, cur_b
    if bounds.lo_n is None or bounds.hi_n is None:
        raise UnboundedChainError("chain does not bound x on both sides")
    if not bounds.contains_in_closure(x0.numerator, x0.denominator):
        # overshot past the adjacent atom; skip the guard pass
        raise EpsTooLarge(f"{format_rational(x0)} not in closure of certified interval")

    # early-termination guards: each non-final step keeps its sign at the probe
    for (xa, xb, _e), (ma, mb, _em) in zip(steps[:-1], med_forms[:-1]):
        ga = xa - ma
        gb = xb - mb
        if ga == 0:
            continue
        if ga * pn + gb * pd < 0:
            ga, gb = -ga, -gb
        bounds.add(ga, gb)
    if not bounds.contains_in_closure(x0.numerator, x0.denominator):
        raise EpsTooLarge(f"{format_rational(x0)} not in closure of certified interval")
    if bounds.is_empty():
        raise EpsTooLarge("early-termination guards emptied the interval")

    lo = Fraction(bounds.lo_n, bounds.lo_d)
    hi = Fraction(bounds.hi_n, bounds.hi_d)
    ma, mb, me = med_forms[-1]
    den = 1 << me
    m_form = AffineForm(Fraction(ma, den), Fraction(mb, den))

    def endpoint_matches(e: Fraction) -> bool:
        if not 0 < e < 1:
            return False
        ok, le, me_val = _light_run(e.numerator, e.denominator, threshold)
        return ok and le == L and me_val == affine_eval(m_form, e)

    return Atom(
        interval=RInterval(lo, hi, endpoint_matches(lo), endpoint_matches(hi)),
        L=L,
        m_form=m_form,
        driving=DrivingList(order),
    )


def _certify_with_retry(cfg: SweepConfig, frontier: Fraction) -> Atom:
    eps = cfg.eps0
    while True:
        try:
            return certify_atom(frontier, eps, cfg.threshold, cfg.direction)
        except EpsTooLarge:
            eps = Fraction(eps, cfg.eps_shrink)
            if eps < cfg.eps_floor:
                raise EpsUnderflow(frontier, eps) from None


def sweep(cfg: SweepConfig, state: SweepState | None = None) -> Iterator[Piece]:
    """Emit adjacent pieces from the seed outward in cfg.direction.

    eps resets to eps0 for every new atom and shrinks by eps_shrink on each
    EpsTooLarge.  Whenever neither of two consecutive atoms claims their
    shared endpoint, the endpoint is emitted as a SingletonPiece computed by
    a concrete run.  ``state`` is updated before each piece is yielded, so a
    caller journaling after every piece can resume mid-sweep; emitted output
    is a pure function of the config.
    """
    if state is None:
        state = SweepState(frontier=cfg.seed)
    rightward = cfg.direction == "right"
    while not _stop_reached(cfg, state, rightward):
        atom = _certify_with_retry(cfg, state.frontier)
        near = atom.interval.lo if rightward else atom.interval.hi
        near_closed = atom.interval.lo_closed if rightward else atom.interval.hi_closed
        far = atom.interval.hi if rightward else atom.interval.lo
        far_closed = atom.interval.hi_closed if rightward else atom.interval.lo_closed
        if (near > state.frontier if rightward else near < state.frontier):
            raise RuntimeError("certified atom does not touch the frontier")

        if near == state.frontier:
            if state.covered and near_closed:
                # the previous piece already owns the shared endpoint
                near_closed = False
            elif not state.covered and not near_closed:
                single = _singleton_at(state.frontier, cfg.threshold)
                state.pieces += 1
                state.covered = True  # the point is owned by the singleton now
                yield single
            if rightward:
                atom = Atom(
                    interval=RInterval(near, far, near_closed, atom.interval.hi_closed),
                    L=atom.L,
                    m_form=atom.m_form,
                    driving=atom.driving,
                )
            else:
                atom = Atom(
                    interval=RInterval(far, near, atom.interval.lo_closed, near_closed),
                    L=atom.L,
                    m_form=atom.m_form,
                    driving=atom.driving,
                )

        state.frontier = far
        state.covered = far_closed
        state.pieces += 1
        state.atoms += 1
        if state.last_form != atom.m_form:
            state.segments += 1
            state.last_form = atom.m_form
        yield atom
    state.done = True


def _stop_reached(cfg: SweepConfig, state: SweepState, rightward: bool) -> bool:
    # evaluated on the journaled cursor alone, so a resumed sweep stops at
    # exactly the same piece as an uninterrupted one
    if cfg.max_atoms is not None and state.atoms >= cfg.max_atoms:
        return True
    if cfg.max_segments is not None and state.segments >= cfg.max_segments:
        return True
    if cfg.target is not None and state.atoms > 0 and (
        state.frontier >= cfg.target if rightward else state.frontier <= cfg.target
    ):
        return True
    return False


def _singleton_at(point: Fraction, threshold: int) -> SingletonPiece:
    ok, L, m = _light_run(point.numerator, point.denominator, threshold)
    if not ok:
        t = run_trajectory(point, threshold)  # raises NotTerminated with the partial data
        raise AssertionError(f"unreachable: {t}")
    return SingletonPiece(point=point, L=L, m=m)


def _piece_lo(p: Piece) -> Fraction:
    return p.point if isinstance(p, SingletonPiece) else p.interval.lo


def _piece_hi(p: Piece) -> Fraction:
    return p.point if isinstance(p, SingletonPiece) else p.interval.hi


def _piece_covers_lo(p: Piece) -> bool:
    return True if isinstance(p, SingletonPiece) else p.interval.lo_closed


def _piece_covers_hi(p: Piece) -> bool:
    return True if isinstance(p, SingletonPiece) else p.interval.hi_closed


def aggregate(pieces) -> tuple[list[Subinterval], list[Segment], list[Fraction]]:
    """Group an ordered, contiguous piece stream.

    Returns (subintervals, segments, corners).  Pieces may arrive in either
    sweep direction; they are normalised to increasing position first.  Every
    corner is validated: the adjacent forms must intersect exactly at the
    boundary point, and any singleton sitting there must carry the common
    value.  Violations raise DiscontinuityDetected.
    """
    pieces = list(pieces)
    if not pieces:
        return [], [], []
    if len(pieces) > 1 and _piece_lo(pieces[0]) > _piece_lo(pieces[1]):
        pieces = pieces[::-1]
    _check_tiling(pieces)

    subintervals = _group_subintervals(pieces)
    return _group_segments(subintervals)


def _check_tiling(pieces) -> None:
    for a, b in zip(pieces, pieces[1:]):
        pt = _piece_hi(a)
        if pt != _piece_lo(b):
            raise ValueError(
                f"pieces are not contiguous: {format_rational(pt)} vs {format_rational(_piece_lo(b))}"
            )
        owners = _piece_covers_hi(a) + _piece_covers_lo(b)
        if owners != 1:
            raise ValueError(
                f"shared endpoint {format_rational(pt)} owned by {owners} pieces, expected exactly 1"
            )


def _group_subintervals(pieces) -> list[Subinterval]:
    groups: list[list[Piece]] = []
    for p in pieces:
        if groups and _same_subinterval(groups[-1][-1], p):
            groups[-1].append(p)
        else:
            groups.append([p])
    out = []
    for g in groups:
        interval = RInterval(
            _piece_lo(g[0]), _piece_hi(g[-1]), _piece_covers_lo(g[0]), _piece_covers_hi(g[-1])
        )
        out.append(Subinterval(interval=interval, L=g[0].L, pieces=tuple(g)))
    return out


def _same_subinterval(a: Piece, b: Piece) -> bool:
    if isinstance(a, SingletonPiece) or isinstance(b, SingletonPiece):
        return False
    return a.L == b.L and a.m_form == b.m_form


def _sub_form(sub: Subinterval) -> Optional[AffineForm]:
    atoms = sub.atoms
    return atoms[0].m_form if atoms else None


def _validate_singleton(sub: Subinterval, form: AffineForm) -> None:
    piece = sub.pieces[0]
    assert isinstance(piece, SingletonPiece)
    expected = affine_eval(form, piece.point)
    if piece.m != expected:
        raise DiscontinuityDetected(
            f"value {format_rational(piece.m)} at {format_rational(piece.point)} "
            f"does not meet the adjacent form value {format_rational(expected)}"
        )


def _group_segments(subintervals) -> tuple[list[Subinterval], list[Segment], list[Fraction]]:
    segments: list[Segment] = []
    corners: list[Fraction] = []
    members: list[Subinterval] = []
    pending: list[Subinterval] = []  # singleton subintervals awaiting a side
    cur_form: Optional[AffineForm] = None
    seg_start: Optional[tuple[Fraction, bool]] = None

    def close_segment(end: Fraction, end_closed: bool):
        if cur_form is None or not members:
            return
        interval = RInterval(seg_start[0], end, seg_start[1], end_closed)
        segments.append(Segment(interval=interval, m_form=cur_form, subintervals=tuple(members)))

    for sub in subintervals:
        form = _sub_form(sub)
        if form is None:
            pending.append(sub)
            continue
        if cur_form is None:
            for s in pending:
                _validate_singleton(s, form)
            members.extend(pending)
            pending.clear()
            members.append(sub)
            cur_form = form
            seg_start = (members[0].interval.lo, members[0].interval.lo_closed)
        elif form == cur_form:
            for s in pending:
                _validate_singleton(s, form)
            members.extend(pending)
            pending.clear()
            members.append(sub)
        else:
            corner = pending[-1].interval.lo if pending else sub.interval.lo
            meet = affine_intersection(cur_form, form)
            if meet != corner:
                raise DiscontinuityDetected(
                    f"forms around {format_rational(corner)} intersect at "
                    f"{'nowhere' if meet is None else format_rational(meet)}"
                )
            for s in pending:
                _validate_singleton(s, cur_form)
            members.extend(pending)
            pending.clear()
            close_segment(corner, True)
            corners.append(corner)
            members = [sub]
            cur_form = form
            seg_start = (corner, True)
    if pending:
        if cur_form is not None:
            for s in pending:
                _validate_singleton(s, cur_form)
        members.extend(pending)
        pending = []
    if cur_form is None:
        # singleton-only stream: no form anywhere, hence no segments
        return subintervals, [], corners
    if members:
        close_segment(members[-1].interval.hi, members[-1].interval.hi_closed)
    return subintervals, segments, corners
