"""Permutation combinatorics of driving lists.

Reading an atom's driving list as a permutation pi (rank -> trajectory
index), adjacent atoms inside a constant-L subinterval are related by a
transition sigma acting on ranks: pi_next = pi * sigma.  Cycle forms are
canonical (each cycle rotated to start at its smallest element, cycles
sorted, fixed points omitted).
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """Bijection on 1..n stored as the image tuple: self(i) == order[i-1]."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        n = len(self.order)
        if sorted(self.order) != list(range(1, n + 1)):
            raise ValueError("not a permutation of 1..n")

    def __len__(self) -> int:
        return len(self.order)

    def __call__(self, i: int) -> int:
        return self.order[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.order)
        for i, v in enumerate(self.order):
            inv[v - 1] = i + 1
        return Permutation(tuple(inv))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self * other)(i) == self(other(i))."""
        if len(self) != len(other):
            raise ValueError(f"length mismatch: {len(self)} vs {len(other)}")
        return Permutation(tuple(self.order[v - 1] for v in other.order))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


@dataclass(frozen=True)
class CycleForm:
    """Disjoint cycles in canonical order, fixed points omitted."""

    cycles: tuple[tuple[int, ...], ...]

    def to_permutation(self, n: int) -> Permutation:
        order = list(range(1, n + 1))
        for cycle in self.cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                order[a - 1] = b
        return Permutation(tuple(order))

    def __str__(self) -> str:
        if not self.cycles:
            return "()"
        return "".join("(" + ",".join(str(i) for i in c) + ")" for c in self.cycles)


def sigma_between(p1: Permutation, p2: Permutation) -> Permutation:
    """The unique sigma with p1 * sigma == p2.

    sigma permutes ranks: sigma(r) is the rank in p1 of the index that p2
    places at rank r.  Raises ValueError on length mismatch (permutations
    from different-L subintervals are not comparable).
    """
    if len(p1) != len(p2):
        raise ValueError(f"length mismatch: {len(p1)} vs {len(p2)}")
    return p1.inverse() * p2


def cycle_decomposition(p: Permutation) -> CycleForm:
    """Canonical disjoint-cycle decomposition, fixed points omitted."""
    seen = [False] * (len(p) + 1)
    cycles = []
    for start in range(1, len(p) + 1):
        if seen[start]:
            continue
        cur = start
        cycle = []
        while not seen[cur]:
            seen[cur] = True
            cycle.append(cur)
            cur = p(cur)
        if len(cycle) > 1:
            cycles.append(tuple(cycle))
    return CycleForm(cycles=tuple(sorted(cycles)))


def sigma_sequence(atoms) -> list[CycleForm]:
    """Transitions between consecutive atoms of one constant-L subinterval.

    ``atoms`` may be Atom objects or anything exposing a driving list via
    ``.driving``; bare driving lists are accepted too.
    """
    perms = []
    for a in atoms:
        driving = getattr(a, "driving", a)
        if not isinstance(driving, Permutation):
            driving = Permutation(tuple(driving))
        perms.append(driving)
    return [
        cycle_decomposition(sigma_between(p1, p2)) for p1, p2 in zip(perms, perms[1:])
    ]
