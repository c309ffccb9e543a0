"""Fixture verification: replay the recorded certified intervals and corners.

Interval fixtures are checked by concrete runs at the interval midpoint and
both quartile points; a fixture passes only on exact rational equality of the
observed limit with the recorded form's value (and of L when recorded).
Corner fixtures are exact linear solves.  The quick tier skips entries whose
trajectories are long; ``full`` runs everything.
"""
from __future__ import annotations

import importlib.resources
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from meanmedian.exact import (
    AffineForm,
    affine_eval,
    affine_intersection,
    format_rational,
    parse_rational,
)
from meanmedian.trajectory import NotTerminated, run_trajectory

TIERS = ("quick", "long")


@dataclass(frozen=True)
class IntervalFixture:
    name: str
    anchor: Fraction
    side: str  # left | right | interval
    lo: Fraction
    hi: Fraction
    m_form: AffineForm
    expected_L: Optional[int]
    tier: str


@dataclass(frozen=True)
class CornerFixture:
    name: str
    point: Fraction
    left: AffineForm
    right: AffineForm
    anchor_corner: bool


@dataclass(frozen=True)
class CornerAlternatives:
    name: str
    left: AffineForm
    right: AffineForm
    candidates: tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class FixtureSet:
    intervals: tuple[IntervalFixture, ...]
    corners: tuple[CornerFixture, ...]
    alternatives: tuple[CornerAlternatives, ...]


@dataclass
class FixtureResult:
    name: str
    status: str  # pass | fail | skip
    detail: dict
    seconds: float


@dataclass
class VerifyReport:
    results: list[FixtureResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failed(self) -> list[FixtureResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.results:
            out[r.status] += 1
        return out


def default_fixture_path():
    return importlib.resources.files("meanmedian").joinpath("data/fixtures.json")


def load_fixtures(path=None) -> FixtureSet:
    if path is None:
        text = default_fixture_path().read_text(encoding="utf-8")
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    obj = json.loads(text)
    intervals = tuple(
        IntervalFixture(
            name=e["name"],
            anchor=parse_rational(e["anchor"]),
            side=e["side"],
            lo=parse_rational(e["lo"]),
            hi=parse_rational(e["hi"]),
            m_form=AffineForm.from_json(e["m"]),
            expected_L=e.get("expected_L"),
            tier=e["tier"],
        )
        for e in obj["intervals"]
    )
    corners = tuple(
        CornerFixture(
            name=e["name"],
            point=parse_rational(e["point"]),
            left=AffineForm.from_json(e["left"]),
            right=AffineForm.from_json(e["right"]),
            anchor_corner=bool(e.get("anchor_corner")),
        )
        for e in obj["corners"]
    )
    alternatives = tuple(
        CornerAlternatives(
            name=e["name"],
            left=AffineForm.from_json(e["left"]),
            right=AffineForm.from_json(e["right"]),
            candidates=tuple((c["label"], parse_rational(c["point"])) for c in e["candidates"]),
        )
        for e in obj.get("corner_alternatives", [])
    )
    return FixtureSet(intervals=intervals, corners=corners, alternatives=alternatives)


def sample_points(lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Midpoint and the two quartile points, deduplicated."""
    width = hi - lo
    pts = [lo + width / 2, lo + width / 4, lo + 3 * width / 4]
    uniq = []
    for p in pts:
        if p not in uniq:
            uniq.append(p)
    return uniq


def check_interval_fixture(fx: IntervalFixture, threshold: int) -> FixtureResult:
    start = time.monotonic()
    detail = {"samples": []}
    status = "pass"
    for s in sample_points(fx.lo, fx.hi):
        expected = affine_eval(fx.m_form, s)
        sample_start = time.monotonic()
        try:
            t = run_trajectory(s, threshold)
        except NotTerminated:
            status = "fail"
            detail["samples"].append({"x": format_rational(s), "error": "not terminated"})
            continue
        entry = {
            "x": format_rational(s),
            "L": t.L,
            "m": format_rational(t.m),
            "expected_m": format_rational(expected),
            "seconds": round(time.monotonic() - sample_start, 3),
        }
        if t.m != expected:
            status = "fail"
        if fx.expected_L is not None:
            entry["expected_L"] = fx.expected_L
            if t.L != fx.expected_L:
                status = "fail"
        detail["samples"].append(entry)
    return FixtureResult(fx.name, status, detail, time.monotonic() - start)


def check_corner_fixture(fx: CornerFixture) -> FixtureResult:
    start = time.monotonic()
    meet = affine_intersection(fx.left, fx.right)
    ok = meet == fx.point
    detail = {
        "expected": format_rational(fx.point),
        "intersection": None if meet is None else format_rational(meet),
    }
    return FixtureResult(fx.name, "pass" if ok else "fail", detail, time.monotonic() - start)


def check_alternatives(fx: CornerAlternatives) -> FixtureResult:
    start = time.monotonic()
    meet = affine_intersection(fx.left, fx.right)
    supported = [label for label, point in fx.candidates if point == meet]
    rejected = [label for label, point in fx.candidates if point != meet]
    detail = {
        "intersection": None if meet is None else format_rational(meet),
        "supported": supported,
        "rejected": rejected,
    }
    status = "pass" if len(supported) == 1 else "fail"
    return FixtureResult(fx.name, status, detail, time.monotonic() - start)


def run_verification(fixtures: FixtureSet, tier: str = "quick", threshold: int = 10000) -> VerifyReport:
    """Run all fixtures for the tier ('quick' skips long entries, 'full' runs all)."""
    if tier not in ("quick", "full"):
        raise ValueError(f"tier must be 'quick' or 'full', got {tier!r}")
    start = time.monotonic()
    report = VerifyReport()
    for fx in fixtures.intervals:
        if tier == "quick" and fx.tier != "quick":
            report.results.append(FixtureResult(fx.name, "skip", {"tier": fx.tier}, 0.0))
            continue
        report.results.append(check_interval_fixture(fx, threshold))
    for fx in fixtures.corners:
        report.results.append(check_corner_fixture(fx))
    for fx in fixtures.alternatives:
        report.results.append(check_alternatives(fx))
    report.seconds = time.monotonic() - start
    return report
