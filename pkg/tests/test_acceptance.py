"""Acceptance suite.

Every criterion is one test emitting one PASS/FAIL line (shown in the
terminal summary).  All comparisons are exact rational equality; the only
tolerances are the stated wall-clock bounds.  The three sweeps are produced
once per module through the CLI so the resume criterion can replay the exact
byte stream.
"""
import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

import conftest
from meanmedian.certify import Atom, SingletonPiece, aggregate, driving_list_of
from meanmedian.exact import AffineForm, affine_eval, affine_intersection, parse_rational
from meanmedian.fixtures import load_fixtures, run_verification
from meanmedian.perms import Permutation, sigma_sequence
from meanmedian.stream import read_pieces
from meanmedian.trajectory import run_trajectory, verify_stability

CLI = [sys.executable, "-m", "meanmedian.cli"]

FORM_1 = AffineForm(F(333, 8), F(-325, 16))
FORM_2 = AffineForm(F(-2840973, 32), F(2909701, 64))
FORM_3 = AffineForm(F(2842297, 32), F(-2910929, 64))
FORM_23_LAST = AffineForm(F(-225, 2), F(76))
FORM_23_MID = AffineForm(F(75647841, 256), F(-25055657, 128))

SUBINTERVAL_STARTS = [
    ("1/2", 73), ("341/666", 75), ("24073/47010", 77), ("24751/48334", 79),
    ("24749/48330", 81), ("784/1531", 83), ("76279/148958", 85), ("76957/150282", 87),
    ("3263/6372", 89), ("52547/102614", 91), ("133909/261498", 93), ("134587/262822", 95),
    ("82379/160870", 97), ("41359/80766", 99), ("196963/384630", 101), ("197641/385954", 103),
    ("57631/112542", 105), ("115601/225746", 107),
]


@contextmanager
def criterion(num, name):
    try:
        yield
    except Exception:
        conftest.ACCEPTANCE_LINES.append(f"criterion {num} ({name}): FAIL")
        print(f"criterion {num} ({name}): FAIL")
        raise
    conftest.ACCEPTANCE_LINES.append(f"criterion {num} ({name}): PASS")
    print(f"criterion {num} ({name}): PASS")


def run_cli(*args):
    return subprocess.run([*CLI, *args], capture_output=True, text=True)


def cli_sweep(out_path, *args):
    start = time.monotonic()
    r = run_cli("sweep", "--out", str(out_path), "--with-driving", *args)
    elapsed = time.monotonic() - start
    assert r.returncode == 0, r.stderr
    return {
        "out": out_path,
        "summary": json.loads(r.stdout),
        "pieces": read_pieces(out_path),
        "elapsed": elapsed,
        "args": args,
    }


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


@pytest.fixture(scope="module")
def half_sweep(workdir):
    return cli_sweep(
        workdir / "half.jsonl",
        "--seed", "1/2", "--direction", "right", "--max-atoms", "500",
    )


@pytest.fixture(scope="module")
def corner_sweep(workdir):
    return cli_sweep(
        workdir / "corner.jsonl",
        "--seed", "5756575/11241454", "--direction", "right", "--max-segments", "4",
    )


@pytest.fixture(scope="module")
def thirds_sweep(workdir):
    return cli_sweep(
        workdir / "thirds.jsonl",
        "--seed", "2/3", "--direction", "left", "--max-segments", "2",
    )


def test_criterion_1_trajectory_fixtures():
    with criterion(1, "trajectory fixtures"):
        start = time.monotonic()
        r = run_cli("traj", "7/12", "--emit-points")
        assert time.monotonic() - start < 1.0
        obj = json.loads(r.stdout)
        assert r.returncode == 0
        assert (obj["L"], obj["m"]) == (9, "1")
        assert obj["points"] == ["0", "7/12", "1", "3/4", "1", "7/6", "13/8", "15/8", "1"]

        start = time.monotonic()
        r = run_cli("traj", "10/19")
        assert time.monotonic() - start < 1.0
        assert r.returncode == 0
        assert r.stdout.strip() == '{"L":47,"m":"217/152"}'
        assert F(141, 4) * F(10, 19) - F(137, 8) == F(217, 152)


def test_criterion_2_first_interval_reproduction(half_sweep):
    with criterion(2, "first-interval reproduction"):
        assert half_sweep["elapsed"] <= 300.0, f"took {half_sweep['elapsed']:.1f}s"
        subs = half_sweep["summary"]["subintervals"]
        assert subs[0]["L"] == 4 and subs[0]["start"] == "1/2"  # the seed point
        observed = [(s["start"], s["L"]) for s in subs[1:]]
        assert observed[: len(SUBINTERVAL_STARTS)] == SUBINTERVAL_STARTS
        assert half_sweep["summary"]["atoms"] == 500


def test_criterion_3_corners_near_half(corner_sweep):
    with criterion(3, "corner reproduction near 1/2"):
        summary = corner_sweep["summary"]
        assert summary["corners"] == ["2911001/5684610", "339/662", "2909629/5681930"]
        forms = [AffineForm.from_json(s["m"]) for s in summary["segments"]]
        assert forms == [FORM_1, FORM_2, FORM_3, FORM_1]
        resume_point = parse_rational(summary["segments"][3]["start"])
        assert resume_point == F(2909629, 5681930)
        # the conflicting recorded value is flagged: it is not the exact
        # intersection of the adjacent forms, the sweep's value is
        alternative = F(56346353, 110033282)
        assert resume_point != alternative
        report = run_verification(load_fixtures(), tier="quick")
        alt = next(r for r in report.results if r.name == "corner:near-1/2:C")
        assert alt.status == "pass"
        assert alt.detail["supported"] == ["continuity-and-sweep"]
        assert alt.detail["rejected"] == ["recorded-piecewise-table"]


def test_criterion_4_corners_near_two_thirds(thirds_sweep):
    with criterion(4, "corner reproduction near 2/3"):
        summary = thirds_sweep["summary"]
        assert summary["corners"] == ["50130770/75676641"]
        segments = summary["segments"]  # ascending position order
        assert len(segments) == 2
        assert AffineForm.from_json(segments[1]["m"]) == FORM_23_LAST
        assert segments[1]["start"] == "50130770/75676641"
        assert segments[1]["end"] == "2/3"
        assert AffineForm.from_json(segments[0]["m"]) == FORM_23_MID
        assert segments[0]["end"] == "50130770/75676641"


def test_criterion_5_quick_tier_sampling():
    with criterion(5, "anchor neighbourhood sampling (quick tier)"):
        report = run_verification(load_fixtures(), tier="quick")
        by_name = {r.name: r for r in report.results}
        for name, r in by_name.items():
            assert r.status in ("pass", "skip"), f"{name}: {r.detail}"
        # every anchor except 8/13 sampled in the quick tier
        for frac in ("3/5", "4/7", "5/8", "5/9", "6/11", "7/11", "7/12", "7/13",
                     "9/14", "8/15", "9/16", "9/17", "10/17", "11/17", "11/18"):
            for side in ("left", "right"):
                r = by_name[f"near-{frac}:{side}"]
                assert r.status == "pass"
                for sample in r.detail["samples"]:
                    assert sample["seconds"] <= 60.0
        assert by_name["around-10/19"].status == "pass"
        for name in ("near-8/13:left", "near-8/13:right"):
            assert by_name[name].status == "skip"


def test_criterion_6_anchor_corner_set(corner_sweep, thirds_sweep):
    with criterion(6, "corner set confirmation"):
        fixtures = load_fixtures()
        anchor_corners = [fx for fx in fixtures.corners if fx.anchor_corner]
        assert len(anchor_corners) == 17
        for fx in anchor_corners:
            assert affine_intersection(fx.left, fx.right) == fx.point, fx.name
        # sweep-found corners coincide with fixture intersections
        by_name = {fx.name: fx for fx in fixtures.corners}
        near_half = [by_name["corner:near-1/2:A"], by_name["corner:near-1/2:B"]]
        expected = [affine_intersection(fx.left, fx.right) for fx in near_half]
        alt = fixtures.alternatives[0]
        expected.append(affine_intersection(alt.left, alt.right))
        assert [parse_rational(c) for c in corner_sweep["summary"]["corners"]] == expected
        fx23 = by_name["corner:near-2/3:B"]
        assert [parse_rational(c) for c in thirds_sweep["summary"]["corners"]] == [
            affine_intersection(fx23.left, fx23.right)
        ]


def _atom_oracle_check(pieces):
    checked = 0
    for piece in pieces:
        if not isinstance(piece, Atom):
            continue
        lo, hi = piece.interval.lo, piece.interval.hi
        width = hi - lo
        for s in (lo + width / 4, lo + width / 2, lo + 3 * width / 4):
            t = run_trajectory(s, 100000)
            assert t.L == piece.L
            assert t.m == affine_eval(piece.m_form, s)
            assert driving_list_of(t).order == piece.driving.order
            checked += 1
    return checked


def test_criterion_7_property_suite(half_sweep, corner_sweep, thirds_sweep):
    with criterion(7, "property suite"):
        rng = random.Random(20260808)

        # stabilization + median monotonicity, 500 random points
        for _ in range(500):
            den = rng.randint(2, 10**4)
            num = rng.randint(1, den - 1)
            t = run_trajectory(F(num, den), 100000)
            assert verify_stability(t, 25)
            diffs = [b - a for a, b in zip(t.medians, t.medians[1:])]
            assert all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)

        # both symmetry identities, 200 random points each
        for _ in range(200):
            den = rng.randint(3, 10**4)
            num = rng.randint(1, den - 1)
            x = F(num, den)
            t, s = run_trajectory(x, 100000), run_trajectory(1 - x, 100000)
            assert s.L == t.L and s.m == 1 - t.m
        for _ in range(200):
            den = rng.randint(3, 10**4)
            x = F(1, 2) + F(rng.randint(1, den), 6 * den)  # lands in (1/2, 2/3]
            assert F(1, 2) < x <= F(2, 3)
            t = run_trajectory(x, 100000)
            u = run_trajectory(x / (3 * x - 1), 100000)
            assert t.m == (3 * x - 1) * u.m

        # atom oracle equivalence on every sweep, 3 interior samples per atom
        for sweep_data in (half_sweep, corner_sweep, thirds_sweep):
            assert _atom_oracle_check(sweep_data["pieces"]) > 0

        # corner continuity on every aggregated sweep (aggregate re-validates,
        # and the boundary must be the exact intersection)
        for sweep_data in (half_sweep, corner_sweep, thirds_sweep):
            _subs, segments, corners = aggregate(sweep_data["pieces"])
            for left_seg, right_seg, c in zip(segments, segments[1:], corners):
                assert affine_intersection(left_seg.m_form, right_seg.m_form) == c

        # sigma reconstruction over the first constant-L subinterval
        subs, _segments, _corners = aggregate(half_sweep["pieces"])
        first = subs[1]
        assert (first.interval.lo, first.interval.hi) == (F(1, 2), F(341, 666))
        assert not first.interval.lo_closed and first.interval.hi_closed
        atoms = first.atoms
        assert len(atoms) == 35
        sigmas = sigma_sequence(atoms)
        assert [cf.cycles for cf in sigmas] == [((k, k + 1),) for k in range(72, 38, -1)]
        pi = Permutation(atoms[0].driving.order)
        for atom, cf in zip(atoms[1:], sigmas):
            pi = pi * cf.to_permutation(73)
            assert pi == Permutation(atom.driving.order)

        # transitions are not always adjacent transpositions: the recorded
        # second-segment subinterval opens with 3-cycles and a product of
        # two disjoint 2-cycles
        corner_subs, _s, _c = aggregate(corner_sweep["pieces"])
        seg2 = next(
            s for s in corner_subs if s.atoms and s.atoms[0].m_form == FORM_2
        )
        assert (seg2.interval.lo, seg2.interval.hi) == (F(2911001, 5684610), F(339, 662))
        assert len(seg2.atoms) == 189
        prefix = [cf.cycles for cf in sigma_sequence(seg2.atoms[:5])]
        assert prefix == [
            ((138, 140, 139),),
            ((139, 141), (140, 142)),
            ((141, 143, 142),),
            ((226, 227),),
        ]


def test_criterion_8_resume_determinism(workdir, half_sweep):
    with criterion(8, "resume determinism"):
        reference = half_sweep["out"].read_bytes()
        out = workdir / "half_crashed.jsonl"
        crashed = run_cli(
            "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "500",
            "--with-driving", "--out", str(out), "--abort-after-pieces", "200",
        )
        assert crashed.returncode == 9
        partial = out.read_bytes()
        assert not partial.endswith(b"\n")  # torn final write
        assert len(partial.splitlines()) == 201
        resumed = run_cli(
            "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "500",
            "--with-driving", "--out", str(out), "--resume",
        )
        assert resumed.returncode == 0, resumed.stderr
        assert out.read_bytes() == reference
