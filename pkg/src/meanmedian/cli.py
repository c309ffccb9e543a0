"""Command line front end.

Commands: traj, sweep, corners, sigma, verify-paper.  Exit codes: 0 ok,
2 usage or config error, 3 not terminated, 4 eps underflow, 5 fixture
failure.  MMM_THRESHOLD overrides the default iteration threshold; an
explicit --threshold flag wins over the environment.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from meanmedian import fixtures as fixtures_mod
from meanmedian.certify import (
    Atom,
    EpsUnderflow,
    SweepConfig,
    SweepState,
    aggregate,
    sweep,
)
from meanmedian.exact import format_rational, parse_rational
from meanmedian.stream import (
    Journal,
    config_fingerprint,
    piece_to_line,
    read_journal,
    read_pieces,
    truncate_stream,
    write_journal,
)
from meanmedian.trajectory import DEFAULT_THRESHOLD, NotTerminated, run_trajectory

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_TERMINATED = 3
EXIT_EPS_UNDERFLOW = 4
EXIT_FIXTURE_FAILURE = 5


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _env_threshold() -> int:
    raw = os.environ.get("MMM_THRESHOLD")
    if raw is None:
        return DEFAULT_THRESHOLD
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE)
    return value


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _parse_rational_arg(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise _CliError(f"{what}: not a rational literal: {text!r}")


def cmd_traj(args) -> int:
    x = _parse_rational_arg(args.x, "x")
    if not 0 < x < 1:
        raise _CliError(f"x must satisfy 0 < x < 1, got {args.x}")
    try:
        t = run_trajectory(x, args.threshold)
    except NotTerminated as exc:
        print(_dump({"terminated": False, "threshold": exc.threshold, "points_computed": len(exc.points)}))
        return EXIT_NOT_TERMINATED
    if args.emit_points:
        print(_dump(t.to_json()))
    else:
        print(_dump({"L": t.L, "m": format_rational(t.m)}))
    return EXIT_OK


def _sweep_config(args) -> SweepConfig:
    seed = _parse_rational_arg(args.seed, "--seed")
    eps0 = _parse_rational_arg(args.eps0, "--eps0")
    eps_floor = _parse_rational_arg(args.eps_floor, "--eps-floor")
    target = None if args.target is None else _parse_rational_arg(args.target, "--target")
    if args.max_atoms is None and target is None and args.max_segments is None:
        raise _CliError("need at least one stop condition (--max-atoms, --target or --max-segments)")
    try:
        return SweepConfig(
            seed=seed,
            direction=args.direction,
            eps0=eps0,
            eps_shrink=args.eps_shrink,
            eps_floor=eps_floor,
            threshold=args.threshold,
            max_atoms=args.max_atoms,
            target=target,
            max_segments=args.max_segments,
        )
    except ValueError as exc:
        raise _CliError(str(exc))


def _summarize(pieces) -> dict:
    subs, segments, corners = aggregate(pieces)
    atoms = sum(1 for p in pieces if isinstance(p, Atom))
    return {
        "pieces": len(pieces),
        "atoms": atoms,
        "singletons": len(pieces) - atoms,
        "subintervals": [
            {
                "start": format_rational(s.interval.lo),
                "end": format_rational(s.interval.hi),
                "L": s.L,
                "atoms": len(s.atoms),
            }
            for s in subs
        ],
        "corners": [format_rational(c) for c in corners],
        "segments": [
            {
                "start": format_rational(s.interval.lo),
                "end": format_rational(s.interval.hi),
                "m": s.m_form.to_json(),
            }
            for s in segments
        ],
    }


def _run_sweep_to_file(cfg: SweepConfig, args) -> tuple[list, SweepState]:
    fingerprint = config_fingerprint(cfg, args.with_driving)
    out_path = args.out
    journal_path = args.journal or f"{out_path}.journal"
    state = SweepState(frontier=cfg.seed)
    emitted = []
    if args.resume:
        if not os.path.exists(journal_path):
            raise _CliError(f"cannot resume: journal {journal_path} not found")
        journal = read_journal(journal_path)
        if journal.config != fingerprint:
            raise _CliError("cannot resume: journal does not match this configuration")
        truncate_stream(out_path, journal.pieces)
        emitted = read_pieces(out_path)
        state = journal.to_state()
        if journal.done:
            return emitted, state
    else:
        open(out_path, "w").close()

    abort_after = getattr(args, "abort_after_pieces", None)
    with open(out_path, "a", encoding="utf-8") as fh:
        for piece in sweep(cfg, state):
            fh.write(piece_to_line(piece, args.with_driving) + "\n")
            fh.flush()
            emitted.append(piece)
            write_journal(journal_path, Journal.from_state(fingerprint, cfg, state))
            if abort_after is not None and state.pieces >= abort_after:
                fh.write('{"kind":"atom","interv')  # torn write, then hard crash
                fh.flush()
                os._exit(9)
    state.done = True
    write_journal(journal_path, Journal.from_state(fingerprint, cfg, state))
    return emitted, state


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    if args.out is None:
        if args.resume:
            raise _CliError("--resume requires --out")
        pieces = list(sweep(cfg))
        for p in pieces:
            print(piece_to_line(p, args.with_driving))
        print(_dump(_summarize(pieces)))
        return EXIT_OK
    pieces, _stt = _run_sweep_to_file(cfg, args)
    print(_dump(_summarize(pieces)))
    return EXIT_OK


def cmd_corners(args) -> int:
    cfg = _sweep_config(args)
    pieces = list(sweep(cfg))
    summary = _summarize(pieces)
    print(_dump({"corners": summary["corners"], "segments": summary["segments"]}))
    return EXIT_OK


def cmd_sigma(args) -> int:
    from meanmedian.perms import sigma_sequence

    pieces = read_pieces(args.infile)
    subs, _segments, _corners = aggregate(pieces)
    if not 0 <= args.subinterval < len(subs):
        raise _CliError(f"subinterval index out of range (0..{len(subs) - 1})")
    atoms = subs[args.subinterval].atoms
    if any(a.driving is None for a in atoms):
        raise _CliError("piece stream was written without --with-driving")
    for j, cycles in enumerate(sigma_sequence(atoms), start=1):
        print(_dump({"j": j, "cycles": [list(c) for c in cycles.cycles]}))
    return EXIT_OK


def cmd_verify(args) -> int:
    fixtures = fixtures_mod.load_fixtures(args.fixtures)
    report = fixtures_mod.run_verification(fixtures, tier=args.tier, threshold=args.threshold)
    for r in report.results:
        print(_dump({"fixture": r.name, "status": r.status, "seconds": round(r.seconds, 3), "detail": r.detail}))
    counts = report.counts()
    counts["seconds"] = round(report.seconds, 3)
    print(_dump(counts))
    return EXIT_OK if report.ok else EXIT_FIXTURE_FAILURE


def _add_sweep_flags(sp, with_out: bool):
    sp.add_argument("--seed", required=True, help="starting point (rational, e.g. 1/2)")
    sp.add_argument("--direction", choices=("left", "right"), default="right")
    sp.add_argument("--eps0", default="1/100000", help="initial probe offset")
    sp.add_argument("--eps-shrink", type=int, default=10, help="shrink factor on overshoot")
    sp.add_argument("--eps-floor", default=f"1/{10**60}", help="abort below this eps")
    sp.add_argument("--max-atoms", type=int, default=None)
    sp.add_argument("--target", default=None, help="stop once the frontier reaches this point")
    sp.add_argument("--max-segments", type=int, default=None,
                    help="stop after the first atom of the Nth distinct segment")
    sp.add_argument("--with-driving", action="store_true", help="include driving lists in output")
    if with_out:
        sp.add_argument("--out", default=None, help="piece stream file (one JSON object per line)")
        sp.add_argument("--journal", default=None, help="journal path (default: OUT.journal)")
        sp.add_argument("--resume", action="store_true", help="continue from the journal")
        sp.add_argument("--abort-after-pieces", type=int, default=None, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmm", description=__doc__)
    parser.add_argument("--threshold", type=int, default=None,
                        help="maximum trajectory index (default 10000; MMM_THRESHOLD overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("traj", help="run one trajectory")
    sp.add_argument("x", help="starting point (rational in (0,1))")
    sp.add_argument("--emit-points", action="store_true", help="include points and medians")
    sp.set_defaults(func=cmd_traj)

    sp = sub.add_parser("sweep", help="certify adjacent atoms from a seed")
    _add_sweep_flags(sp, with_out=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("corners", help="sweep and report segment corners only")
    _add_sweep_flags(sp, with_out=False)
    sp.set_defaults(func=cmd_corners)

    sp = sub.add_parser("sigma", help="transition table for one subinterval of a recorded sweep")
    sp.add_argument("--in", dest="infile", required=True, help="piece stream written with --with-driving")
    sp.add_argument("--subinterval", type=int, required=True, help="subinterval index (0-based)")
    sp.set_defaults(func=cmd_sigma)

    sp = sub.add_parser("verify-paper", help="check the recorded formula fixtures")
    sp.add_argument("--tier", choices=("quick", "full"), default="quick")
    sp.add_argument("--fixtures", default=None, help="fixture file (default: packaged data)")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.threshold is None:
        args.threshold = _env_threshold()
    if args.threshold < 4:
        print("threshold must be at least 4", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except NotTerminated as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_TERMINATED
    except EpsUnderflow as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_EPS_UNDERFLOW


if __name__ == "__main__":
    raise SystemExit(main())
