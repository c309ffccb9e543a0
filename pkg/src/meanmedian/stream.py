"""Piece streams and sweep journals.

A sweep writes one JSON object per line, append-only, so long runs stay
tail-able and diff-able.  The journal next to the stream records the cursor
after every piece; resuming truncates the stream to the journaled piece
count (discarding a torn final line) and continues, producing a byte
identical stream to an uninterrupted run.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from typing import Optional

from meanmedian.certify import Atom, Piece, SingletonPiece, SweepConfig, SweepState
from meanmedian.chain import DrivingList
from meanmedian.exact import AffineForm, RInterval, format_rational, parse_rational


def piece_to_line(piece: Piece, with_driving: bool = False) -> str:
    """Serialize one piece as a single JSON line (no newline)."""
    if isinstance(piece, SingletonPiece):
        obj = {
            "kind": "singleton",
            "interval": RInterval(piece.point, piece.point, True, True).to_json(),
            "L": piece.L,
            "m": {"a": "0", "b": format_rational(piece.m)},
            "driving_len": piece.L,
        }
    else:
        obj = {
            "kind": "atom",
            "interval": piece.interval.to_json(),
            "L": piece.L,
            "m": piece.m_form.to_json(),
            "driving_len": len(piece.driving),
        }
        if with_driving:
            obj["driving"] = list(piece.driving)
    return json.dumps(obj, separators=(",", ":"))


def piece_from_line(line: str) -> Piece:
    obj = json.loads(line)
    interval = RInterval.from_json(obj["interval"])
    form = AffineForm.from_json(obj["m"])
    if obj["kind"] == "singleton":
        return SingletonPiece(point=interval.lo, L=obj["L"], m=form.b)
    if obj["kind"] != "atom":
        raise ValueError(f"unknown piece kind {obj['kind']!r}")
    driving = obj.get("driving")
    if driving is None:
        # stream was written without --with-driving: transitions unavailable
        return Atom(interval=interval, L=obj["L"], m_form=form, driving=None)
    return Atom(interval=interval, L=obj["L"], m_form=form, driving=DrivingList(tuple(driving)))


def read_pieces(path) -> list[Piece]:
    pieces = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                pieces.append(piece_from_line(line))
    return pieces


def config_fingerprint(cfg: SweepConfig, with_driving: bool) -> str:
    parts = [
        f"seed={format_rational(cfg.seed)}",
        f"direction={cfg.direction}",
        f"eps0={format_rational(cfg.eps0)}",
        f"eps_shrink={cfg.eps_shrink}",
        f"eps_floor={format_rational(cfg.eps_floor)}",
        f"threshold={cfg.threshold}",
        f"max_atoms={cfg.max_atoms}",
        f"target={None if cfg.target is None else format_rational(cfg.target)}",
        f"max_segments={cfg.max_segments}",
        f"with_driving={bool(with_driving)}",
    ]
    return hashlib.sha256(";".join(parts).encode()).hexdigest()


@dataclass
class Journal:
    config: str
    pieces: int
    atoms: int
    frontier: str
    covered: bool
    eps: str
    segments: int
    last_form: Optional[dict]
    done: bool

    @classmethod
    def from_state(cls, fingerprint: str, cfg: SweepConfig, state: SweepState) -> "Journal":
        return cls(
            config=fingerprint,
            pieces=state.pieces,
            atoms=state.atoms,
            frontier=format_rational(state.frontier),
            covered=state.covered,
            eps=format_rational(cfg.eps0),
            segments=state.segments,
            last_form=None if state.last_form is None else state.last_form.to_json(),
            done=state.done,
        )

    def to_state(self) -> SweepState:
        return SweepState(
            frontier=parse_rational(self.frontier),
            covered=self.covered,
            pieces=self.pieces,
            atoms=self.atoms,
            segments=self.segments,
            last_form=None if self.last_form is None else AffineForm.from_json(self.last_form),
            done=self.done,
        )


def write_journal(path, journal: Journal) -> None:
    # atomic replace; a journal that lags the stream is harmless because
    # resume truncates the stream to the journaled piece count
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(journal.__dict__, fh)
        fh.write("\n")
    os.replace(tmp, path)


def read_journal(path) -> Journal:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return Journal(**obj)


def truncate_stream(path, pieces: int) -> None:
    """Keep only the first ``pieces`` complete lines (drops torn writes)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    keep = lines[:pieces]
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(keep)
