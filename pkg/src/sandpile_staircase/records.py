"""
Text and JSON formats shared by the CLI.

    parts      "6,6,3,3,1,1"            ("" for the empty configuration)
    step       "(2;101;1)"              SPM decomposition step (l;u;m)
    level      "[4,1] (1;2;01)"         IPM decomposition level, basis then (c;p;u)
    sequence   "0,0,1"                  generating sequence
    record     {"parts": [...], "width": w}  or  {"parts": [...], "basis": [w, l]}
               with an optional "chain" of step or level strings
"""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass

from sandpile_staircase.ipm.basis import IpmBasis
from sandpile_staircase.ipm.decompose import IpmLevel
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.structure.decompose import DecompStep

_STEP = re.compile(r"^\((\d+);([01]*);(\d+)\)$")
_LEVEL = re.compile(r"^\[(\d+),(\d+)\] \((\d+);(\d+);([01]*)\)$")


def _ints(text: str, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise ValueError(f"malformed {what} {text!r}: expected comma-separated integers") from e
    if any(v < 0 for v in values):
        raise ValueError(f"malformed {what} {text!r}: negative value")
    return values


def format_parts(c: Configuration) -> str:
    return str(c)


def parse_parts(text: str) -> Configuration:
    """Raises ValueError (or NotAPartition) on malformed input."""
    return Configuration(_ints(text, "configuration"))


def format_sequence(seq: Sequence[int]) -> str:
    return ",".join(map(str, seq))


def parse_sequence(text: str) -> tuple[int, ...]:
    return _ints(text, "sequence")


def format_step(step: DecompStep) -> str:
    return str(step)


def parse_step(text: str) -> DecompStep:
    match = _STEP.match(text.strip())
    if not match:
        raise ValueError(f"malformed step {text!r}: expected (l;u;m)")
    l, u, m = match.groups()
    return DecompStep(int(l), tuple(int(b) for b in u), int(m))


def format_level(level: IpmLevel) -> str:
    return str(level)


def parse_level(text: str, k: int) -> IpmLevel:
    match = _LEVEL.match(text.strip())
    if not match:
        raise ValueError(f"malformed level {text!r}: expected [w,l] (c;p;u)")
    w, l, c, p, u = match.groups()
    return IpmLevel(IpmBasis(k, int(w), int(l)), int(c), int(p), tuple(int(b) for b in u))


@dataclass(frozen=True)
class OutputRecord:
    """One configuration as printed by `list --format json`."""

    parts: Configuration
    width: int | None = None
    basis: IpmBasis | None = None
    chain: tuple[DecompStep | IpmLevel, ...] | None = None

    def to_json(self) -> str:
        payload: dict[str, object] = {"parts": list(self.parts.parts)}
        if self.basis is not None:
            payload["basis"] = [self.basis.w, self.basis.l]
        else:
            payload["width"] = self.width
        if self.chain is not None:
            payload["chain"] = [str(s) for s in self.chain]
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str, k: int | None = None) -> OutputRecord:
        """
        Parse one JSON line; k is needed to read a "basis" record.

        Raises:
            ValueError: on malformed JSON or missing fields.
        """
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as e:
            raise ValueError(f"malformed record: {e}") from e
        if not isinstance(payload, dict) or "parts" not in payload:
            raise ValueError("a record is a JSON object with a 'parts' field")
        parts = Configuration(tuple(payload["parts"]))
        basis = None
        width = None
        if "basis" in payload:
            if k is None:
                raise ValueError("reading a basis record needs k")
            w, l = payload["basis"]
            basis = IpmBasis(k, w, l)
        else:
            width = payload.get("width")
        chain = None
        if "chain" in payload:
            if basis is not None:
                chain = tuple(parse_level(s, k) for s in payload["chain"])
            else:
                chain = tuple(parse_step(s) for s in payload["chain"])
        return cls(parts, width, basis, chain)
