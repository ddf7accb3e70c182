"""JSON files for algebras and frames.

Algebra file::

    {"elements": ["0", "a", "1"], "leq": [["0", "a"], ["a", "1"]],
     "to": [[...]], "from": [[...]]}

``leq`` may list covering pairs or the full order; the reflexive-transitive
closure is taken.  ``to``/``from`` rows are indexed by the left argument.  A
missing ``to`` table means ``x -> y = 1`` and a missing ``from`` table means
``x <- y = 0``.

Frame file::

    {"points": [["1"], ["a", "1"]], "leq": [[0, 1]], "R": [[0, 0], [0, 1], [1, 1]], "S": [...]}

Points are names or lists of names (prime filters); ``leq``, ``R`` and ``S``
are lists of index pairs.  A missing relation is empty.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import ArrowAlgebra, make_algebra
from .frames import Frame, make_frame
from .lattice import FiniteBDL, validate_bdl


class FormatError(ValueError):
    """Malformed algebra or frame document."""


def _need(doc: dict, key: str, kind: type) -> Any:
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise FormatError(f"field {key!r} must be a {kind.__name__}")
    return doc[key]


# -- algebras ------------------------------------------------------------------


def lattice_from_doc(doc: dict) -> FiniteBDL:
    names = [str(e) for e in _need(doc, "elements", list)]
    if not names:
        raise FormatError("an algebra needs at least one element")
    if len(set(names)) != len(names):
        raise FormatError("element names must be distinct")
    pos = {e: i for i, e in enumerate(names)}
    leq = np.eye(len(names), dtype=bool)
    for pair in doc.get("leq", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"bad order pair {pair!r}")
        try:
            leq[pos[str(pair[0])], pos[str(pair[1])]] = True
        except KeyError as e:
            raise FormatError(f"unknown element {e.args[0]!r} in leq") from None
    # closure
    n = len(names)
    for k in range(n):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    return validate_bdl(names, leq)


def _table(doc: dict, key: str, L: FiniteBDL, default: int) -> np.ndarray:
    n = L.n
    if key not in doc:
        return np.full((n, n), default, dtype=np.int64)
    rows = doc[key]
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise FormatError(f"table {key!r} must be {n}x{n}")
    pos = {e: i for i, e in enumerate(L.names)}
    try:
        return np.array([[pos[str(v)] for v in r] for r in rows], dtype=np.int64)
    except KeyError as e:
        raise FormatError(f"unknown element {e.args[0]!r} in table {key!r}") from None


def algebra_from_doc(doc: dict, name: str = "") -> ArrowAlgebra:
    if not isinstance(doc, dict):
        raise FormatError("an algebra document must be a JSON object")
    L = lattice_from_doc(doc)
    return make_algebra(L, _table(doc, "to", L, L.top), _table(doc, "from", L, L.bottom), name)


def covers(leq: np.ndarray) -> list[tuple[int, int]]:
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    return [
        (i, j)
        for i in range(n)
        for j in range(n)
        if strict[i, j] and not any(strict[i, k] and strict[k, j] for k in range(n))
    ]


def algebra_to_doc(alg: ArrowAlgebra) -> dict:
    names = list(alg.names)
    return {
        "elements": names,
        "leq": [[names[i], names[j]] for i, j in covers(alg.lattice.leq)],
        "to": [[names[v] for v in row] for row in alg.imp],
        "from": [[names[v] for v in row] for row in alg.dif],
    }


# -- frames --------------------------------------------------------------------


def _point_label(p) -> str:
    if isinstance(p, list):
        return "{" + ",".join(str(v) for v in p) + "}"
    return str(p)


def _pairs(doc: dict, key: str, m: int) -> np.ndarray | None:
    if key not in doc:
        return None
    out = np.zeros((m, m), dtype=bool)
    for pair in doc[key]:
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(v, int) for v in pair):
            raise FormatError(f"bad pair {pair!r} in {key!r}")
        i, j = pair
        if not (0 <= i < m and 0 <= j < m):
            raise FormatError(f"point index out of range in {key!r}: {pair!r}")
        out[i, j] = True
    return out


def frame_from_doc(doc: dict) -> Frame:
    if not isinstance(doc, dict):
        raise FormatError("a frame document must be a JSON object")
    pts = _need(doc, "points", list)
    m = len(pts)
    leq = _pairs(doc, "leq", m)
    leq = np.eye(m, dtype=bool) if leq is None else leq | np.eye(m, dtype=bool)
    for k in range(m):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    R = _pairs(doc, "R", m)
    S = _pairs(doc, "S", m)
    return make_frame(leq, R, S, [_point_label(p) for p in pts])


def _pair_list(mat: np.ndarray | None) -> list[list[int]]:
    if mat is None:
        return []
    return [[int(i), int(j)] for i, j in zip(*np.nonzero(mat))]


def frame_to_doc(f: Frame, points: list | None = None) -> dict:
    """``points`` overrides the point labels (e.g. prime filters as name lists)."""
    strict = f.leq & ~np.eye(f.m, dtype=bool)
    doc: dict = {"points": points if points is not None else [f.label(i) for i in range(f.m)]}
    doc["leq"] = _pair_list(strict)
    if f.R is not None:
        doc["R"] = _pair_list(f.R)
    if f.S is not None:
        doc["S"] = _pair_list(f.S)
    return doc


# -- files ---------------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=False, separators=(",", ":")) + "\n"


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def read_algebra(path: str | Path) -> ArrowAlgebra:
    return algebra_from_doc(read_json(path), Path(path).stem)


def read_frame(path: str | Path) -> Frame:
    return frame_from_doc(read_json(path))


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def content_hash(key: tuple) -> str:
    """16 hex digits of SHA-256 over an isomorphism key."""
    h = hashlib.sha256()
    for part in key:
        h.update(part if isinstance(part, bytes) else repr(part).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]
