"""JSON formats for modules, pi-points, resolutions, truncations and reports.

Module files (version 1)::

    {"version": 1, "p": 2, "r": 2, "dim": 3, "action": [[[...]], [[...]]]}

``action`` holds r row-major dim x dim integer matrices with entries in
[0, p).  A pi-point is ``{"linear": [..], "tail": [{"exponent": [..],
"coefficient": c}, ..]}`` with the tail optional.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .algebra import Module, PiPoint

FORMAT_VERSION = 1


class SchemaError(ValueError):
    """Malformed input; the message names the offending field or line."""


def _load_json(source: Union[str, Path, dict]) -> Any:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _int(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{where}.{key}: expected an integer, got {type(v).__name__}")
    return v


def _matrix(value, n: int, p: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise SchemaError(f"{where}: expected {n} rows")
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{where}[{i}]: expected {n} entries")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < p:
                raise SchemaError(f"{where}[{i}][{j}]: expected an integer in [0, {p})")
    return np.array(value, dtype=np.int64).reshape(n, n)


def module_from_dict(obj: dict, where: str = "module") -> Module:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    version = obj.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SchemaError(f"{where}.version: unsupported version {version}")
    p = _int(obj, "p", where)
    r = _int(obj, "r", where)
    n = _int(obj, "dim", where)
    if r < 1 or n < 0:
        raise SchemaError(f"{where}: need r >= 1 and dim >= 0")
    action = obj.get("action")
    if not isinstance(action, list) or len(action) != r:
        raise SchemaError(f"{where}.action: expected {r} matrices")
    try:
        mats = tuple(_matrix(a, n, p, f"{where}.action[{i}]") for i, a in enumerate(action))
        M = Module(p, mats, str(obj.get("name", "")))
    except SchemaError:
        raise
    except ValueError as e:
        raise SchemaError(f"{where}: {e}") from None
    return M


def module_to_dict(M: Module) -> dict:
    return {
        "version": FORMAT_VERSION,
        "p": M.p,
        "r": M.r,
        "dim": M.dim,
        "action": [a.tolist() for a in M.action],
        **({"name": M.name} if M.name else {}),
    }


def load_module(source) -> Module:
    return module_from_dict(_load_json(source), str(source) if not isinstance(source, dict) else "module")


def save_module(M: Module, path) -> None:
    Path(path).write_text(json.dumps(module_to_dict(M)) + "\n")


def point_from_dict(obj: dict, r: int | None = None, where: str = "point") -> PiPoint:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    lin = obj.get("linear")
    if not isinstance(lin, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in lin):
        raise SchemaError(f"{where}.linear: expected an array of integers")
    if r is not None and len(lin) != r:
        raise SchemaError(f"{where}.linear: expected {r} entries")
    tail = []
    for i, t in enumerate(obj.get("tail", [])):
        if not isinstance(t, dict) or "exponent" not in t or "coefficient" not in t:
            raise SchemaError(f"{where}.tail[{i}]: expected {{exponent, coefficient}}")
        tail.append((tuple(t["exponent"]), int(t["coefficient"])))
    try:
        return PiPoint(tuple(lin), tuple(tail))
    except ValueError as e:
        raise SchemaError(f"{where}: {e}") from None


def point_to_dict(pt: PiPoint) -> dict:
    out: dict = {"linear": list(pt.linear)}
    if pt.tail:
        out["tail"] = [{"exponent": list(e), "coefficient": c} for e, c in pt.tail]
    return out


def parse_point(text: str, r: int) -> PiPoint:
    """A point given inline as JSON or as comma-separated linear coefficients."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"point: column {e.colno}: {e.msg}") from None
        return point_from_dict(obj, r)
    try:
        lin = [int(c) for c in text.split(",")]
    except ValueError:
        raise SchemaError(f"point: cannot parse '{text}'") from None
    return point_from_dict({"linear": lin}, r)


def resolution_dump(res, depth: int) -> dict:
    return {
        "p": res.p,
        "s": res.s,
        "ranks": [res.rank(n) for n in range(depth + 1)],
        "boundaries": [res.boundary(n).tolist() for n in range(1, depth + 1)],
    }


def truncation_dump(E) -> dict:
    return {**module_to_dict(E.module), "layers": E.manifest()}


def to_jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n")
