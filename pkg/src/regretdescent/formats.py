"""JSON file formats.

``polymatrix-v1``::

    {"format": "polymatrix-v1",
     "players": [{"strategies": 2}, ...],
     "edges": [{"u": 0, "v": 1, "payoffs_u": [[...]], "payoffs_v": [[...]]}, ...],
     "normalized": false}

``bayes2p-v1``::

    {"format": "bayes2p-v1",
     "dims": {"m": 2, "n": 3, "k1": 2, "k2": 2},
     "p": [[...]],            # m x n
     "R": [[<k1 x k2>, ...]], # m x n grid of matrices
     "C": [[<k1 x k2>, ...]],
     "rescaled": false}

Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .bayesian import BayesianGame
from .game import Edge, PolymatrixGame

GAME_FORMAT = "polymatrix-v1"
BAYES_FORMAT = "bayes2p-v1"
PROFILE_FORMAT = "profile-v1"
RESULT_FORMAT = "solve-result-v1"


class FormatError(ValueError):
    """A file that does not match its declared format."""


def _scalar(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite number {value!r}")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with full-precision floats; flat lists stay on one line."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {_scalar(v)}" for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def write_json(obj, path) -> None:
    text = dumps(obj) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return data


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field '{key}'")
    return obj[key]


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise FormatError(f"{where}: must be at least {minimum}, got {value}")
    return value


def _array(value, shape: tuple[int, ...], where: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: not a numeric array of shape {shape}") from exc
    if arr.shape != shape:
        raise FormatError(f"{where}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{where}: non-finite entry")
    return arr


def _check_tag(data: dict, expected: str, where: str):
    tag = data.get("format")
    if tag != expected:
        raise FormatError(f"{where}: field 'format' must be '{expected}', got {tag!r}")


def game_to_dict(game: PolymatrixGame) -> dict:
    return {
        "format": GAME_FORMAT,
        "players": [{"strategies": m} for m in game.strategy_counts],
        "edges": [
            {"u": e.u, "v": e.v, "payoffs_u": e.payoffs_u, "payoffs_v": e.payoffs_v}
            for e in game.edges
        ],
        "normalized": game.normalized,
    }


def game_from_dict(data: dict, where: str = "game") -> PolymatrixGame:
    _check_tag(data, GAME_FORMAT, where)
    players = _field(data, "players", where)
    if not isinstance(players, list) or not players:
        raise FormatError(f"{where}.players: expected a non-empty array")
    counts = [_int(_field(p, "strategies", f"{where}.players[{i}]"),
                   f"{where}.players[{i}].strategies", 1) for i, p in enumerate(players)]
    edges_raw = _field(data, "edges", where)
    if not isinstance(edges_raw, list):
        raise FormatError(f"{where}.edges: expected an array")
    edges = []
    for k, e in enumerate(edges_raw):
        at = f"{where}.edges[{k}]"
        u = _int(_field(e, "u", at), f"{at}.u", 0)
        v = _int(_field(e, "v", at), f"{at}.v", 0)
        for idx, name in ((u, "u"), (v, "v")):
            if idx >= len(counts):
                raise FormatError(f"{at}.{name}: player {idx} out of range")
        a_u = _array(_field(e, "payoffs_u", at), (counts[u], counts[v]), f"{at}.payoffs_u")
        a_v = _array(_field(e, "payoffs_v", at), (counts[v], counts[u]), f"{at}.payoffs_v")
        edges.append(Edge(u, v, a_u, a_v))
    normalized = data.get("normalized", False)
    if not isinstance(normalized, bool):
        raise FormatError(f"{where}.normalized: expected true or false")
    return PolymatrixGame(tuple(counts), tuple(edges), normalized)


def bayes_to_dict(game: BayesianGame) -> dict:
    return {
        "format": BAYES_FORMAT,
        "dims": {"m": game.row_types, "n": game.col_types,
                 "k1": game.row_strategies, "k2": game.col_strategies},
        "p": game.p,
        "R": game.R.tolist(),
        "C": game.C.tolist(),
        "rescaled": game.rescaled,
    }


def bayes_from_dict(data: dict, where: str = "bayes") -> BayesianGame:
    _check_tag(data, BAYES_FORMAT, where)
    dims = _field(data, "dims", where)
    m, n, k1, k2 = (_int(_field(dims, key, f"{where}.dims"), f"{where}.dims.{key}", 1)
                    for key in ("m", "n", "k1", "k2"))
    p = _array(_field(data, "p", where), (m, n), f"{where}.p")
    R = _array(_field(data, "R", where), (m, n, k1, k2), f"{where}.R")
    C = _array(_field(data, "C", where), (m, n, k1, k2), f"{where}.C")
    rescaled = data.get("rescaled", False)
    if not isinstance(rescaled, bool):
        raise FormatError(f"{where}.rescaled: expected true or false")
    return BayesianGame(p, R, C, rescaled)


def profile_to_dict(profile) -> dict:
    return {"format": PROFILE_FORMAT, "strategies": [np.asarray(x, dtype=float) for x in profile]}


def profile_from_dict(data: dict, where: str = "profile") -> list[list[float]]:
    """Strategies from a profile file or from a solve result's ``profile``."""
    tag = data.get("format")
    if tag == RESULT_FORMAT:
        strategies = _field(data, "profile", where)
    elif tag == PROFILE_FORMAT:
        strategies = _field(data, "strategies", where)
    else:
        raise FormatError(f"{where}: field 'format' must be '{PROFILE_FORMAT}' or '{RESULT_FORMAT}'")
    if not isinstance(strategies, list):
        raise FormatError(f"{where}: strategies must be an array of arrays")
    out = []
    for i, s in enumerate(strategies):
        if not isinstance(s, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in s):
            raise FormatError(f"{where}.strategies[{i}]: expected an array of numbers")
        out.append([float(v) for v in s])
    return out


def result_to_dict(result) -> dict:
    return {
        "format": RESULT_FORMAT,
        "delta": result.delta,
        "termination": result.termination,
        "iterations": result.iterations,
        "max_regret": result.max_regret,
        "worst_player": result.report.worst_player,
        "profile": [np.asarray(x, dtype=float) for x in result.profile],
    }


def load_game(path) -> PolymatrixGame:
    return game_from_dict(load_json(path), str(path))


def load_bayes(path) -> BayesianGame:
    return bayes_from_dict(load_json(path), str(path))


def save_game(game: PolymatrixGame, path) -> None:
    write_json(game_to_dict(game), path)


def save_bayes(game: BayesianGame, path) -> None:
    write_json(bayes_to_dict(game), path)
