"""JSON documents for spaces, priors, streams, tell-tale maps and verdicts.

Space::

    {"worlds": ["u", "s", "t"], "observables": {"p": ["u", "s"], "q": ["s", "t"]}}

Prior (weak order, most plausible layer first)::

    {"layers": [["t"], ["u"], ["s"]]}

Prior (general preorder; reflexive-transitive closure is taken)::

    {"pairs": [["t", "s"], ["u", "s"]]}

Stream::

    {"prefix": ["q"], "cycle": ["p"]}

Worlds and observables are always written in declaration order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import EpistemicSpace, Preorder, SpaceError
from .revision import Method
from .streams import StreamSpec
from .telltale import TellTaleFailure, TellTaleMap
from .verifier import SOUND_COMPLETE, Status, Verdict


class InputError(ValueError):
    """Unreadable or semantically invalid input document."""

    def __init__(self, message: str, path: str | None = None,
                 line: int | None = None, column: int | None = None):
        loc = path or "<input>"
        if line is not None:
            loc += f":{line}:{column}"
        super().__init__(f"{loc}: {message}")
        self.path, self.line, self.column = path, line, column


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    return loads(text, str(path))


def loads(text: str, path: str | None = None) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, path, exc.lineno, exc.colno) from None


def _expect(doc, key: str, kind, what: str, path: str | None):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{what}: missing field {key!r}", path)
    val = doc[key]
    if not isinstance(val, kind):
        raise InputError(f"{what}: field {key!r} has the wrong type", path)
    return val


# -- spaces -----------------------------------------------------------------

def space_to_dict(space: EpistemicSpace) -> dict:
    return {
        "worlds": [w.name for w in space.worlds],
        "observables": {o.label: space.names(o.extension) for o in space.observables},
    }


def space_from_dict(doc, path: str | None = None) -> EpistemicSpace:
    worlds = _expect(doc, "worlds", list, "space", path)
    obs = _expect(doc, "observables", dict, "space", path)
    if not all(isinstance(w, str) for w in worlds):
        raise InputError("space: world names must be strings", path)
    for label, members in obs.items():
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            raise InputError(f"space: observable {label!r} must list world names", path)
    try:
        space = EpistemicSpace.build(worlds, obs)
    except SpaceError as exc:
        raise InputError(f"space: {exc}", path) from None
    return space


# -- priors -----------------------------------------------------------------

def preorder_to_dict(order: Preorder, space: EpistemicSpace) -> dict:
    if order.total:
        return {"layers": [[space.name(s) for s in layer] for layer in order.layers()]}
    return {"pairs": [[space.name(s), space.name(t)] for s, t in order.pairs()]}


def preorder_from_dict(doc, space: EpistemicSpace, path: str | None = None) -> Preorder:
    if not isinstance(doc, dict) or ("layers" in doc) == ("pairs" in doc):
        raise InputError("prior: exactly one of 'layers' or 'pairs' is required", path)

    def ident(name):
        if not isinstance(name, str):
            raise InputError("prior: world names must be strings", path)
        try:
            return space.world_id(name)
        except KeyError:
            raise InputError(f"prior: unknown world {name!r}", path) from None

    if "layers" in doc:
        layers = [[ident(w) for w in layer] for layer in doc["layers"]]
        flat = [w for layer in layers for w in layer]
        if sorted(flat) != list(range(space.size)):
            raise InputError("prior: layers must mention every world exactly once", path)
        return Preorder.from_layers(space.size, layers)
    pairs = []
    for pair in doc["pairs"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("prior: each pair must be [a, b]", path)
        pairs.append((ident(pair[0]), ident(pair[1])))
    return Preorder.from_pairs(space.size, pairs)


# -- streams ----------------------------------------------------------------

def stream_to_dict(spec: StreamSpec) -> dict:
    return {"prefix": list(spec.prefix), "cycle": list(spec.cycle)}


def stream_from_dict(doc, space: EpistemicSpace | None = None,
                     path: str | None = None) -> StreamSpec:
    prefix = _expect(doc, "prefix", list, "stream", path)
    cycle = _expect(doc, "cycle", list, "stream", path)
    if not cycle:
        raise InputError("stream: cycle must be nonempty", path)
    if space is not None:
        for label in prefix + cycle:
            if label not in space.labels:
                raise InputError(f"stream: unknown observable {label!r}", path)
    return StreamSpec(tuple(prefix), tuple(cycle))


# -- tell-tales ---------------------------------------------------------------

def telltale_to_dict(outcome, space: EpistemicSpace) -> dict:
    if isinstance(outcome, TellTaleFailure):
        return {"kind": outcome.kind, "failure": space.name(outcome.world),
                "reason": outcome.reason}
    return {"kind": outcome.kind, "map": outcome.to_names(space)}


def telltale_from_dict(doc, space: EpistemicSpace):
    if "failure" in doc:
        return TellTaleFailure(doc["kind"], space.world_id(doc["failure"]),
                               doc.get("reason", ""))
    return TellTaleMap(doc["kind"], {space.world_id(w): frozenset(ls)
                                     for w, ls in doc["map"].items()})


# -- verdicts -----------------------------------------------------------------

def verdict_to_dict(v: Verdict, space: EpistemicSpace) -> dict:
    out = {
        "status": v.status.value,
        "target": space.name(v.target),
        "method": v.method.value,
        "mode": v.mode,
    }
    if v.witness is not None:
        out["witness"] = stream_to_dict(v.witness)
    if v.corrections:
        out["corrections"] = [list(c) for c in v.corrections]
    return out


def verdict_from_dict(doc, space: EpistemicSpace) -> Verdict:
    w = doc.get("witness")
    return Verdict(
        Status(doc["status"]),
        space.world_id(doc["target"]),
        Method(doc["method"]),
        doc.get("mode", SOUND_COMPLETE),
        stream_from_dict(w, space) if w is not None else None,
        tuple(tuple(c) for c in doc.get("corrections", ())),
    )


def format_order(order: Preorder, space: EpistemicSpace) -> str:
    """``t < u ~ s`` for weak orders; explicit strict/tie pairs otherwise."""
    if order.total:
        return " < ".join(" ~ ".join(space.name(s) for s in layer)
                          for layer in order.layers())
    parts = []
    for s, t in order.pairs():
        if order.lt(s, t):
            parts.append(f"{space.name(s)} < {space.name(t)}")
        elif s < t:
            parts.append(f"{space.name(s)} ~ {space.name(t)}")
    dom = [space.name(s) for s in range(space.size) if (order.domain >> s) & 1]
    return "{" + ", ".join(parts) + "} over {" + ", ".join(dom) + "}"


def format_worlds(space: EpistemicSpace, ids) -> str:
    return "{" + ", ".join(space.names(ids)) + "}"


__all__ = [
    "InputError", "load_json", "loads",
    "space_to_dict", "space_from_dict", "preorder_to_dict", "preorder_from_dict",
    "stream_to_dict", "stream_from_dict", "telltale_to_dict", "telltale_from_dict",
    "verdict_to_dict", "verdict_from_dict", "format_order", "format_worlds",
]
