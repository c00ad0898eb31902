"""One-step revision operators (mini, cond, lex), their iteration, and the
canonical learner whose conjecture is the set of minimal worlds."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .core import EpistemicSpace, PlausibilitySpace, Preorder, ids_of

log = logging.getLogger(__name__)

EMPTY_EXTENSION = "empty-extension"
ELIMINATED_ALL = "actual-world-eliminated-possible"


class Method(str, Enum):
    MINI = "mini"
    COND = "cond"
    LEX = "lex"

    def __str__(self) -> str:
        return self.value


class RevisionError(Exception):
    def __init__(self, position: int, label: str, cause: Exception):
        super().__init__(f"step {position} ({label!r}): {cause}")
        self.position = position
        self.label = label
        self.cause = cause


@dataclass(frozen=True)
class StepRecord:
    method: Method
    label: str
    moved: frozenset[int]  # promoted worlds (mini/lex) or eliminated ones (cond)
    note: str | None = None


@dataclass(frozen=True)
class RevisionState:
    """Revised plausibility space.

    ``alive`` is the set of surviving worlds; it stays the full world set
    under mini and lex and only shrinks under cond.  Observables keep their
    labels; their current extension is the original one cut down to
    ``alive``.
    """

    space: EpistemicSpace = field(compare=False, repr=False)
    order: Preorder
    alive: int
    log: tuple[StepRecord, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def initial(cls, pspace: PlausibilitySpace) -> "RevisionState":
        return cls(pspace.space, pspace.order, pspace.order.domain)

    @property
    def survivors(self) -> frozenset[int]:
        return ids_of(self.alive)

    def extension(self, label: str) -> int:
        return self.space.ext(label) & self.alive

    @property
    def plausibility_space(self) -> PlausibilitySpace:
        return PlausibilitySpace(self.space, self.order)


def _as_state(x) -> RevisionState:
    if isinstance(x, RevisionState):
        return x
    if isinstance(x, PlausibilitySpace):
        return RevisionState.initial(x)
    raise TypeError(f"expected RevisionState or PlausibilitySpace, got {type(x).__name__}")


def mini_step(state, label: str) -> RevisionState:
    state = _as_state(state)
    order = state.order
    p = state.extension(label)
    promoted = order.min_mask(p)
    note = None
    if not p:
        note = EMPTY_EXTENSION
        log.debug("mini: observable %r has empty extension, order unchanged", label)
    dom = order.domain
    rows = tuple(
        ((r & promoted) | (dom & ~promoted)) if (promoted >> s) & 1 else (r & ~promoted)
        for s, r in enumerate(order.rows)
    )
    rec = StepRecord(Method.MINI, label, ids_of(promoted), note)
    return RevisionState(state.space, Preorder(order.n, rows, dom), state.alive,
                         state.log + (rec,))


def lex_step(state, label: str) -> RevisionState:
    state = _as_state(state)
    order = state.order
    p = state.extension(label)
    note = None
    if not p:
        note = EMPTY_EXTENSION
        log.debug("lex: observable %r has empty extension, order unchanged", label)
    dom = order.domain
    notp = dom & ~p
    rows = tuple(
        ((r & p) | notp) if (p >> s) & 1 else (r & notp)
        for s, r in enumerate(order.rows)
    )
    rec = StepRecord(Method.LEX, label, ids_of(p), note)
    return RevisionState(state.space, Preorder(order.n, rows, dom), state.alive,
                         state.log + (rec,))


def cond_step(state, label: str) -> RevisionState:
    state = _as_state(state)
    p = state.space.ext(label)
    alive = state.alive & p
    note = ELIMINATED_ALL if not alive else None
    rec = StepRecord(Method.COND, label, ids_of(state.alive & ~p), note)
    return RevisionState(state.space, state.order.restrict(alive), alive,
                         state.log + (rec,))


_STEPS = {Method.MINI: mini_step, Method.COND: cond_step, Method.LEX: lex_step}


def step(method, state, label: str) -> RevisionState:
    return _STEPS[Method(method)](state, label)


def iterate(method, initial, seq: Iterable[str]) -> RevisionState:
    """Left fold of the one-step operator over ``seq``."""
    fn = _STEPS[Method(method)]
    state = _as_state(initial)
    for i, label in enumerate(seq):
        try:
            state = fn(state, label)
        except KeyError as exc:
            raise RevisionError(i, label, exc) from exc
    return state


def conjecture(state) -> frozenset[int]:
    state = _as_state(state)
    return ids_of(state.order.min_mask(state.alive))


def conjecture_mask(state: RevisionState) -> int:
    return state.order.min_mask(state.alive)
