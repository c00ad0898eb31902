"""Finite data sequences and eventually periodic streams (prefix followed by a
repeating cycle), with the soundness, completeness and fairness predicates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .core import EpistemicSpace, negation_pairing

DataSequence = tuple[str, ...]


class NotNegationClosed(ValueError):
    pass


class NoSoundStream(ValueError):
    """The world satisfies no observable, so no infinite sound stream exists."""


@dataclass(frozen=True)
class StreamSpec:
    prefix: DataSequence
    cycle: DataSequence

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("stream cycle must be nonempty")

    def labels(self) -> frozenset[str]:
        return frozenset(self.prefix) | frozenset(self.cycle)

    def item(self, k: int) -> str:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def __str__(self) -> str:
        return f"<{', '.join(self.prefix)}>({', '.join(self.cycle)})^w"


def unroll(spec: StreamSpec, k: int) -> DataSequence:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return tuple(spec.item(i) for i in range(k))


def _items(x: Union[StreamSpec, Sequence[str]]) -> tuple[str, ...]:
    if isinstance(x, StreamSpec):
        return x.prefix + x.cycle
    return tuple(x)


def is_sound(space: EpistemicSpace, x, s: int) -> bool:
    return all((space.ext(label) >> s) & 1 for label in _items(x))


def is_complete(space: EpistemicSpace, x, s: int) -> bool:
    return space.observables_of(s) <= set(_items(x))


def fair_corrections(space: EpistemicSpace, spec: StreamSpec, s: int
                     ) -> list[tuple[int, int | None]]:
    """Error positions in the prefix paired with the position of their first
    later correction (None if uncorrected).  Errors in the cycle are reported
    with position counted from the start of the first pass through it."""
    pairing = negation_pairing(space)
    if pairing is None:
        raise NotNegationClosed("fairness needs a negation-closed space")
    items = spec.prefix + spec.cycle
    out = []
    for i, label in enumerate(items):
        if (space.ext(label) >> s) & 1:
            continue
        comp = pairing[label]
        fix = next((j for j in range(i + 1, len(items)) if items[j] == comp), None)
        if fix is None and i >= len(spec.prefix) and comp in spec.cycle:
            fix = len(spec.prefix) + len(spec.cycle) + spec.cycle.index(comp)
        out.append((i, fix))
    return out


def is_fair(space: EpistemicSpace, spec: StreamSpec, s: int) -> bool:
    pairing = negation_pairing(space)
    if pairing is None:
        raise NotNegationClosed("fairness needs a negation-closed space")
    if not is_complete(space, spec, s):
        return False
    # errors may only occur finitely often, i.e. never in the cycle
    if not is_sound(space, spec.cycle, s):
        return False
    for i, label in enumerate(spec.prefix):
        if (space.ext(label) >> s) & 1:
            continue
        comp = pairing[label]
        if comp not in spec.prefix[i + 1:] and comp not in spec.cycle:
            return False
    return True


def canonical_sc_stream(space: EpistemicSpace, s: int) -> StreamSpec:
    """Sound and complete stream for ``s``: its observables, repeated."""
    labels = space.labels_of(s)
    if not labels:
        raise NoSoundStream(f"world {space.name(s)!r} satisfies no observable")
    return StreamSpec((), labels)
