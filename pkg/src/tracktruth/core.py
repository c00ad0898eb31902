"""Finite epistemic spaces, observables and plausibility preorders.

Sets of worlds are stored as int bitmasks (bit ``i`` is world ``i``).  A
preorder keeps one row per world: ``rows[s]`` has bit ``t`` set iff
``s <= t`` ("s is at least as plausible as t").  Helpers that take or return
plain sets of world ids are provided for callers that do not care about the
encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_ENUMERATION_BOUND = 6


class SpaceError(ValueError):
    """Malformed space: unknown names, duplicate names and the like."""


class BoundExceeded(ValueError):
    pass


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def ids_of(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def iter_bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class World:
    id: int
    name: str


@dataclass(frozen=True)
class Observable:
    label: str
    extension: frozenset[int]

    @cached_property
    def mask(self) -> int:
        return mask_of(self.extension)


@dataclass(frozen=True)
class EpistemicSpace:
    """Worlds plus labelled observables.

    Construction only checks that names resolve; the distinguishability and
    distinct-extension conditions are reported by :func:`validate_space`.
    """

    worlds: tuple[World, ...]
    observables: tuple[Observable, ...]

    def __post_init__(self):
        if not self.worlds:
            raise SpaceError("a space needs at least one world")
        for i, w in enumerate(self.worlds):
            if w.id != i:
                raise SpaceError(f"world ids must be dense 0..n-1, got {w.id} at {i}")
        names = [w.name for w in self.worlds]
        if len(set(names)) != len(names):
            raise SpaceError("duplicate world names")
        labels = [o.label for o in self.observables]
        if len(set(labels)) != len(labels):
            raise SpaceError("duplicate observable labels")
        n = len(self.worlds)
        for o in self.observables:
            if any(not 0 <= i < n for i in o.extension):
                raise SpaceError(f"observable {o.label!r} mentions an unknown world")

    @classmethod
    def build(cls, world_names: Sequence[str],
              observables: Mapping[str, Iterable[str]]) -> "EpistemicSpace":
        worlds = tuple(World(i, name) for i, name in enumerate(world_names))
        index = {w.name: w.id for w in worlds}
        obs = []
        for label, members in observables.items():
            ext = []
            for name in members:
                if name not in index:
                    raise SpaceError(f"observable {label!r}: unknown world {name!r}")
                ext.append(index[name])
            obs.append(Observable(label, frozenset(ext)))
        return cls(worlds, tuple(obs))

    @classmethod
    def from_masks(cls, n: int, masks: Sequence[int],
                   world_names: Sequence[str] | None = None,
                   labels: Sequence[str] | None = None) -> "EpistemicSpace":
        names = list(world_names) if world_names else [f"w{i}" for i in range(n)]
        labs = list(labels) if labels else [f"o{j}" for j in range(len(masks))]
        worlds = tuple(World(i, names[i]) for i in range(n))
        return cls(worlds, tuple(Observable(l, ids_of(m)) for l, m in zip(labs, masks)))

    @property
    def size(self) -> int:
        return len(self.worlds)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.worlds)) - 1

    @cached_property
    def _world_index(self) -> dict[str, int]:
        return {w.name: w.id for w in self.worlds}

    @cached_property
    def _obs_index(self) -> dict[str, int]:
        return {o.label: j for j, o in enumerate(self.observables)}

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.observables)

    def world_id(self, name: str) -> int:
        try:
            return self._world_index[name]
        except KeyError:
            raise KeyError(f"unknown world {name!r}") from None

    def name(self, s: int) -> str:
        return self.worlds[s].name

    def observable(self, label: str) -> Observable:
        try:
            return self.observables[self._obs_index[label]]
        except KeyError:
            raise KeyError(f"unknown observable {label!r}") from None

    def obs_index(self, label: str) -> int:
        try:
            return self._obs_index[label]
        except KeyError:
            raise KeyError(f"unknown observable {label!r}") from None

    def ext(self, label: str) -> int:
        """Extension of an observable as a bitmask."""
        return self.observable(label).mask

    @cached_property
    def _profiles(self) -> tuple[int, ...]:
        # profile[s]: bitmask over observable indices of O_s
        prof = [0] * self.size
        for j, o in enumerate(self.observables):
            for s in o.extension:
                prof[s] |= 1 << j
        return tuple(prof)

    def profile(self, s: int) -> int:
        """O_s as a bitmask over observable indices."""
        self._check_world(s)
        return self._profiles[s]

    def observables_of(self, s: int) -> frozenset[str]:
        self._check_world(s)
        return frozenset(o.label for o in self.observables if s in o.extension)

    def labels_of(self, s: int) -> tuple[str, ...]:
        """O_s as labels in declaration order."""
        self._check_world(s)
        return tuple(o.label for o in self.observables if s in o.extension)

    def _check_world(self, s: int) -> None:
        if not isinstance(s, int) or not 0 <= s < self.size:
            raise KeyError(f"unknown world id {s!r}")

    def names(self, mask_or_ids) -> list[str]:
        ids = ids_of(mask_or_ids) if isinstance(mask_or_ids, int) else mask_or_ids
        return [self.worlds[i].name for i in sorted(ids)]


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    # first offending pair of world names (distinguishability) or labels
    pair: tuple[str, str] | None = None


def validate_space(space: EpistemicSpace) -> ValidationReport:
    violations: list[str] = []
    warnings: list[str] = []
    pair = None
    for s, t in combinations(range(space.size), 2):
        if space.profile(s) == space.profile(t):
            a, b = space.name(s), space.name(t)
            violations.append(f"worlds {a!r} and {b!r} satisfy the same observables")
            pair = pair or (a, b)
    for a, b in combinations(space.observables, 2):
        if a.extension == b.extension:
            violations.append(
                f"observables {a.label!r} and {b.label!r} have the same extension")
            pair = pair or (a.label, b.label)
    for o in space.observables:
        if not o.extension:
            warnings.append(f"observable {o.label!r} has an empty extension")
    return ValidationReport(not violations, violations, warnings, pair)


def is_strongly_separated(space: EpistemicSpace) -> bool:
    prof = [space.profile(s) for s in range(space.size)]
    for s in range(space.size):
        for t in range(space.size):
            if s != t and prof[s] & ~prof[t] == 0:
                return False
    return True


def negation_pairing(space: EpistemicSpace) -> dict[str, str] | None:
    """Map each label to the label of its complement, or None if some
    observable has no complement in the space."""
    by_mask = {o.mask: o.label for o in space.observables}
    pairing = {}
    for o in space.observables:
        comp = space.full & ~o.mask
        if comp not in by_mask:
            return None
        pairing[o.label] = by_mask[comp]
    return pairing


def is_negation_closed(space: EpistemicSpace) -> bool:
    return negation_pairing(space) is not None


@dataclass(frozen=True)
class Preorder:
    """Reflexive, transitive relation over the worlds in ``domain``.

    ``rows[s]`` is the bitmask of worlds ``t`` with ``s <= t``.  Rows of worlds
    outside the domain are 0.  ``total`` is derived from the relation.
    """

    n: int
    rows: tuple[int, ...]
    domain: int = -1
    total: bool = field(init=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        dom = full if self.domain == -1 else self.domain & full
        object.__setattr__(self, "domain", dom)
        tot = True
        cols = self.cols
        for s in iter_bits(dom):
            if (self.rows[s] | cols[s]) & dom != dom:
                tot = False
                break
        object.__setattr__(self, "total", tot)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """cols[t] = bitmask of s with s <= t."""
        cols = [0] * self.n
        for s, row in enumerate(self.rows):
            for t in iter_bits(row):
                cols[t] |= 1 << s
        return tuple(cols)

    # -- constructors ---------------------------------------------------

    @classmethod
    def flat(cls, n: int) -> "Preorder":
        full = (1 << n) - 1
        return cls(n, (full,) * n)

    @classmethod
    def from_layers(cls, n: int, layers: Sequence[Iterable[int]]) -> "Preorder":
        """Weak order from layers; earlier layers are more plausible."""
        layers = [list(l) for l in layers]
        seen = [w for l in layers for w in l]
        if any(not l for l in layers):
            raise ValueError("empty layer")
        if sorted(seen) != sorted(set(seen)):
            raise ValueError("a world occurs in more than one layer")
        dom = mask_of(seen)
        rows = [0] * n
        below = dom
        for layer in layers:
            for s in layer:
                rows[s] = below
            below &= ~mask_of(layer)
        return cls(n, tuple(rows), dom)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]],
                   domain: int | None = None) -> "Preorder":
        """Reflexive-transitive closure of the given (s <= t) pairs."""
        pairs = list(pairs)
        dom = ((1 << n) - 1) if domain is None else domain
        for s, t in pairs:
            if not (dom >> s) & 1 or not (dom >> t) & 1:
                raise ValueError(f"pair ({s}, {t}) leaves the domain")
        rows = [(1 << s) if (dom >> s) & 1 else 0 for s in range(n)]
        for s, t in pairs:
            rows[s] |= 1 << t
        return cls(n, _closure(rows), dom)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> "Preorder":
        n = len(matrix)
        rows = tuple(mask_of(t for t in range(n) if matrix[s][t]) for s in range(n))
        return cls(n, rows)

    # -- relations ------------------------------------------------------

    def leq(self, s: int, t: int) -> bool:
        return bool((self.rows[s] >> t) & 1)

    def lt(self, s: int, t: int) -> bool:
        return self.leq(s, t) and not self.leq(t, s)

    def equiv(self, s: int, t: int) -> bool:
        return self.leq(s, t) and self.leq(t, s)

    def comparable(self, s: int, t: int) -> bool:
        return self.leq(s, t) or self.leq(t, s)

    def matrix(self) -> list[list[bool]]:
        return [[self.leq(s, t) for t in range(self.n)] for s in range(self.n)]

    def pairs(self) -> list[tuple[int, int]]:
        """Non-reflexive pairs (s, t) with s <= t."""
        return [(s, t) for s in range(self.n) for t in iter_bits(self.rows[s]) if s != t]

    def violations(self) -> list[str]:
        out = []
        dom = self.domain
        for s in range(self.n):
            inside = (dom >> s) & 1
            if inside and not (self.rows[s] >> s) & 1:
                out.append(f"not reflexive at {s}")
            if self.rows[s] & ~dom or (not inside and self.rows[s]):
                out.append(f"row {s} leaves the domain")
        for s in range(self.n):
            for t in iter_bits(self.rows[s]):
                if self.rows[t] & ~self.rows[s]:
                    out.append(f"not transitive through {s} <= {t}")
                    break
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def min_mask(self, x: int) -> int:
        """Minimal elements of ``x`` (bitmask) w.r.t. the relation restricted
        to ``x``: s is minimal iff s <= t for every t in x comparable to s."""
        out = 0
        rows, cols = self.rows, self.cols
        for s in iter_bits(x):
            r = rows[s]
            if (r | cols[s]) & x & ~r == 0:
                out |= 1 << s
        return out

    def restrict(self, x: int) -> "Preorder":
        """The relation intersected with x * x, over domain x."""
        x &= self.domain
        rows = tuple((r & x) if (x >> s) & 1 else 0 for s, r in enumerate(self.rows))
        return Preorder(self.n, rows, x)

    def layers(self) -> list[list[int]]:
        """Layers of a total preorder, most plausible first."""
        if not self.total:
            raise ValueError("layers are only defined for total preorders")
        rest = self.domain
        out = []
        while rest:
            m = self.min_mask(rest)
            out.append(sorted(iter_bits(m)))
            rest &= ~m
        return out


def _closure(rows: list[int]) -> tuple[int, ...]:
    n = len(rows)
    rows = list(rows)
    for k in range(n):
        rk = rows[k]
        for s in range(n):
            if (rows[s] >> k) & 1:
                rows[s] |= rk
    return tuple(rows)


@dataclass(frozen=True)
class PlausibilitySpace:
    space: EpistemicSpace
    order: Preorder

    def __post_init__(self):
        if self.order.n != self.space.size:
            raise ValueError(
                f"order over {self.order.n} worlds, space has {self.space.size}")


# -- set-based conveniences ---------------------------------------------

def observables_of(space: EpistemicSpace, s: int) -> frozenset[str]:
    return space.observables_of(s)


def min_elements(order: Preorder, xs: Iterable[int]) -> frozenset[int]:
    return ids_of(order.min_mask(mask_of(xs)))


def _ext(order_or_space, p) -> int:
    if isinstance(p, Observable):
        return p.mask
    if isinstance(p, int):
        return p
    return mask_of(p)


def restrict(order: Preorder, p) -> Preorder:
    """Restriction to an observable (Observable, bitmask or id set)."""
    return order.restrict(_ext(order, p))


def restrict_complement(order: Preorder, p) -> Preorder:
    full = (1 << order.n) - 1
    return order.restrict(full & ~_ext(order, p))


# -- enumeration ----------------------------------------------------------

def _size_of(space_or_n) -> int:
    return space_or_n.size if isinstance(space_or_n, EpistemicSpace) else int(space_or_n)


def enumerate_total_preorders(space_or_n, bound: int = DEFAULT_ENUMERATION_BOUND
                              ) -> Iterator[Preorder]:
    """Every weak order on the worlds, once each (ordered set partitions)."""
    n = _size_of(space_or_n)
    if n > bound:
        raise BoundExceeded(f"{n} worlds exceeds enumeration bound {bound}")

    def partitions(rest: int) -> Iterator[list[list[int]]]:
        if not rest:
            yield []
            return
        items = list(iter_bits(rest))
        for k in range(1, len(items) + 1):
            for first in combinations(items, k):
                for tail in partitions(rest & ~mask_of(first)):
                    yield [list(first)] + tail

    for layers in partitions((1 << n) - 1):
        yield Preorder.from_layers(n, layers)


def enumerate_preorders(space_or_n, bound: int = 4) -> Iterator[Preorder]:
    """Every reflexive-transitive relation (total or not) on the worlds."""
    n = _size_of(space_or_n)
    if n > bound:
        raise BoundExceeded(f"{n} worlds exceeds preorder enumeration bound {bound}")
    offdiag = [(s, t) for s in range(n) for t in range(n) if s != t]
    for bits in product((0, 1), repeat=len(offdiag)):
        rows = [1 << s for s in range(n)]
        for (s, t), b in zip(offdiag, bits):
            if b:
                rows[s] |= 1 << t
        if all(rows[t] & ~rows[s] == 0 for s in range(n) for t in iter_bits(rows[s])):
            yield Preorder(n, tuple(rows))
