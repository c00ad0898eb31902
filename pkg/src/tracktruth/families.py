"""Generators for small spaces: exhaustive (up to isomorphism) and random."""

from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Iterator

from .core import EpistemicSpace, Preorder, iter_bits


def _distinguishable(n: int, masks: tuple[int, ...]) -> bool:
    prof = [0] * n
    for j, m in enumerate(masks):
        for s in iter_bits(m):
            prof[s] |= 1 << j
    return len(set(prof)) == n


def _covers(n: int, masks: tuple[int, ...]) -> bool:
    u = 0
    for m in masks:
        u |= m
    return u == (1 << n) - 1


def _permute(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    for s in iter_bits(mask):
        out |= 1 << perm[s]
    return out


def canonical_form(n: int, masks) -> tuple[int, ...]:
    return min(tuple(sorted(_permute(m, p) for m in masks))
               for p in permutations(range(n)))


def enumerate_spaces(max_worlds: int, max_observables: int, min_worlds: int = 1,
                     require_cover: bool = True) -> Iterator[EpistemicSpace]:
    """Every valid space up to renaming worlds, with observables drawn from
    all subsets of the worlds (the empty set and the whole set included).

    With ``require_cover`` every world lies in some observable, i.e. every
    world has a sound stream.
    """
    for n in range(min_worlds, max_worlds + 1):
        seen = set()
        subsets = range(1 << n)
        for k in range(max_observables + 1):
            for masks in combinations(subsets, k):
                if not _distinguishable(n, masks):
                    continue
                if require_cover and not _covers(n, masks):
                    continue
                key = canonical_form(n, masks)
                if key in seen:
                    continue
                seen.add(key)
                yield EpistemicSpace.from_masks(n, key)


def random_space(rng: random.Random, max_worlds: int, max_observables: int,
                 require_cover: bool = True) -> EpistemicSpace:
    while True:
        n = rng.randint(1, max_worlds)
        k = rng.randint(0, max_observables)
        k = min(k, 1 << n)
        masks = tuple(rng.sample(range(1 << n), k))
        if not _distinguishable(n, masks):
            continue
        if require_cover and not _covers(n, masks):
            continue
        return EpistemicSpace.from_masks(n, masks)


def random_total_preorder(rng: random.Random, n: int) -> Preorder:
    ranks = [rng.randint(0, n - 1) for _ in range(n)]
    layers = [[s for s in range(n) if ranks[s] == r] for r in sorted(set(ranks))]
    return Preorder.from_layers(n, layers)


def random_preorder(rng: random.Random, n: int, density: float | None = None) -> Preorder:
    density = rng.random() if density is None else density
    pairs = [(s, t) for s in range(n) for t in range(n)
             if s != t and rng.random() < density / 2]
    return Preorder.from_pairs(n, pairs)


def random_sound_sequence(rng: random.Random, space: EpistemicSpace, s: int,
                          length: int) -> tuple[str, ...]:
    labels = space.labels_of(s)
    if not labels:
        return ()
    return tuple(rng.choice(labels) for _ in range(length))
