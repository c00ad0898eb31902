"""Tell-tale maps: definite finite tell-tales (one-shot learnability), the
finite-space tell-tales that characterise priors for mini, and the
generalised conditioning tell-tales that characterise priors for cond and
lex."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Union

from .core import EpistemicSpace, Preorder, iter_bits, mask_of

DFTT = "dftt"
MINI = "mini"
COND = "cond"


@dataclass(frozen=True)
class TellTaleMap:
    kind: str
    # world id -> labels
    assignment: dict[int, frozenset[str]]

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.assignment.items(),
                                             key=lambda kv: kv[0]))))

    def to_names(self, space: EpistemicSpace) -> dict[str, list[str]]:
        order = {l: j for j, l in enumerate(space.labels)}
        return {space.name(s): sorted(v, key=order.__getitem__)
                for s, v in sorted(self.assignment.items())}


@dataclass(frozen=True)
class TellTaleFailure:
    kind: str
    world: int
    reason: str

    def __bool__(self) -> bool:
        return False


Outcome = Union[TellTaleMap, TellTaleFailure]


class NotFinitelyIdentifiable(ValueError):
    pass


def _labels(space: EpistemicSpace, obs_mask: int) -> frozenset[str]:
    return frozenset(space.observables[j].label for j in iter_bits(obs_mask))


# -- definite finite tell-tales -------------------------------------------

def _dftt_masks(space: EpistemicSpace) -> tuple[dict[int, int], int | None]:
    prof = [space.profile(s) for s in range(space.size)]
    found: dict[int, int] = {}
    for s in range(space.size):
        d = 0
        for t in range(space.size):
            if t != s:
                d |= prof[s] & ~prof[t]
        if any(t != s and d & ~prof[t] == 0 for t in range(space.size)):
            return found, s
        found[s] = d
    return found, None


def dftt_construct(space: EpistemicSpace) -> Outcome:
    """For each world, the union over other worlds t of O_s minus O_t.

    That union is a definite finite tell-tale set whenever any exists: if it
    fails for s then some t != s has O_s inside O_t, and then nothing works.
    """
    found, bad = _dftt_masks(space)
    if bad is not None:
        return TellTaleFailure(
            DFTT, bad,
            f"observables of {space.name(bad)!r} are all shared by another world")
    return TellTaleMap(DFTT, {s: _labels(space, d) for s, d in found.items()})


def is_finitely_identifiable(space: EpistemicSpace) -> bool:
    return isinstance(dftt_construct(space), TellTaleMap)


@dataclass(frozen=True)
class FiniteGuess:
    world: int
    position: int  # prefix length at which the guess was made


def finite_identifier(space: EpistemicSpace, seq) -> FiniteGuess | None:
    """One-shot learner driven by the dftt sets.

    At the first prefix length k for which some world with id i <= k has its
    tell-tale set among the observations so far, guess the smallest such
    world; keep that guess afterwards.  Returns None while no guess is made.
    """
    found, bad = _dftt_masks(space)
    if bad is not None:
        raise NotFinitelyIdentifiable(
            f"world {space.name(bad)!r} has no definite finite tell-tale set")
    seen = 0
    seq = tuple(seq)
    for k in range(len(seq) + 1):
        if k:
            seen |= 1 << space.obs_index(seq[k - 1])
        for i in range(min(k, space.size - 1) + 1):
            if found[i] & ~seen == 0:
                return FiniteGuess(i, k)
    return None


# -- finite-space tell-tales for mini -------------------------------------

def mini_telltale_exists(space: EpistemicSpace, order: Preorder) -> Outcome:
    """Check the finite-space mini tell-tale condition with F_s = O_s.

    Using all of O_s loses nothing: enlarging F_s only adds candidate
    witnesses.  For every world some p in F_s must have s minimal in p, and
    each other world tied with s and minimal in p must be left out of the
    minimum of some q in F_s that still has s minimal (q may depend on the
    tied world).
    """
    if not order.total:
        raise ValueError("finite-space mini tell-tales need a total order")
    n = space.size
    mins = [order.min_mask(o.mask) for o in space.observables]
    assignment = {}
    for s in range(n):
        fs = [j for j in iter_bits(space.profile(s))]
        good = [j for j in fs if (mins[j] >> s) & 1]
        witness = None
        for j in good:
            rivals = mins[j] & ~(1 << s)
            ok = True
            for t in iter_bits(rivals):
                if not order.equiv(s, t):
                    continue
                if not any(not (mins[q] >> t) & 1 for q in good):
                    ok = False
                    break
            if ok:
                witness = j
                break
        if witness is None:
            why = ("no observable of it has it minimal" if not good else
                   "a tied world stays minimal alongside it in every candidate")
            return TellTaleFailure(MINI, s, f"{space.name(s)!r}: {why}")
        assignment[s] = _labels(space, space.profile(s))
    return TellTaleMap(MINI, assignment)


# -- generalised conditioning tell-tales ----------------------------------

def _subsets_by_size(items: list[int], reverse: bool = False) -> Iterator[int]:
    sizes = range(len(items) + 1)
    for k in (reversed(sizes) if reverse else sizes):
        for combo in combinations(items, k):
            yield mask_of(combo)


def _cond_clauses_hold(space: EpistemicSpace, order: Preorder, s: int, f: int,
                       prof: list[int]) -> bool:
    n = space.size
    ps = prof[s]
    # (iii): comparable worlds sharing F must be strictly less plausible than s
    for t in range(n):
        if t != s and order.comparable(s, t) and f & ~prof[t] == 0:
            if not order.lt(s, t):
                return False
    # (iv): for F <= F' <= O_s, each incomparable world consistent with F'
    # is beaten by some world consistent with F'
    extra = [j for j in iter_bits(ps & ~f)]
    for add in _subsets_by_size(extra):
        fp = f | add
        for t in range(n):
            if order.comparable(s, t) or fp & ~prof[t]:
                continue
            if not any(order.lt(v, t) and fp & ~prof[v] == 0 for v in range(n)):
                return False
    return True


def cond_telltale_exists(space: EpistemicSpace, order: Preorder,
                         largest_first: bool = False) -> Outcome:
    """Search, per world, the subsets of O_s (smallest first by default) for
    a generalised conditioning tell-tale set."""
    prof = [space.profile(s) for s in range(space.size)]
    assignment = {}
    for s in range(space.size):
        items = list(iter_bits(prof[s]))
        chosen = None
        for f in _subsets_by_size(items, reverse=largest_first):
            if _cond_clauses_hold(space, order, s, f, prof):
                chosen = f
                break
        if chosen is None:
            return TellTaleFailure(
                COND, s, f"no subset of the observables of {space.name(s)!r} works")
        assignment[s] = _labels(space, chosen)
    return TellTaleMap(COND, assignment)


def check_dftt_map(space: EpistemicSpace, tmap: TellTaleMap) -> list[str]:
    """Violations of the dftt conditions (subset of O_s, unique to s)."""
    out = []
    for s in range(space.size):
        d = tmap.assignment.get(s)
        if d is None:
            out.append(f"{space.name(s)!r} has no entry")
            continue
        if not d <= space.observables_of(s):
            out.append(f"entry of {space.name(s)!r} is not within its observables")
        for t in range(space.size):
            if t != s and d <= space.observables_of(t):
                out.append(f"entry of {space.name(s)!r} also fits {space.name(t)!r}")
    return out
