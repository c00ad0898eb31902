"""Deciding identification in the limit and appropriateness of priors on
finite spaces.

Why lassos suffice
------------------
Fix a world ``s``, a prior and a revision method.  Each revision step is a
deterministic function of (current state, observed label), and from a finite
space only finitely many states are reachable.  Pair every state with the
set of labels of ``O_s`` seen so far; that set only grows, so the product is
finite too.  Take any sound and complete stream on which the conjecture
differs from ``{s}`` infinitely often.  Past the point where every label of
``O_s`` has occurred, the run stays inside the fully covered part of the
product, and some state with a wrong conjecture is visited infinitely often.
Between two such visits the run follows edges of the product, so that state
lies on a cycle reachable from a fully covered node.  Conversely such a cycle
yields the eventually periodic counterexample ``prefix . cycle^w``.  So a
world fails to be identified iff the product has a reachable fully covered
node from which a cycle through a wrong-conjecture state is reachable, and
:class:`~tracktruth.streams.StreamSpec` can always express the witness.

Fair streams add a third component: the set of errors (observations false at
``s``) still waiting for their complement.  A fair stream is, after finitely
many steps, sound with nothing pending and full coverage; from there it is
an ordinary sound stream, so the same cycle check applies.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .core import (
    EpistemicSpace,
    Preorder,
    enumerate_preorders,
    enumerate_total_preorders,
    is_negation_closed,
    negation_pairing,
)
from .revision import Method, RevisionState, _STEPS, conjecture
from .streams import NotNegationClosed, StreamSpec, fair_corrections, unroll
from .telltale import TellTaleMap, cond_telltale_exists, mini_telltale_exists

SOUND_COMPLETE = "sound-complete"
FAIR = "fair"
DEFAULT_BUDGET = 10**6
BUDGET_ENV = "TRACKTRUTH_BUDGET"


class Status(str, Enum):
    IDENTIFIED = "identified"
    NOT_IDENTIFIED = "not-identified"
    NO_SOUND_STREAM = "no-sound-stream"

    def __str__(self) -> str:
        return self.value


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"state-space budget of {budget} nodes exceeded "
                         f"(raise it with {BUDGET_ENV})")
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class Verdict:
    status: Status
    target: int
    method: Method
    mode: str = SOUND_COMPLETE
    witness: StreamSpec | None = None
    # fair mode: (error position, correcting position) pairs in the witness
    corrections: tuple[tuple[int, int | None], ...] = ()

    @property
    def identified(self) -> bool:
        return self.status is Status.IDENTIFIED


class _Dynamics:
    """Memoised transitions and conjectures for one (space, method)."""

    def __init__(self, space: EpistemicSpace, method: Method):
        self.space = space
        self.fn = _STEPS[Method(method)]
        self._next: dict = {}
        self._conj: dict = {}

    def next(self, state: RevisionState, label: str) -> RevisionState:
        key = (state, label)
        nxt = self._next.get(key)
        if nxt is None:
            raw = self.fn(state, label)
            nxt = RevisionState(self.space, raw.order, raw.alive)
            self._next[key] = nxt
        return nxt

    def conj(self, state: RevisionState) -> int:
        c = self._conj.get(state)
        if c is None:
            c = state.order.min_mask(state.alive)
            self._conj[state] = c
        return c


def _start(space: EpistemicSpace, prior: Preorder) -> RevisionState:
    if prior.n != space.size:
        raise ValueError(f"prior over {prior.n} worlds, space has {space.size}")
    return RevisionState(space, prior, prior.domain)


def _walk_back(parent: dict, node) -> list[str]:
    labels = []
    while parent[node] is not None:
        node, lab = parent[node]
        labels.append(lab)
    labels.reverse()
    return labels


def _cycle_through(dyn: _Dynamics, b: RevisionState, labels: Sequence[str]
                   ) -> list[str] | None:
    """Shortest nonempty label path from ``b`` back to ``b``."""
    parent: dict = {}
    queue: deque = deque()
    for lab in labels:
        nx = dyn.next(b, lab)
        if nx == b:
            return [lab]
        if nx not in parent:
            parent[nx] = (None, lab)
            queue.append(nx)
    while queue:
        st = queue.popleft()
        for lab in labels:
            nx = dyn.next(st, lab)
            if nx == b:
                path = [lab]
                while st is not None:
                    prev, l = parent[st]
                    path.append(l)
                    st = prev
                path.reverse()
                return path
            if nx not in parent:
                parent[nx] = (st, lab)
                queue.append(nx)
    return None


def _find_bad_cycle(dyn: _Dynamics, states: Iterable[RevisionState],
                    labels: Sequence[str], good: int):
    """First state (in the given order) whose conjecture is not ``good`` and
    that lies on a cycle; returns (state, cycle labels) or None."""
    for b in states:
        if dyn.conj(b) == good:
            continue
        cyc = _cycle_through(dyn, b, labels)
        if cyc is not None:
            return b, cyc
    return None


def decide_in_limit(space: EpistemicSpace, prior: Preorder, method, target: int,
                    budget: int | None = None) -> Verdict:
    """Is ``target`` identified in the limit on every sound and complete
    stream?  Returns a lasso-shaped counterexample when it is not."""
    method = Method(method)
    budget = default_budget() if budget is None else budget
    osl = space.labels_of(target)
    if not osl:
        return Verdict(Status.NO_SOUND_STREAM, target, method)
    dyn = _Dynamics(space, method)
    full = (1 << len(osl)) - 1
    start = (_start(space, prior), 0)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        st, cov = node
        for i, lab in enumerate(osl):
            nxt = (dyn.next(st, lab), cov | (1 << i))
            if nxt not in parent:
                parent[nxt] = (node, lab)
                if len(parent) > budget:
                    raise BudgetExceeded(budget)
                queue.append(nxt)
    covered = [st for st, cov in parent if cov == full]
    found = _find_bad_cycle(dyn, covered, osl, 1 << target)
    if found is None:
        return Verdict(Status.IDENTIFIED, target, method)
    b, cycle = found
    prefix = _walk_back(parent, (b, full))
    return Verdict(Status.NOT_IDENTIFIED, target, method,
                   witness=StreamSpec(tuple(prefix), tuple(cycle)))


def decide_fair_appropriate(space: EpistemicSpace, prior: Preorder, method,
                            target: int, budget: int | None = None) -> Verdict:
    """Identification of ``target`` on every fair stream (negation-closed
    spaces only)."""
    method = Method(method)
    budget = default_budget() if budget is None else budget
    pairing = negation_pairing(space)
    if pairing is None:
        raise NotNegationClosed("fair streams need a negation-closed space")
    osl = space.labels_of(target)
    if not osl:
        return Verdict(Status.NO_SOUND_STREAM, target, method, FAIR)
    errors = [l for l in space.labels if not (space.ext(l) >> target) & 1]
    if not errors:
        v = decide_in_limit(space, prior, method, target, budget)
        return Verdict(v.status, target, method, FAIR, v.witness)
    if method is Method.COND:
        # one error removes the actual world for good
        e = errors[0]
        w = StreamSpec((e, pairing[e]), osl)
        return Verdict(Status.NOT_IDENTIFIED, target, method, FAIR, w,
                       tuple(fair_corrections(space, w, target)))

    cov_bit = {l: 1 << i for i, l in enumerate(osl)}
    err_bit = {l: 1 << i for i, l in enumerate(errors)}
    full = (1 << len(osl)) - 1
    dyn = _Dynamics(space, method)
    start = (_start(space, prior), 0, 0)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        st, cov, pend = node
        for lab in space.labels:
            nst = dyn.next(st, lab)
            if lab in err_bit:
                nxt = (nst, cov, pend | err_bit[lab])
            else:
                fixed = err_bit.get(pairing[lab], 0)
                nxt = (nst, cov | cov_bit[lab], pend & ~fixed)
            if nxt not in parent:
                parent[nxt] = (node, lab)
                if len(parent) > budget:
                    raise BudgetExceeded(budget)
                queue.append(nxt)

    # sound tail: close the settled states under O_s-labelled steps
    tail_parent: dict = {st: None for st, cov, pend in parent
                         if cov == full and pend == 0}
    queue = deque(tail_parent)
    while queue:
        st = queue.popleft()
        for lab in osl:
            nx = dyn.next(st, lab)
            if nx not in tail_parent:
                tail_parent[nx] = (st, lab)
                queue.append(nx)
    found = _find_bad_cycle(dyn, list(tail_parent), osl, 1 << target)
    if found is None:
        return Verdict(Status.IDENTIFIED, target, method, FAIR)
    b, cycle = found
    tail = []
    st = b
    while tail_parent[st] is not None:
        st, lab = tail_parent[st]
        tail.append(lab)
    tail.reverse()
    head = _walk_back(parent, (st, full, 0))
    w = StreamSpec(tuple(head + tail), tuple(cycle))
    return Verdict(Status.NOT_IDENTIFIED, target, method, FAIR, w,
                   tuple(fair_corrections(space, w, target)))


@dataclass(frozen=True)
class AppropriatenessReport:
    method: Method
    mode: str
    verdicts: tuple[Verdict, ...]

    @property
    def appropriate(self) -> bool:
        return all(v.identified for v in self.verdicts)

    @property
    def first_failure(self) -> Verdict | None:
        return next((v for v in self.verdicts if not v.identified), None)


def decide_appropriate(space: EpistemicSpace, prior: Preorder, method,
                       mode: str = SOUND_COMPLETE, budget: int | None = None,
                       stop_at_first: bool = True) -> AppropriatenessReport:
    method = Method(method)
    if mode == FAIR and not is_negation_closed(space):
        raise NotNegationClosed("fair streams need a negation-closed space")
    decide = decide_fair_appropriate if mode == FAIR else decide_in_limit
    verdicts = []
    for s in range(space.size):
        v = decide(space, prior, method, s, budget)
        verdicts.append(v)
        if stop_at_first and not v.identified:
            break
    return AppropriatenessReport(method, mode, tuple(verdicts))


@dataclass(frozen=True)
class SweepReport:
    method: Method
    mode: str
    total: int
    appropriate: tuple[Preorder, ...]

    @property
    def count(self) -> int:
        return len(self.appropriate)


def _sweep_one(args) -> bool:
    space, prior, method, mode, budget = args
    return decide_appropriate(space, prior, method, mode, budget).appropriate


def sweep_priors(space: EpistemicSpace, method, mode: str = SOUND_COMPLETE,
                 general: bool = False, bound: int | None = None, jobs: int = 1,
                 budget: int | None = None) -> SweepReport:
    """Decide appropriateness for every total preorder on the worlds (or
    every preorder when ``general``; cond/lex only)."""
    method = Method(method)
    if general and method is Method.MINI:
        raise ValueError("mini is only defined here for total preorders")
    if general:
        priors = list(enumerate_preorders(space, bound or 4))
    else:
        priors = list(enumerate_total_preorders(space, bound or 6))
    tasks = [(space, p, method, mode, budget) for p in priors]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flags = list(pool.map(_sweep_one, tasks, chunksize=4))
    else:
        flags = [_sweep_one(t) for t in tasks]
    return SweepReport(method, mode, len(priors),
                       tuple(p for p, ok in zip(priors, flags) if ok))


@dataclass
class CrossCheckReport:
    results: dict[str, bool] = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cross_check(space: EpistemicSpace, prior: Preorder,
                budget: int | None = None) -> CrossCheckReport:
    """Compare semantic appropriateness with the tell-tale characterisations."""
    rep = CrossCheckReport()
    r = rep.results

    def _witness(report: AppropriatenessReport) -> str:
        f = report.first_failure
        if f is None:
            return "all worlds identified"
        return f"fails at {space.name(f.target)!r} with {f.witness}"

    if prior.total:
        sem = decide_appropriate(space, prior, Method.MINI, budget=budget)
        tt = mini_telltale_exists(space, prior)
        r["mini"] = sem.appropriate
        r["mini-telltale"] = isinstance(tt, TellTaleMap)
        if r["mini"] != r["mini-telltale"]:
            rep.mismatches.append(
                f"mini: semantic={r['mini']} tell-tale={r['mini-telltale']} "
                f"({_witness(sem)})")
    cond = decide_appropriate(space, prior, Method.COND, budget=budget)
    lex = decide_appropriate(space, prior, Method.LEX, budget=budget)
    r["cond"] = cond.appropriate
    r["lex"] = lex.appropriate
    r["cond-telltale"] = isinstance(cond_telltale_exists(space, prior), TellTaleMap)
    if not r["cond"] == r["lex"] == r["cond-telltale"]:
        rep.mismatches.append(
            f"cond/lex: cond={r['cond']} lex={r['lex']} tell-tale={r['cond-telltale']} "
            f"(cond {_witness(cond)}; lex {_witness(lex)})")
    if is_negation_closed(space):
        fair_lex = decide_appropriate(space, prior, Method.LEX, FAIR, budget)
        r["lex-fair"] = fair_lex.appropriate
        if r["lex-fair"] != r["cond-telltale"]:
            rep.mismatches.append(
                f"lex on fair streams: semantic={r['lex-fair']} "
                f"tell-tale={r['cond-telltale']} ({_witness(fair_lex)})")
    return rep


def reachable_states(space: EpistemicSpace, prior: Preorder, method,
                     labels: Sequence[str]) -> list[RevisionState]:
    """States reachable from the prior using the given labels, BFS order."""
    dyn = _Dynamics(space, Method(method))
    start = _start(space, prior)
    seen = {start: None}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        for lab in labels:
            nx = dyn.next(st, lab)
            if nx not in seen:
                seen[nx] = None
                queue.append(nx)
    return list(seen)


def locking_sequence_search(space: EpistemicSpace, prior: Preorder, method,
                            target: int, bound: int | None = None
                            ) -> tuple[str, ...] | None:
    """Shortest sound sequence after which the conjecture is ``{target}`` and
    stays so under every sound continuation, if one of length <= bound
    exists (default bound: number of reachable states)."""
    method = Method(method)
    dyn = _Dynamics(space, method)
    osl = space.labels_of(target)
    start = _start(space, prior)
    parent: dict = {start: None}
    depth = {start: 0}
    queue = deque([start])
    edges: dict = {}
    while queue:
        st = queue.popleft()
        succ = []
        for lab in osl:
            nx = dyn.next(st, lab)
            succ.append(nx)
            if nx not in parent:
                parent[nx] = (st, lab)
                depth[nx] = depth[st] + 1
                queue.append(nx)
        edges[st] = succ
    bound = len(parent) if bound is None else bound
    good = 1 << target
    # states that can reach a wrong conjecture
    preds: dict = {st: [] for st in parent}
    for st, succ in edges.items():
        for nx in succ:
            preds[nx].append(st)
    tainted = {st for st in parent if dyn.conj(st) != good}
    queue = deque(tainted)
    while queue:
        st = queue.popleft()
        for pr in preds[st]:
            if pr not in tainted:
                tainted.add(pr)
                queue.append(pr)
    for st in parent:
        if st not in tainted and depth[st] <= bound:
            return tuple(_walk_back(parent, st))
    return None


@dataclass(frozen=True)
class TraceStep:
    position: int
    label: str
    state: RevisionState
    conjecture: frozenset[int]


@dataclass(frozen=True)
class LearningTrace:
    stream: StreamSpec
    method: Method
    initial_conjecture: frozenset[int]
    steps: tuple[TraceStep, ...]
    # (i, j): the state after step j equals the one after step i at the same
    # cycle position, so steps i+1..j repeat forever
    recurrence: tuple[int, int] | None

    def recurring_conjectures(self) -> list[frozenset[int]] | None:
        if self.recurrence is None:
            return None
        i, j = self.recurrence
        return [st.conjecture for st in self.steps[i + 1:j + 1]]

    def converges_to(self, target: int) -> bool | None:
        """True/False once the trace has recurred, None before that."""
        rec = self.recurring_conjectures()
        if rec is None:
            return None
        return all(c == {target} for c in rec)


def run_trace(space: EpistemicSpace, prior: Preorder, method, spec: StreamSpec,
              horizon: int) -> LearningTrace:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    method = Method(method)
    fn = _STEPS[method]
    state = _start(space, prior)
    init_conj = conjecture(state)
    steps = []
    seen: dict = {}
    recurrence = None
    for k, label in enumerate(unroll(spec, horizon)):
        state = fn(state, label)
        steps.append(TraceStep(k, label, state, conjecture(state)))
        nxt = k + 1
        if recurrence is None and nxt >= len(spec.prefix):
            key = (RevisionState(space, state.order, state.alive),
                   (nxt - len(spec.prefix)) % len(spec.cycle))
            if key in seen:
                recurrence = (seen[key], k)
            else:
                seen[key] = k
    return LearningTrace(spec, method, init_conj, tuple(steps), recurrence)


def witness_is_valid(space: EpistemicSpace, prior: Preorder, verdict: Verdict) -> bool:
    """Replay a counterexample: it must satisfy the mode's stream predicate
    and show a wrong conjecture inside the recurring segment."""
    from .streams import is_complete, is_fair, is_sound

    w = verdict.witness
    s = verdict.target
    if w is None:
        return False
    if verdict.mode == FAIR:
        if not is_fair(space, w, s):
            return False
    elif not (is_sound(space, w, s) and is_complete(space, w, s)):
        return False
    horizon = len(w.prefix) + 8 * len(w.cycle)
    while True:
        trace = run_trace(space, prior, verdict.method, w, horizon)
        if trace.recurrence is not None:
            return trace.converges_to(s) is False
        horizon *= 2
