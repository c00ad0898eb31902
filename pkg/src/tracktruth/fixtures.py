"""Named scenarios reproducing the worked examples, each self-checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import (
    EpistemicSpace,
    PlausibilitySpace,
    Preorder,
    enumerate_total_preorders,
    is_negation_closed,
    is_strongly_separated,
)
from .revision import Method, conjecture, iterate
from .streams import StreamSpec, is_fair
from .telltale import (
    TellTaleFailure,
    TellTaleMap,
    cond_telltale_exists,
    dftt_construct,
    is_finitely_identifiable,
    mini_telltale_exists,
)
from .verifier import (
    FAIR,
    decide_appropriate,
    decide_fair_appropriate,
    run_trace,
    sweep_priors,
    witness_is_valid,
)

FIG1 = EpistemicSpace.build(["u", "s", "t"], {"p": ["u", "s"], "q": ["s", "t"]})
FIG2_LEFT = EpistemicSpace.build(
    ["s", "u", "t"], {"p": ["s", "u"], "q": ["s", "t"], "r": ["u", "t"]})
FIG2_CENTER = EpistemicSpace.build(
    ["s", "t", "u", "w"],
    {"p": ["s", "t"], "pbar": ["u", "w"], "q": ["t", "u"], "qbar": ["s", "w"]})
TWO_WORLDS = EpistemicSpace.build(["s", "t"], {"p": ["s"], "q": ["s", "t"]})


def ladder(n: int) -> EpistemicSpace:
    """First ``n`` rungs of the ladder space: world i satisfies p_i and
    p_{i+1}; observables are cut down to the kept worlds, so the top
    observable p_n holds only at the last world."""
    worlds = [f"s{i}" for i in range(n)]
    obs = {f"p{j}": [f"s{i}" for i in range(n) if j in (i, i + 1)] for j in range(n + 1)}
    return EpistemicSpace.build(worlds, obs)


def layers(space: EpistemicSpace, *names: str) -> Preorder:
    """Weak order from space-separated layers, e.g. ``layers(S, "t", "u s")``."""
    return Preorder.from_layers(
        space.size, [[space.world_id(w) for w in layer.split()] for layer in names])


FIG1_PRIOR = layers(FIG1, "t", "u", "s")
FIG3_PRIOR = layers(FIG2_LEFT, "t", "s u")


@dataclass
class FixtureResult:
    ok: bool
    lines: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Fixture:
    name: str
    anchor: str
    check: Callable[[], FixtureResult]


def _result(*checks: tuple[bool, str]) -> FixtureResult:
    lines = [("ok   " if ok else "FAIL ") + msg for ok, msg in checks]
    return FixtureResult(all(ok for ok, _ in checks), lines)


def _fig1_mini_step():
    st = iterate(Method.MINI, PlausibilitySpace(FIG1, FIG1_PRIOR), ["p"])
    want = layers(FIG1, "u", "t", "s")
    return _result((st.order == want, "t<u<s revised by p gives u<t<s"))


def _fig1_mini_cycle():
    ps = PlausibilitySpace(FIG1, FIG1_PRIOR)
    a = iterate(Method.MINI, ps, ["p"])
    b = iterate(Method.MINI, ps, ["p", "q"])
    return _result((a.order == layers(FIG1, "u", "t", "s"), "after p: u<t<s"),
                   (b.order == FIG1_PRIOR, "after p,q: back to t<u<s"))


def _fig1_no_mini_prior():
    rep = sweep_priors(FIG1, Method.MINI)
    return _result((rep.total == 13, f"{rep.total} total preorders enumerated"),
                   (rep.count == 0, f"{rep.count} appropriate for mini"))


def _fig1_cond_priors():
    u, s, t = (FIG1.world_id(x) for x in "ust")
    checks = []
    for m in (Method.COND, Method.LEX):
        rep = sweep_priors(FIG1, m)
        want = {p for p in enumerate_total_preorders(FIG1) if p.lt(u, s) and p.lt(t, s)}
        checks.append((set(rep.appropriate) == want,
                       f"{m}: appropriate priors are exactly those with u<s and t<s "
                       f"({rep.count} of {rep.total})"))
    return _result(*checks)


def _fig2_left():
    d = dftt_construct(FIG2_LEFT)
    want = {FIG2_LEFT.world_id("s"): {"p", "q"}, FIG2_LEFT.world_id("u"): {"p", "r"},
            FIG2_LEFT.world_id("t"): {"q", "r"}}
    flat = decide_appropriate(FIG2_LEFT, Preorder.flat(3), Method.MINI)
    return _result(
        (isinstance(d, TellTaleMap) and d.assignment == want, "dftt sets {p,q}, {p,r}, {q,r}"),
        (is_strongly_separated(FIG2_LEFT), "strongly separated"),
        (not is_negation_closed(FIG2_LEFT), "not negation-closed"),
        (flat.appropriate, "flat prior appropriate for mini"))


def _fig2_center():
    rep = sweep_priors(FIG2_CENTER, Method.MINI)
    return _result(
        (is_negation_closed(FIG2_CENTER), "negation-closed"),
        (is_strongly_separated(FIG2_CENTER), "strongly separated"),
        (is_finitely_identifiable(FIG2_CENTER), "finitely identifiable"),
        (rep.appropriate == (Preorder.flat(4),),
         f"only the flat prior is appropriate for mini ({rep.count} of {rep.total})"))


def _fig2_right():
    sp = ladder(4)
    inc = Preorder.from_layers(4, [[0], [1], [2], [3]])
    d = dftt_construct(ladder(3))
    return _result(
        (decide_appropriate(sp, inc, Method.MINI).appropriate,
         "increasing rank s0<s1<s2<s3 appropriate for mini"),
        (decide_appropriate(sp, Preorder.flat(4), Method.MINI).appropriate,
         "flat prior appropriate for mini"),
        (isinstance(d, TellTaleMap) and "p0" in d.assignment[0],
         "dftt set of s0 contains p0 (3-world truncation)"))


def _fig3():
    s, u = FIG2_LEFT.world_id("s"), FIG2_LEFT.world_id("u")
    tt = mini_telltale_exists(FIG2_LEFT, FIG3_PRIOR)
    rep = decide_appropriate(FIG2_LEFT, FIG3_PRIOR, Method.MINI)
    fail = rep.first_failure
    stream = StreamSpec(("q",), ("p",))
    tr = run_trace(FIG2_LEFT, FIG3_PRIOR, Method.MINI, stream, 6)
    tied = all(st.state.order.equiv(u, s) for st in tr.steps[1:])
    return _result(
        (isinstance(tt, TellTaleFailure) and tt.world == s, "mini tell-tale fails at s"),
        (fail is not None and fail.target == s, "appropriateness fails at s"),
        (fail is not None and witness_is_valid(FIG2_LEFT, FIG3_PRIOR, fail),
         f"witness {fail.witness if fail else None} replays"),
        (tied, "on q then p forever, u ~ s from step 2 on"),
        (all(st.conjecture != {s} for st in tr.steps), "conjecture never {s}"))


def _prop2_fair_failure():
    s, w = FIG2_CENTER.world_id("s"), FIG2_CENTER.world_id("w")
    stream = StreamSpec(("q", "pbar", "p"), ("qbar",))
    flat = Preorder.flat(4)
    tr = run_trace(FIG2_CENTER, flat, Method.MINI, stream, 8)
    v = decide_fair_appropriate(FIG2_CENTER, flat, Method.MINI, s)
    sc = decide_appropriate(FIG2_CENTER, flat, Method.MINI)
    return _result(
        (is_fair(FIG2_CENTER, stream, s), "q, pbar, p then qbar forever is fair for s"),
        (all(w in st.conjecture for st in tr.steps[3:]), "w stays minimal with s"),
        (all(st.conjecture != {s} for st in tr.steps), "conjecture never {s}"),
        (not v.identified, "fair-mode decision: s not identified"),
        (sc.appropriate, "same prior appropriate on sound and complete streams"))


def _prop2_no_fair_prior():
    rep = sweep_priors(FIG2_CENTER, Method.MINI, FAIR)
    return _result((rep.count == 0, f"{rep.count} of {rep.total} priors appropriate "
                                    "for mini on fair streams"))


def _two_worlds():
    prior = layers(TWO_WORLDS, "t", "s")
    return _result(
        (not is_finitely_identifiable(TWO_WORLDS), "not finitely identifiable"),
        (decide_appropriate(TWO_WORLDS, prior, Method.MINI).appropriate,
         "t<s appropriate for mini"))


def _fig1_cond_telltale():
    prior = layers(FIG1, "u t", "s")
    tt = cond_telltale_exists(FIG1, prior)
    u, s, t = (FIG1.world_id(x) for x in "ust")
    want = {u: {"p"}, t: {"q"}, s: {"p", "q"}}
    return _result(
        (isinstance(tt, TellTaleMap) and tt.assignment == want,
         "conditioning tell-tales F_u={p}, F_t={q}, F_s={p,q}"),
        (decide_appropriate(FIG1, prior, Method.COND).appropriate, "cond appropriate"),
        (decide_appropriate(FIG1, prior, Method.LEX).appropriate, "lex appropriate"),
        (conjecture(PlausibilitySpace(FIG1, prior)) == {u, t}, "initial belief {u, t}"))


FIXTURES: dict[str, Fixture] = {f.name: f for f in [
    Fixture("fig1-mini-step", "Fig. 1: one-step minimal revision of t<u<s by p",
            _fig1_mini_step),
    Fixture("fig1-mini-cycle", "Fig. 1: mini falls into a 2-cycle on p, q",
            _fig1_mini_cycle),
    Fixture("fig1-no-mini-prior", "Fig. 1 space: no prior makes mini identify it",
            _fig1_no_mini_prior),
    Fixture("fig1-cond-priors", "Fig. 1 space: cond (and lex) work iff u<s and t<s",
            _fig1_cond_priors),
    Fixture("fig2-left-dftt", "Fig. 2 left: strongly separated, dftt map, flat prior",
            _fig2_left),
    Fixture("fig2-center-negation-closed",
            "Fig. 2 center: negation-closed; flat is the only mini prior",
            _fig2_center),
    Fixture("fig2-right-ladder", "Fig. 2 right (truncated): increasing rank works",
            _fig2_right),
    Fixture("fig3-bad-prior", "Fig. 3: t<s, t<u, u~s is not appropriate for mini",
            _fig3),
    Fixture("two-world-mini", "two worlds, O_t inside O_s: mini with t<s, not one-shot",
            _two_worlds),
    Fixture("fig1-cond-telltale", "cond/lex tell-tale on the Fig. 1 space with u~t<s",
            _fig1_cond_telltale),
    Fixture("prop2-fair-failure", "fair stream q, pbar, p, qbar... defeats flat mini",
            _prop2_fair_failure),
    Fixture("prop2-no-fair-prior", "Fig. 2 center: no prior for mini on fair streams",
            _prop2_no_fair_prior),
]}
