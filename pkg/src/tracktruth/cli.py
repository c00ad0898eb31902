"""Command-line front end.

Exit codes: 0 success/pass, 1 violation/fail, 2 usage, parse or semantic
input error.  Text output is line-oriented ``key: value`` records; ``--format
json`` emits the same data as one JSON document.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from .core import PlausibilitySpace, Preorder, is_negation_closed, validate_space
from .fixtures import FIXTURES
from .revision import Method, RevisionError, conjecture, iterate
from .serialize import (
    InputError,
    format_order,
    format_worlds,
    load_json,
    preorder_from_dict,
    preorder_to_dict,
    space_from_dict,
    stream_from_dict,
    stream_to_dict,
    telltale_to_dict,
    verdict_to_dict,
)
from .streams import is_complete, is_sound
from .telltale import (
    COND,
    DFTT,
    MINI,
    TellTaleMap,
    cond_telltale_exists,
    dftt_construct,
    mini_telltale_exists,
)
from .verifier import (
    FAIR,
    SOUND_COMPLETE,
    BudgetExceeded,
    decide_appropriate,
    decide_fair_appropriate,
    decide_in_limit,
    run_trace,
    sweep_priors,
)

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        for line in lines:
            print(line)


def _load_space(path: str):
    return space_from_dict(load_json(path), path)


def _load_prior(args, space):
    if not getattr(args, "prior", None):
        return Preorder.flat(space.size)
    prior = preorder_from_dict(load_json(args.prior), space, args.prior)
    if getattr(args, "method", None) is Method.MINI and not prior.total:
        raise InputError("prior: mini needs a total preorder (some worlds are "
                         "incomparable)", args.prior)
    return prior


def _check_space(space, path: str) -> None:
    rep = validate_space(space)
    if not rep.ok:
        raise InputError("space: " + "; ".join(rep.violations), path)


def _world(space, name: str) -> int:
    try:
        return space.world_id(name)
    except KeyError:
        raise UsageError(f"unknown world {name!r}") from None


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    space = _load_space(args.space)
    rep = validate_space(space)
    data = {"ok": rep.ok, "worlds": space.size, "observables": len(space.observables),
            "violations": rep.violations, "warnings": rep.warnings}
    lines = [f"space: {args.space}", f"worlds: {space.size}",
             f"observables: {len(space.observables)}"]
    lines += [f"violation: {v}" for v in rep.violations]
    lines += [f"warning: {w}" for w in rep.warnings]
    ok = rep.ok
    if args.prior:
        prior = _load_prior(args, space)
        pv = prior.violations()
        data["prior"] = {"ok": not pv, "total": prior.total, "violations": pv}
        lines.append(f"prior: {'total' if prior.total else 'partial'} preorder")
        lines += [f"violation: {v}" for v in pv]
        ok = ok and not pv
    lines.append("result: " + ("ok" if ok else "invalid"))
    _emit(args, data, lines)
    return OK if ok else FAIL


def cmd_revise(args) -> int:
    space = _load_space(args.space)
    _check_space(space, args.space)
    prior = _load_prior(args, space)
    for lab in args.obs:
        if lab not in space.labels:
            raise UsageError(f"unknown observable {lab!r}")
    try:
        state = iterate(args.method, PlausibilitySpace(space, prior), args.obs)
    except RevisionError as exc:
        raise UsageError(str(exc)) from None
    conj = conjecture(state)
    data = {
        "method": str(args.method),
        "observations": list(args.obs),
        "order": preorder_to_dict(state.order, space),
        "alive": space.names(state.alive),
        "conjecture": space.names(conj),
        "log": [{"label": r.label, "moved": space.names(r.moved), "note": r.note}
                for r in state.log],
    }
    lines = [f"method: {args.method}",
             f"prior: {format_order(prior, space)}"]
    for r in state.log:
        lines.append(f"step {r.label}: moved {format_worlds(space, r.moved)}"
                     + (f" [{r.note}]" if r.note else ""))
    lines += [f"order: {format_order(state.order, space)}",
              f"alive: {format_worlds(space, state.alive)}",
              f"conjecture: {format_worlds(space, conj)}"]
    _emit(args, data, lines)
    return OK


def cmd_trace(args) -> int:
    space = _load_space(args.space)
    _check_space(space, args.space)
    prior = _load_prior(args, space)
    spec = stream_from_dict(load_json(args.stream), space, args.stream)
    if args.horizon < 1:
        raise UsageError("--horizon must be at least 1")
    tr = run_trace(space, prior, args.method, spec, args.horizon)
    data = {
        "method": str(args.method),
        "stream": stream_to_dict(spec),
        "initial_conjecture": space.names(tr.initial_conjecture),
        "steps": [{"position": st.position, "label": st.label,
                   "order": preorder_to_dict(st.state.order, space),
                   "conjecture": space.names(st.conjecture)} for st in tr.steps],
        "recurrence": list(tr.recurrence) if tr.recurrence else None,
    }
    lines = [f"method: {args.method}", f"stream: {spec}",
             f"0 -: {format_worlds(space, tr.initial_conjecture)}"
             f"  ({format_order(prior, space)})"]
    for st in tr.steps:
        lines.append(f"{st.position + 1} {st.label}: {format_worlds(space, st.conjecture)}"
                     f"  ({format_order(st.state.order, space)})")
    if args.target:
        s = _world(space, args.target)
        data["sound"] = is_sound(space, spec, s)
        data["complete"] = is_complete(space, spec, s)
        data["converges"] = tr.converges_to(s)
        lines += [f"sound for {args.target}: {data['sound']}",
                  f"complete for {args.target}: {data['complete']}"]
        if tr.recurrence:
            lines.append(f"converges to {{{args.target}}}: {data['converges']}")
    if tr.recurrence:
        i, j = tr.recurrence
        lines.append(f"recurrence: steps {i + 2}..{j + 1} repeat")
    else:
        lines.append("recurrence: not reached within horizon")
    _emit(args, data, lines)
    return OK


def cmd_decide(args) -> int:
    space = _load_space(args.space)
    _check_space(space, args.space)
    prior = _load_prior(args, space)
    mode = FAIR if args.fair else SOUND_COMPLETE
    if args.fair and not is_negation_closed(space):
        raise InputError("--fair needs a negation-closed space "
                         "(some observable has no complement)", args.space)
    if args.target:
        s = _world(space, args.target)
        fn = decide_fair_appropriate if args.fair else decide_in_limit
        verdicts = (fn(space, prior, args.method, s),)
    else:
        verdicts = decide_appropriate(space, prior, args.method, mode,
                                      stop_at_first=False).verdicts
    ok = all(v.identified for v in verdicts)
    data = {"method": str(args.method), "mode": mode, "appropriate": ok,
            "verdicts": [verdict_to_dict(v, space) for v in verdicts]}
    lines = [f"method: {args.method}", f"mode: {mode}",
             f"prior: {format_order(prior, space)}"]
    for v in verdicts:
        line = f"{space.name(v.target)}: {v.status}"
        if v.witness is not None:
            line += f"  witness {v.witness}"
        if v.corrections:
            line += "  corrections " + ", ".join(
                f"{e}->{c if c is not None else 'cycle'}" for e, c in v.corrections)
        lines.append(line)
    lines.append("result: " + ("appropriate" if ok else "not appropriate"))
    _emit(args, data, lines)
    return OK if ok else FAIL


def cmd_telltale(args) -> int:
    space = _load_space(args.space)
    _check_space(space, args.space)
    prior = _load_prior(args, space)
    if args.kind == DFTT:
        out = dftt_construct(space)
    elif args.kind == MINI:
        if not prior.total:
            raise UsageError("mini tell-tales need a total prior")
        out = mini_telltale_exists(space, prior)
    else:
        out = cond_telltale_exists(space, prior)
    data = telltale_to_dict(out, space)
    lines = [f"kind: {args.kind}"]
    if isinstance(out, TellTaleMap):
        for w, labs in out.to_names(space).items():
            lines.append(f"{w}: {{{', '.join(labs)}}}")
        lines.append("result: exists")
    else:
        lines += [f"fails at: {space.name(out.world)}", f"reason: {out.reason}",
                  "result: none"]
    _emit(args, data, lines)
    return OK if isinstance(out, TellTaleMap) else FAIL


def cmd_sweep(args) -> int:
    space = _load_space(args.space)
    _check_space(space, args.space)
    mode = FAIR if args.fair else SOUND_COMPLETE
    if args.general and Method(args.method) is Method.MINI:
        raise UsageError("--general is only available for cond and lex")
    rep = sweep_priors(space, args.method, mode, general=args.general,
                       bound=args.bound, jobs=args.jobs)
    data = {"method": str(args.method), "mode": mode, "total": rep.total,
            "appropriate": rep.count,
            "priors": [preorder_to_dict(p, space) for p in rep.appropriate]}
    lines = [f"method: {args.method}", f"mode: {mode}",
             f"appropriate: {rep.count}/{rep.total}"]
    lines += [f"  {format_order(p, space)}" for p in rep.appropriate]
    _emit(args, data, lines)
    return OK


def cmd_paper(args) -> int:
    if args.list:
        for f in FIXTURES.values():
            print(f"{f.name}: {f.anchor}")
        return OK
    if args.all:
        names = list(FIXTURES)
    elif args.name:
        if args.name not in FIXTURES:
            raise UsageError(f"unknown fixture {args.name!r} (see --list)")
        names = [args.name]
    else:
        raise UsageError("give a fixture name, --all or --list")
    results = {}
    lines = []
    for name in names:
        fx = FIXTURES[name]
        res = fx.check()
        results[name] = {"ok": res.ok, "anchor": fx.anchor, "checks": res.lines}
        lines.append(f"{'PASS' if res.ok else 'FAIL'} {name}")
        if args.explain:
            lines.append(f"  anchor: {fx.anchor}")
        if args.explain or not res.ok:
            lines += ["  " + ln for ln in res.lines]
    ok = all(r["ok"] for r in results.values())
    _emit(args, {"ok": ok, "fixtures": results}, lines)
    return OK if ok else FAIL


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("space", help="space JSON file")
    model.add_argument("--prior", help="prior JSON file (default: flat)")
    model.add_argument("--method", type=Method, choices=list(Method), default=Method.MINI)

    p = argparse.ArgumentParser(
        prog="tracktruth",
        description="Belief revision as a learning method on finite epistemic spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common], help="check a space (and prior)")
    sp.add_argument("space")
    sp.add_argument("--prior")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("revise", parents=[common, model], help="apply observations")
    sp.add_argument("obs", nargs="*", help="observable labels, in order")
    sp.set_defaults(func=cmd_revise)

    sp = sub.add_parser("trace", parents=[common, model], help="run a lasso stream")
    sp.add_argument("stream", help="stream JSON file")
    sp.add_argument("--horizon", type=int, default=20)
    sp.add_argument("--target", help="world to check soundness/convergence against")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("decide", parents=[common, model], help="decide appropriateness")
    sp.add_argument("--fair", action="store_true", help="quantify over fair streams")
    sp.add_argument("--target", help="decide a single world")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("telltale", parents=[common], help="tell-tale maps")
    sp.add_argument("space")
    sp.add_argument("--prior")
    sp.add_argument("--kind", choices=[DFTT, MINI, COND], default=DFTT)
    sp.set_defaults(func=cmd_telltale)

    sp = sub.add_parser("sweep", parents=[common], help="count appropriate priors")
    sp.add_argument("space")
    sp.add_argument("--method", type=Method, choices=list(Method), default=Method.MINI)
    sp.add_argument("--fair", action="store_true")
    sp.add_argument("--general", action="store_true", help="all preorders, not only total")
    sp.add_argument("--bound", type=int, help="refuse spaces with more worlds than this")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("paper", parents=[common], help="run the named example fixtures")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--explain", action="store_true", help="show anchors and checks")
    sp.set_defaults(func=cmd_paper)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # observations may follow options: revise space.json --prior x.json p q
        if extra and getattr(args, "command", None) == "revise" \
                and not any(e.startswith("-") for e in extra):
            args.obs += extra
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, OSError, BudgetExceeded, ValueError) as exc:
        # ValueError covers InputError, NotNegationClosed and enumeration bounds
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
