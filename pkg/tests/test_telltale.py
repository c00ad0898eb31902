from __future__ import annotations

import pytest

from tracktruth.core import Preorder, enumerate_total_preorders
from tracktruth.families import enumerate_spaces
from tracktruth.fixtures import FIG1, FIG2_LEFT, FIG3_PRIOR, TWO_WORLDS, layers
from tracktruth.streams import StreamSpec, canonical_sc_stream, unroll
from tracktruth.telltale import (
    NotFinitelyIdentifiable,
    TellTaleFailure,
    TellTaleMap,
    check_dftt_map,
    cond_telltale_exists,
    dftt_construct,
    finite_identifier,
    is_finitely_identifiable,
    mini_telltale_exists,
)


def test_dftt_on_strongly_separated_space():
    d = dftt_construct(FIG2_LEFT)
    assert isinstance(d, TellTaleMap)
    assert d.to_names(FIG2_LEFT) == {"s": ["p", "q"], "u": ["p", "r"], "t": ["q", "r"]}
    assert check_dftt_map(FIG2_LEFT, d) == []


def test_dftt_failure_names_world():
    d = dftt_construct(FIG1)
    assert isinstance(d, TellTaleFailure) and not d
    # O_u and O_t are both inside O_s
    assert FIG1.name(d.world) in {"u", "t"}
    assert not is_finitely_identifiable(TWO_WORLDS)


def test_check_dftt_map_flags_bad_entries():
    bad = TellTaleMap("dftt", {0: frozenset({"p"}), 1: frozenset({"q"}),
                               2: frozenset({"r"})})
    assert check_dftt_map(FIG2_LEFT, bad)


def test_finite_identifier_on_every_world_and_rotation():
    for space in enumerate_spaces(3, 3):
        if not is_finitely_identifiable(space):
            with pytest.raises(NotFinitelyIdentifiable):
                finite_identifier(space, ())
            continue
        for s in range(space.size):
            spec = canonical_sc_stream(space, s)
            for rot in range(len(spec.cycle)):
                seq = spec.cycle[rot:] + spec.cycle[:rot]
                stream = unroll(StreamSpec((), seq), len(seq) + space.size)
                guess = finite_identifier(space, stream)
                assert guess is not None and guess.world == s


def test_finite_identifier_waits():
    # nothing observed yet and world 0 has a nonempty tell-tale set
    assert finite_identifier(FIG2_LEFT, ()) is None


def test_mini_telltale_fig3_fails_at_s():
    out = mini_telltale_exists(FIG2_LEFT, FIG3_PRIOR)
    assert isinstance(out, TellTaleFailure)
    assert FIG2_LEFT.name(out.world) == "s"


def test_mini_telltale_requires_total_order():
    with pytest.raises(ValueError):
        mini_telltale_exists(FIG1, Preorder.from_pairs(3, [(0, 1)]))


def test_mini_telltale_none_on_fig1():
    assert all(isinstance(mini_telltale_exists(FIG1, o), TellTaleFailure)
               for o in enumerate_total_preorders(FIG1))


def test_cond_telltale_fig1():
    out = cond_telltale_exists(FIG1, layers(FIG1, "u t", "s"))
    assert out.to_names(FIG1) == {"u": ["p"], "s": ["p", "q"], "t": ["q"]}
    assert isinstance(cond_telltale_exists(FIG1, Preorder.flat(3)), TellTaleFailure)


def test_cond_telltale_search_order_does_not_change_existence():
    for space in enumerate_spaces(3, 3):
        for o in enumerate_total_preorders(space):
            a = cond_telltale_exists(space, o)
            b = cond_telltale_exists(space, o, largest_first=True)
            assert isinstance(a, TellTaleMap) == isinstance(b, TellTaleMap)


def test_telltale_map_hashable():
    a = dftt_construct(FIG2_LEFT)
    assert hash(a) == hash(dftt_construct(FIG2_LEFT))
