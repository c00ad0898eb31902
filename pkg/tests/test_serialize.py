from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracktruth.core import Preorder
from tracktruth.families import random_preorder, random_space, random_total_preorder
from tracktruth.fixtures import FIG1, FIG2_CENTER, FIG2_LEFT, FIG3_PRIOR, ladder
from tracktruth.serialize import (
    InputError,
    format_order,
    loads,
    preorder_from_dict,
    preorder_to_dict,
    space_from_dict,
    space_to_dict,
    stream_from_dict,
    stream_to_dict,
    telltale_from_dict,
    telltale_to_dict,
    verdict_from_dict,
    verdict_to_dict,
)
from tracktruth.streams import StreamSpec
from tracktruth.telltale import dftt_construct, mini_telltale_exists
from tracktruth.verifier import FAIR, decide_appropriate


def _via_json(doc):
    return json.loads(json.dumps(doc))


@pytest.mark.parametrize("space", [FIG1, FIG2_LEFT, FIG2_CENTER, ladder(4)])
def test_space_round_trip_keeps_declaration_order(space):
    doc = space_to_dict(space)
    back = space_from_dict(_via_json(doc))
    assert back == space
    assert list(doc["observables"]) == list(space.labels)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_random_round_trips(seed):
    rng = random.Random(seed)
    space = random_space(rng, 5, 5)
    assert space_from_dict(_via_json(space_to_dict(space))) == space
    for order in (random_total_preorder(rng, space.size), random_preorder(rng, space.size)):
        back = preorder_from_dict(_via_json(preorder_to_dict(order, space)), space)
        assert back == order


def test_stream_round_trip():
    spec = StreamSpec(("q", "pbar", "p"), ("qbar",))
    assert stream_from_dict(_via_json(stream_to_dict(spec)), FIG2_CENTER) == spec


def test_verdict_round_trip():
    for mode in ("sound-complete", FAIR):
        rep = decide_appropriate(FIG2_CENTER, Preorder.flat(4), "mini", mode,
                                 stop_at_first=False)
        for v in rep.verdicts:
            assert verdict_from_dict(_via_json(verdict_to_dict(v, FIG2_CENTER)),
                                     FIG2_CENTER) == v


def test_telltale_round_trip():
    for out in (dftt_construct(FIG2_LEFT), mini_telltale_exists(FIG2_LEFT, FIG3_PRIOR)):
        assert telltale_from_dict(_via_json(telltale_to_dict(out, FIG2_LEFT)),
                                  FIG2_LEFT) == out


def test_parse_error_has_line_and_column():
    with pytest.raises(InputError) as info:
        loads('{"worlds": ["a",\n  "b" "c"]}', "bad.json")
    assert (info.value.line, info.value.column) == (2, 7)
    assert str(info.value).startswith("bad.json:2:7:")


@pytest.mark.parametrize("doc,needle", [
    ({"observables": {}}, "worlds"),
    ({"worlds": ["a"], "observables": {"p": ["b"]}}, "unknown world"),
    ({"worlds": ["a", 1], "observables": {}}, "strings"),
    ({"worlds": ["a"], "observables": {"p": "a"}}, "must list"),
])
def test_space_semantic_errors(doc, needle):
    with pytest.raises(InputError, match=needle):
        space_from_dict(doc)


@pytest.mark.parametrize("doc,needle", [
    ({}, "exactly one"),
    ({"layers": [["u"], ["s"]]}, "every world"),
    ({"layers": [["u"], ["s"], ["x"]]}, "unknown world"),
    ({"pairs": [["u"]]}, "pair"),
])
def test_prior_semantic_errors(doc, needle):
    with pytest.raises(InputError, match=needle):
        preorder_from_dict(doc, FIG1)


def test_stream_errors():
    with pytest.raises(InputError, match="nonempty"):
        stream_from_dict({"prefix": [], "cycle": []})
    with pytest.raises(InputError, match="unknown observable"):
        stream_from_dict({"prefix": ["zz"], "cycle": ["p"]}, FIG1)


def test_format_order():
    assert format_order(FIG3_PRIOR, FIG2_LEFT) == "t < s ~ u"
    partial = Preorder.from_pairs(3, [(0, 1)])
    assert format_order(partial, FIG1) == "{u < s} over {u, s, t}"
