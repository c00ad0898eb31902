from __future__ import annotations

import pytest

from tracktruth import cli
from tracktruth.fixtures import FIXTURES, Fixture, FixtureResult


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_holds(name):
    res = FIXTURES[name].check()
    assert res.ok, "\n".join(res.lines)
    assert res.lines and all(line.startswith("ok") for line in res.lines)


def test_paper_all_fails_when_any_expectation_fails(monkeypatch, capsys):
    broken = Fixture("broken", "deliberately false", lambda: FixtureResult(False, ["FAIL x"]))
    monkeypatch.setitem(cli.FIXTURES, "broken", broken)
    assert cli.main(["paper", "--all"]) == 1
    out = capsys.readouterr().out
    assert "FAIL broken" in out and "FAIL x" in out
