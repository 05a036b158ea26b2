import json

import pytest

from glcirc.corpus import CorpusSpec
from glcirc.selftest import PROPERTIES, run_selftest


def test_all_properties_hold():
    reports = run_selftest(7, 60)
    assert [r.name for r in reports] == list(PROPERTIES)
    for r in reports:
        assert r.instances == 60
        assert r.violations == []
        assert r.live > 0


def test_deterministic():
    a = [r.to_json() for r in run_selftest(3, 30, properties=("cut", "loeb"))]
    b = [r.to_json() for r in run_selftest(3, 30, properties=("cut", "loeb"))]
    assert json.dumps(a) == json.dumps(b)


def test_custom_corpus():
    (report,) = run_selftest(2, 20, CorpusSpec(2, 80, max_atoms=3), properties=("weakening",))
    assert report.name == "weakening" and not report.violations


def test_unknown_property():
    with pytest.raises(KeyError):
        run_selftest(1, 5, properties=("symmetry",))
