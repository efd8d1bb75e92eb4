import random

import pytest

from realstruct import lab
from realstruct.core import PSEUDO_METRIC, classify_map
from realstruct.preorders import PiDomain


def test_all_properties_have_distinct_ids():
    assert len(lab.PROPERTIES) == 9
    assert all(p.id == key for key, p in lab.PROPERTIES.items())


@pytest.mark.parametrize("prop", sorted(lab.PROPERTIES))
def test_deterministic(prop):
    a = lab.falsify(prop, 40, seed=11)
    b = lab.falsify(prop, 40, seed=11)
    assert a.to_dict() == b.to_dict()
    assert "runtime_seconds" not in a.to_dict()
    assert "runtime_seconds" in a.to_dict(include_runtime=True)


def test_seed_is_per_trial():
    """A run stopping at trial k sees the same draws as a longer run."""
    full = lab.falsify("delta-local-converse-fails", 500, seed=2)
    assert full.verdict == "counterexample"
    again = lab.falsify("delta-local-converse-fails", full.trial_index + 1, seed=2)
    assert again.counterexample == full.counterexample


def test_unknown_property():
    with pytest.raises(KeyError, match="unknown property"):
        lab.falsify("no-such-law", 10, 0)


def test_bad_trials():
    with pytest.raises(ValueError):
        lab.falsify("strong-implies-delta-local", 0, 0)


def test_pi_domain_errors():
    with pytest.raises(ValueError, match="not defined over"):
        lab.falsify("quasi-lipschitz-delta-rule", 10, 0, pi="all")
    with pytest.raises(ValueError):
        lab.falsify("strong-implies-delta-local", 10, 0, pi="nonsense")


@pytest.mark.parametrize("name", lab.fixture_ids())
def test_stored_fixtures_revalidate(name):
    doc = lab.load_fixture(name)
    assert lab.revalidate(doc["property"], doc)


def test_fixture_document_needs_counterexample():
    report = lab.falsify("strong-implies-delta-local", 5, 0)
    with pytest.raises(ValueError):
        lab.fixture_document(report)


def test_findings():
    assert lab.falsify("closure-domination-topological", 200, 0).finding == "refuted"
    assert lab.falsify("strong-implies-delta-local", 20, 0).finding == "proven"


def test_metric_closure_gives_pseudo_metrics():
    rng = random.Random(5)
    for _ in range(200):
        car = lab.random_carrier(rng, 1, 5)
        d = lab.random_map(rng, car, PiDomain.PSEUDO)
        assert classify_map(d).classification == PSEUDO_METRIC


def test_random_family_names_are_distinct():
    rng = random.Random(0)
    P = lab.random_family(rng, lab.random_carrier(rng), PiDomain.WEAK, "P")
    assert len(set(P.names)) == len(P.names)
