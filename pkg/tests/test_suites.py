import pytest

from annulus_harmonics import suites
from annulus_harmonics.errors import DomainError


def test_records_have_required_fields():
    for rec in suites.suite_oracle():
        d = rec.as_dict()
        assert set(d) == {"id", "reference", "measured", "bound", "passed"}
        assert d["passed"]


def test_refuses_to_run_on_failing_oracle(monkeypatch):
    called = []
    monkeypatch.setattr(suites, "suite_oracle", lambda: [suites.Record("oracle.x", "forced", 1.0, 0.0, False)])
    monkeypatch.setitem(suites.SUITES, "wronskian", lambda: called.append(1) or [])
    records, ok = suites.run_suites(["wronskian"])
    assert not ok
    assert called == []
    assert [r.id for r in records] == ["oracle.x"]


def test_unknown_suite():
    with pytest.raises(DomainError):
        suites.run_suites(["nope"])


def test_every_suite_described():
    assert set(suites.DESCRIPTIONS) == set(suites.SUITES)


@pytest.mark.parametrize("name", ["wronskian", "half_integer", "mcmahon", "normalization", "coeff", "identities"])
def test_fast_suites_pass(name):
    records = suites.SUITES[name]()
    assert records and all(r.passed for r in records), [r for r in records if not r.passed]


def test_identity_zero_set_size():
    assert len(suites.identity_zeros()) == 100
    assert len(suites.probe_points()) == 100
