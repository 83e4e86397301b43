import math

import pytest

import recur


def test_pressure_benchmarks():
    assert abs(recur.pressure("full:2") - math.log(2)) < 1e-10
    assert abs(recur.pressure("golden") - math.log((1 + 5 ** 0.5) / 2)) < 1e-10
    assert abs(recur.pressure("full:2", [math.log(0.3), math.log(0.7)])) < 1e-10


def test_holes_increase_to_log2():
    ps = [recur.pressure_with_holes("full:2", ["1" * n]) for n in range(2, 12)]
    assert all(a < b for a, b in zip(ps, ps[1:]))
    assert math.log(2) - ps[-1] < 0.01


def test_dimensions():
    assert abs(recur.bowen_dimension("doubling") - 1) < 1e-10
    assert abs(recur.bowen_dimension("cantor3") - math.log(2) / math.log(3)) < 1e-8


def test_repetition_times():
    r = recur.repetition_times([0, 1, 1, 0, 1, 1, 0])
    assert r[1] == 3 and r[3] == 3 and r[4] == 3
    assert r[5] is None


def test_ell_sequence_invariants():
    ell = recur.ell_sequence(0.6, 1.2, 500, cap=10**9)
    for k, (a, b) in enumerate(zip(ell, ell[1:]), start=2):
        assert a >= k ** 3
        assert b >= a + 2 * k


def test_lemma_trials_and_mutant():
    rows = recur.lemma_trials(10, limit=100000, seed=3)
    assert sum(r["violations"] for r in rows) == 0
    bad = recur.lemma_trials(10, limit=100000, seed=3, mutant=True)
    assert sum(r["violations"] for r in bad) > 0


def test_construct():
    p = recur.construct(0.3, 0.8, 3, horizon=100000, cylinder="0")
    assert p["identities_hold"]
    assert 0 <= p["x"] <= 1


def test_ladder():
    lad = recur.dimension_ladder("slopes24", [4, 6, 8])
    d = lad["dimensions"]
    assert d[0] < d[1] < d[2] < lad["full_dimension"]


def test_errors_map_to_exit_codes():
    with pytest.raises(recur.RecurError):
        recur.construct(0.8, 0.3, 3, horizon=1000)
    assert recur.exit_code("ConfigError") == 2
    assert recur.exit_code("HorizonTooShort") == 4
    assert recur.exit_code("SourceInfeasible") == 3
