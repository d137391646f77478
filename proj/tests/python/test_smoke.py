"""Smoke tests for the python bindings.

The heavy property testing lives in the C++ suites; here we only confirm the
bindings expose the main operations faithfully.
"""

import pytest

import certainsync as cs


def test_construction_inspection():
    spec = cs.ConstructionSpec.egh(5)
    assert spec.family == cs.Family.EGH
    assert spec.n == 5
    assert cs.family_name(spec.family) == "EGH"
    assert cs.chunk_schedule(spec, 3) == [2, 3, 5]
    assert cs.decodability_profile(spec, 2)[0] == 10
    assert cs.max_diff_size(spec) == 5
    assert cs.chunk_count_limit(spec) == 0
    assert cs.smallest_prime_count(100, 1) == 4

    ols = cs.ConstructionSpec.ols(10)
    assert ols.ols_order == cs.default_ols_order(10) == 5
    assert cs.chunk_schedule(ols, 2) == [5, 5]

    eh = cs.ConstructionSpec.extended_hamming(8)
    assert cs.chunk_schedule(eh, 3) == [1, 3, 3]
    assert repr(eh) == "ConstructionSpec(EH, n=8)"


def test_golden_matrix_and_stopping_distance():
    rows = cs.materialize_rows(cs.ConstructionSpec.egh(5), 3)
    assert rows[:2] == ["01010", "10101"]
    assert len(rows) == 10
    assert cs.stopping_distance(cs.ConstructionSpec.egh(5), 2) >= 3


def test_rows_for_element():
    spec = cs.ConstructionSpec.egh(5)
    assert cs.rows_for_element(spec, 1, 4) == [0]
    assert cs.rows_for_element(spec, 2, 4) == [1]
    with pytest.raises(cs.ElementOutOfUniverse):
        cs.rows_for_element(spec, 1, 6)


def test_reconcile_golden_example():
    out = cs.reconcile(cs.ConstructionSpec.egh(5), [1], [1, 2, 4])
    assert out["status"] == "done"
    assert sorted(out["receiver_only"]) == [2, 4]
    assert out["sender_only"] == []
    assert out["chunks_used"] == 2
    assert out["cells_used"] == 5
    assert out["bits_on_wire"] == 960
    assert sorted(out["set1"]) == sorted(out["set2"]) == [1, 2, 4]


def test_config_errors_are_typed():
    with pytest.raises(cs.ConfigError):
        cs.ConstructionSpec.egh(0)
    with pytest.raises(cs.ConfigError):
        cs.ConstructionSpec.extended_hamming(7)
    assert issubclass(cs.ConfigError, cs.Error)


def test_universe_reduce_round_trip():
    shared = [1000 + 17 * k for k in range(300)]
    set1 = shared + [3, 7]
    set2 = shared + [999_999_999_999]
    out = cs.universe_reduce(set1, set2, delta_max_collisions=1, seed=42)
    assert sorted(out["sender_only"]) == [3, 7]
    assert out["receiver_only"] == [999_999_999_999]
    assert out["rounds"] >= 1
    assert sorted(out["set1"]) == sorted(out["set2"])
    assert out["bits_on_wire"] == out["cells_used"] * 192


def test_reduction_helpers():
    assert cs.reduced_universe_size(100, 1) == 4950
    assert cs.expected_collisions(100, 4950) == pytest.approx(1.0)
    card, xor_hash = cs.digest([5, 9, 12])
    assert card == 3
    assert cs.digest([12, 5, 9]) == (card, xor_hash)


def test_scenarios_and_experiment():
    s1, s2 = cs.gen_superset_scenario(1000, 10, seed=7)
    assert len(s2) == 1000 and len(s1) == 990
    assert set(s1) < set(s2)

    records = cs.run_experiment("CertainSync-EGH", 2000, [1, 3], trials=2, seed=9)
    assert len(records) == 4
    assert all(r["success"] for r in records)
    assert all(r["bits"] == r["cells"] * 192 for r in records)

    csv_text = cs.experiment_csv("CertainSync-EGH", 500, [2], trials=2, seed=9)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "scheme,n,diff,trial,chunks,cells,bits,success,rounds,ms,wire_bytes"
    assert len(lines) == 4  # header + 2 trials + mean
    assert lines[-1].split(",")[3] == "mean"
