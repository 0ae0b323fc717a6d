"""Smoke tests for the python bindings."""

import densitylab as dl


def test_set_construction_and_counting():
    squares = dl.IntegerSet.from_rule("squares", 10_000)
    assert squares.count(1, 100) == 10
    assert squares.contains(49)
    assert not squares.contains(50)
    # Exact counting continues past the materialized horizon via the rule.
    assert squares.count_leq(10**12) == 10**6

    evens = dl.IntegerSet.from_rule("evens", 1_000)
    odds = dl.IntegerSet.from_rule("odds", 1_000)
    assert evens.union_with(odds).count(1, 1_000) == 1_000
    assert evens.complement().count(1, 1_000) == 500


def test_translate_dilate_and_json():
    a = dl.IntegerSet.from_elements([1, 2, 3], 10)
    assert a.translate(-2).first_elements(5) == [1]
    assert a.dilate(3).first_elements(5) == [3, 6, 9]
    b = dl.IntegerSet.from_json(a.to_json())
    assert b.intervals() == a.intervals()


def test_weights():
    m = dl.WeightSequence.from_spec("power:3/2")
    assert m.floor_at(4) == 8
    assert m.ceil_at(5) == 12
    ke = dl.WeightSequence.from_spec("product:e")
    assert ke.floor_at(3) == 60


def test_density_evaluation():
    squares = dl.IntegerSet.from_rule("squares", 1_000_000)
    r = dl.evaluate_density(squares, "lower-mn", mn="power:2",
                            options={"n_max": 10_000})
    assert r["result"]["exact"] is True
    assert r["result"]["value"] == "1"

    r0 = dl.evaluate_density(squares, "lower")
    assert r0["result"]["value"] == "0"

    prof = dl.simple_profile(squares, "power:2", 50)
    assert all(num == den for _, num, den in prof)


def test_witness_and_jobs():
    evens = dl.IntegerSet.from_rule("evens", 100_000)
    w = dl.mn_witness(evens, "power:1", [1.0, 2.0, 4.0], 10_000)
    assert w["found"] and w["L"] == 2.0

    out = dl.run_job({
        "command": "density",
        "set": "evens",
        "kind": "upper-banach",
        "seed": 0,
    })
    assert out["output"]["result"]["value"] == "1/2"
    # Byte-identical reproducibility is part of the contract.
    again = dl.run_job({
        "command": "density",
        "set": "evens",
        "kind": "upper-banach",
        "seed": 0,
    })
    assert out == again


def test_rule_catalogue_listing():
    names = [name for name, _, _ in dl.rule_catalogue()]
    assert "squares" in names
    assert "kexp" in names
    assert "sparse-blocks" in names
