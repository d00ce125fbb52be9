import json
import math

import pytest

import _fedcodec as fc


def test_module_constants():
    assert fc.CONTAINER_VERSION == 1
    assert fc.HEADER_BYTES == 19


def test_elias_codeword_tables():
    assert fc.gamma_encode(1) == "1"
    assert fc.gamma_encode(2) == "010"
    assert fc.gamma_encode(17) == "000010001"
    assert fc.delta_encode(17) == "001010001"
    for n in (1, 2, 3, 100, 2**20):
        assert fc.gamma_decode(fc.gamma_encode(n)) == n
        assert fc.delta_decode(fc.delta_encode(n)) == n
        assert fc.gamma_length(n) == len(fc.gamma_encode(n))
        assert fc.delta_length(n) == len(fc.delta_encode(n))


def test_rounding():
    assert fc.round_uniform([2.5, 3.5, -2.5], 1.0) == [2, 4, -2]
    q = fc.stochastic_round([0.3] * 2000, 1.0, seed=5)
    assert set(q) == {0, 1}
    assert abs(sum(q) / 2000 - 0.3) < 0.05
    assert fc.stochastic_round([0.3] * 16, 1.0, seed=5) == fc.stochastic_round(
        [0.3] * 16, 1.0, seed=5
    )


def test_encode_decode_roundtrip():
    u = [0.0, 0.0, 1.5, -0.5, 0.0, 2.0]
    blob = fc.encode(u, 0.5, quantizer="round")
    assert isinstance(blob, bytes)
    assert len(blob) >= fc.HEADER_BYTES + 8
    assert blob[0] == fc.CONTAINER_VERSION
    assert fc.decode(blob) == u  # exact multiples of the step
    assert fc.payload_bits(blob) > 0

    stoch = fc.encode(u, 0.5, seed=9)
    assert fc.encode(u, 0.5, seed=9) == stoch  # deterministic in the seed
    decoded = fc.decode(stoch)
    assert all(abs(a - b) <= 0.5 for a, b in zip(decoded, u))


def test_corrupt_container_raises():
    blob = fc.encode([1.0, 2.0], 1.0)
    with pytest.raises(fc.CorruptStreamError):
        fc.decode(blob[:-1])
    with pytest.raises(fc.CorruptStreamError):
        fc.decode(bytes([9]) + blob[1:])


def test_transforms():
    y = fc.randomized_hadamard([1.0, 1.0], seed=3)
    assert len(y) == 2
    back = fc.inverse_hadamard(y, 3, 2)
    assert all(abs(a - b) < 1e-12 for a, b in zip(back, [1.0, 1.0]))
    unit, norm = fc.normalize([3.0, 4.0])
    assert norm == pytest.approx(5.0)
    assert unit == pytest.approx([0.6, 0.8])


def test_rd_tools():
    grid = fc.log_grid(0.1, 1.0, 4)
    assert grid[0] == pytest.approx(0.1)
    assert grid[-1] == pytest.approx(1.0)
    updates = [[0.5, -1.0, 0.0, 2.0, 0.0, 0.0, 0.25, -0.125] * 8] * 3
    rows = fc.rd_sweep(updates, grid, seed=11)
    assert len(rows) == 4
    rates = [r["mean_rate_bits_per_elem"] for r in rows]
    assert rates == sorted(rates, reverse=True)
    winner = fc.client_vote(updates[0], grid, lambda_=10.0, seed=2)
    assert winner in [pytest.approx(g) for g in grid]
    hist = fc.vote_histogram(updates, grid, lambda_=10.0, seed=2)
    assert sum(hist) == 3


def test_run_experiment():
    config = {
        "master_seed": 3,
        "grid": [0.25, 0.5, 1.0],
        "updates": {
            "source": "laplace",
            "count": 2,
            "dim": 32,
            "scale": 1.0,
            "zero_fraction": 0.5,
        },
    }
    csv, manifest = fc.run_experiment("rd_sweep", json.dumps(config))
    lines = csv.strip().split("\n")
    assert lines[0] == (
        "delta,mean_rate_bits_per_elem,mean_distortion_per_elem,"
        "mean_entropy_bits"
    )
    assert len(lines) == 4
    meta = json.loads(manifest)
    assert meta["experiment"] == "rd_sweep"
    assert meta["config"]["master_seed"] == 3

    with pytest.raises(fc.ConfigError):
        fc.run_experiment("rd_sweep", "{not json")
    with pytest.raises(fc.ConfigError):
        fc.run_experiment("unknown_experiment", json.dumps(config))

    infeasible = dict(config, budget_bits_per_elem=1e-9)
    with pytest.raises(fc.InfeasibleBudgetError):
        fc.run_experiment("rd_sweep", json.dumps(infeasible))


def test_lengths_match_analytic_law():
    for n in range(1, 1025):
        assert fc.gamma_length(n) == 2 * int(math.log2(n)) + 1
