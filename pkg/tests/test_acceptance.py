"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line and enforcing its runtime budget.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import csv
import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from photonloop import (
    Diverged,
    LoopConfig,
    NoiseConfig,
    NotConverged,
    accuracy_percent,
    assemble,
    assemble_fredholm,
    assemble_ode,
    assemble_poisson,
    block_invert,
    block_multiply,
    dense_invert,
    dense_solve,
    encode_weight_bank,
    invert_matrix,
    partition,
    richardson_invert_column,
    solve_system,
    spectral_radius_estimate,
    throughput,
)
from photonloop.cli import main as cli_main
from photonloop.equations import Grid1D
from photonloop.fixtures import DEMO1, DEMO2, random_diagonally_dominant

IDEAL_TIGHT = LoopConfig(tol=1e-8, noise=NoiseConfig.ideal())


@contextmanager
def criterion(number, budget_seconds, description):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL criterion {number}: {description}")
        raise
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE PASS criterion {number}: {description} ({elapsed:.2f} s)")
    assert elapsed < budget_seconds, f"criterion {number} took {elapsed:.2f} s, budget {budget_seconds} s"


def rel_frobenius(measured, reference):
    return float(np.linalg.norm(measured - reference) / np.linalg.norm(reference))


def read_rows(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_criterion_1_ideal_limit_inversion():
    with criterion(1, 1.0, "ideal-limit inversion of both demo operands within 1e-6"):
        for name, matrix in (("demo1", DEMO1), ("demo2", DEMO2)):
            result, _ = invert_matrix(matrix, IDEAL_TIGHT)
            reference = dense_invert(matrix)
            rel = rel_frobenius(result, reference)
            acc = accuracy_percent(result, reference)
            assert rel <= 1e-6, f"{name}: relative error {rel:.3e}"
            assert acc >= 99.9999, f"{name}: accuracy {acc:.6f} %"


def test_criterion_2_quantization_only_bound():
    with criterion(2, 5.0, "43.7 mV quantization keeps both demo accuracies at or above 97 %"):
        cfg = LoopConfig(tol=1e-8, noise=NoiseConfig())  # DAC snap only
        for name, matrix in (("demo1", DEMO1), ("demo2", DEMO2)):
            result, _ = invert_matrix(matrix, cfg)
            acc = accuracy_percent(result, dense_invert(matrix))
            assert acc >= 97.0, f"{name}: quantized accuracy {acc:.3f} %"


def test_criterion_3_throughput_model():
    with criterion(3, 1.0, "implied inversion rate within [0.5x, 3x] of 1.5e6 per second"):
        cfg = LoopConfig(tol=1e-2, loop_time=130e-9, noise=NoiseConfig.ideal())
        _, traces = invert_matrix(DEMO1, cfg)
        counts = [t.circulations_used for t in traces]
        mean_count = float(np.mean(counts))
        rate = throughput(int(max(counts)), 130e-9)
        print(
            f"  implied circulations per inversion at tol 1e-2: {counts} "
            f"(mean {mean_count:.1f}); throughput {rate:.4g} /s; the reference "
            f"rate 1.5e6 /s at 130 ns/loop corresponds to about 5 circulations"
        )
        assert 0.5 * 1.5e6 <= rate <= 3.0 * 1.5e6


def test_criterion_4_convergence_dichotomy():
    with criterion(4, 10.0, "convergence iff estimated radius below one over 200 instances"):
        rng = np.random.default_rng(2024)
        tol = 1e-4
        checked = 0

        # diagonal family: must converge, with circulation counts within 2
        # of the geometric-series prediction ceil(ln tol / ln rho)
        for _ in range(100):
            rhos = rng.uniform(0.1, 0.6, 4) * rng.choice([-1.0, 1.0], 4)
            a = np.eye(4) - np.diag(rhos)
            rho_hat = spectral_radius_estimate(np.diag(rhos), 50)
            assert rho_hat < 0.9
            cfg = LoopConfig(omega=1.0, tol=tol, noise=NoiseConfig.ideal())
            _, traces = invert_matrix(a, cfg)
            assert all(t.converged for t in traces)
            observed = max(t.circulations_used for t in traces)
            predicted = math.ceil(math.log(tol) / math.log(rho_hat))
            assert abs(observed - predicted) <= 2, (rhos, observed, predicted)
            checked += 1

        # diagonally-dominant family: radius below the band, must converge
        for _ in range(60):
            a = random_diagonally_dominant(4, rng, diag=1.0, spread=0.05)
            rho_hat = spectral_radius_estimate(np.eye(4) - a, 50)
            assert rho_hat < 0.9
            cfg = LoopConfig(omega=1.0, tol=tol, noise=NoiseConfig.ideal())
            _, traces = invert_matrix(a, cfg)
            assert all(t.converged for t in traces)
            checked += 1

        # encodable loop matrices with Perron mass above the band: must fail
        for _ in range(40):
            diag = rng.uniform(0.75, 0.85)
            off = rng.uniform(0.1, 0.14)
            m = diag * np.eye(4) + off * np.ones((4, 4))
            rho_hat = spectral_radius_estimate(m, 50)
            assert rho_hat > 1.1
            bank = encode_weight_bank(m, noise=NoiseConfig.ideal())
            cfg = LoopConfig(omega=1.0, tol=tol, noise=NoiseConfig.ideal())
            with pytest.raises((Diverged, NotConverged)):
                richardson_invert_column(bank, 0, cfg)
            checked += 1

        assert checked == 200


def test_criterion_5_block_engine_oracle_equivalence():
    with criterion(5, 30.0, "block multiply/invert match dense oracles at dims 8 and 16"):
        cfg = LoopConfig(tol=1e-10, noise=NoiseConfig.ideal())
        rng = np.random.default_rng(77)
        for dim in (8, 16):
            for _ in range(20):
                a = random_diagonally_dominant(dim, rng)
                b = random_diagonally_dominant(dim, rng)
                product = assemble(block_multiply(partition(a), partition(b), cfg))
                assert rel_frobenius(product, a @ b) <= 1e-8
                inverse = assemble(block_invert(partition(a), cfg))
                assert rel_frobenius(inverse, dense_invert(a)) <= 1e-5


def test_criterion_6_equation_suite():
    with criterion(6, 30.0, "equation suite matches dense solves; second-order ODE convergence"):
        cfg = LoopConfig(tol=1e-10, noise=NoiseConfig.ideal())
        zero = lambda *a: 0.0
        one = lambda *a: 1.0

        ie = assemble_fredholm(lambda t, s: 0.3 * t * s, lambda t: t, Grid1D(-1.0, 1.0, 8))
        ode = assemble_ode(zero, one, zero, (0.0, 1.0), (0.0, math.sin(1.0)), 8)
        pde = assemble_poisson(lambda x, y: math.sin(math.pi * x) * math.sin(math.pi * y), 4)
        assert pde.matrix.shape == (16, 16)
        for label, system in (("integral", ie), ("ode", ode), ("poisson", pde)):
            outcome = solve_system(system, cfg)
            reference = dense_solve(system.matrix, system.rhs)
            rel = float(np.linalg.norm(outcome.solution - reference) / np.linalg.norm(reference))
            assert rel <= 1e-4, f"{label}: {rel:.3e}"

        # halving the grid spacing shrinks the error about fourfold
        errors = {}
        for n in (8, 16):
            system = assemble_ode(zero, one, zero, (0.0, 1.0), (0.0, math.sin(1.0)), n)
            outcome = solve_system(system, cfg)
            grid = Grid1D(0.0, 1.0, n, kind="interior")
            err = outcome.solution - np.sin(grid.points)
            errors[n] = math.sqrt(float((err * err).mean()))
        ratio = errors[8] / errors[16]
        print(f"  ODE error ratio n 8 -> 16: {ratio:.3f}")
        assert 3.5 <= ratio <= 4.5


def _sweep_means(tmp_path, tag, config, flags=()):
    path = tmp_path / f"{tag}.json"
    path.write_text(json.dumps(config))
    outdir = tmp_path / tag
    assert cli_main(["sweep", "--config", str(path), "--out", str(outdir), *flags]) == 0
    rows = read_rows(outdir / "results.csv")
    means = {}
    for row in rows:
        assert row["error"] == "", row
        means.setdefault(float(row["value"]), []).append(float(row["accuracy_fro_percent"]))
    return {value: float(np.mean(accs)) for value, accs in sorted(means.items())}


def test_criterion_7_noise_monotonicity(tmp_path):
    with criterion(7, 60.0, "mean accuracy monotone under each imperfection sweep"):
        base = {"fixture": "demo1", "noise": {"rng_seed": 100, "quantize": False}}
        for parameter, values in (
            ("sigma_ase", [0.0, 1e-3, 3e-3, 1e-2]),
            ("sigma_weight", [0.0, 1e-3, 3e-3, 1e-2]),
        ):
            config = {**base, "sweep": {"parameter": parameter, "values": values, "seeds": 20}}
            means = _sweep_means(tmp_path, parameter, config)
            ordered = [means[v] for v in values]
            print(f"  {parameter}: " + ", ".join(f"{v:g}->{m:.4f}%" for v, m in zip(values, ordered)))
            assert all(x >= y for x, y in zip(ordered, ordered[1:])), ordered

        vstep_values = [0.0437, 0.1, 0.5]
        config = {
            "fixture": "demo1",
            "noise": {"rng_seed": 100},
            "loop": {"tol": 1e-8},
            "sweep": {"parameter": "v_step", "values": vstep_values, "seeds": 20},
        }
        means = _sweep_means(tmp_path, "v_step", config)
        ordered = [means[v] for v in vstep_values]
        print("  v_step: " + ", ".join(f"{v:g}->{m:.4f}%" for v, m in zip(vstep_values, ordered)))
        assert all(x >= y for x, y in zip(ordered, ordered[1:])), ordered

        # gain mismatch on a diagonal operand with distinct entries, no other
        # imperfection: accuracy must strictly decrease as |delta| grows
        delta_values = [0.0, 0.005, 0.01, 0.02]
        config = {
            "matrix": np.diag([2.0, 3.0, 4.0, 5.0]).tolist(),
            "noise": {"rng_seed": 100, "quantize": False},
            "loop": {"tol": 1e-10, "max_circulations": 5000},
            "sweep": {"parameter": "gain_mismatch_delta", "values": delta_values, "seeds": 1},
        }
        means = _sweep_means(tmp_path, "delta", config)
        ordered = [means[v] for v in delta_values]
        print("  delta: " + ", ".join(f"{v:g}->{m:.6f}%" for v, m in zip(delta_values, ordered)))
        assert all(x > y for x, y in zip(ordered, ordered[1:])), ordered


def test_criterion_8_determinism(tmp_path):
    with criterion(8, 30.0, "repeated demo suite runs produce byte-identical CSVs"):
        out1, out2 = tmp_path / "first", tmp_path / "second"
        assert cli_main(["paper-suite", "--out", str(out1), "--seed", "4242"]) == 0
        assert cli_main(["paper-suite", "--out", str(out2), "--seed", "4242"]) == 0
        for name in ("results.csv", "trace.csv", "equations.csv"):
            b1 = (out1 / name).read_bytes()
            b2 = (out2 / name).read_bytes()
            assert b1 == b2, f"{name} differs between identical runs"
