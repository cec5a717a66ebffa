"""Backend parity: the compiled kernels and the pure-Python fallback must
produce bit-identical trajectories, counts and statuses."""

import os
import subprocess
import sys

import numpy as np
import pytest

from photonloop import _kernels_py as pyk
from photonloop._backend import backend_name

compiled = pytest.importorskip(
    "photonloop._kernels", reason="compiled extension not built"
)


def run_both(fn_name, *args):
    out_c = getattr(compiled, fn_name)(*[a.copy() if isinstance(a, np.ndarray) else a for a in args])
    out_p = getattr(pyk, fn_name)(*[a.copy() if isinstance(a, np.ndarray) else a for a in args])
    return out_c, out_p


def test_status_constants_agree():
    assert compiled.STATUS_CONVERGED == pyk.STATUS_CONVERGED == 0
    assert compiled.STATUS_BUDGET_EXHAUSTED == pyk.STATUS_BUDGET_EXHAUSTED == 1
    assert compiled.STATUS_DIVERGED == pyk.STATUS_DIVERGED == 2


def test_recursive_solve_bit_identical():
    rng = np.random.default_rng(100)
    for trial in range(200):
        weights = rng.uniform(-1, 1, (4, 4))
        inject = rng.uniform(-1, 1, 4)
        gain = 1.0 + rng.uniform(-0.05, 0.05)
        max_c = 80
        if trial % 2:
            noise = rng.normal(0, 10.0 ** -rng.integers(2, 6), (max_c, 4))
        else:
            noise = np.zeros((0, 4))
        sc = np.empty((max_c, 4)); rc = np.empty(max_c)
        sp = np.empty((max_c, 4)); rp = np.empty(max_c)
        kc, stc = compiled.run_recursive_solve(weights, gain, inject, noise,
                                               1e-6, max_c, 1e6, sc, rc)
        kp, stp = pyk.run_recursive_solve(weights, gain, inject, noise,
                                          1e-6, max_c, 1e6, sp, rp)
        assert (kc, stc) == (kp, stp)
        assert np.array_equal(sc[:kc], sp[:kp])
        assert np.array_equal(rc[:kc], rp[:kp])


def test_two_circulation_bit_identical():
    rng = np.random.default_rng(101)
    for trial in range(200):
        weights = rng.uniform(-1, 1, (4, 4))
        first = rng.uniform(-2, 2, 4)
        second = rng.uniform(-2, 2, 4)
        gain = 1.0 + rng.uniform(-0.05, 0.05)
        noise = rng.normal(0, 1e-3, 4) if trial % 2 else np.zeros(0)
        oc = np.zeros(4); op = np.zeros(4)
        compiled.run_two_circulation(weights, gain, first, second, noise, oc)
        pyk.run_two_circulation(weights, gain, first, second, noise, op)
        assert np.array_equal(oc, op)


def test_divergence_status():
    weights = np.eye(4) * 1.5  # unphysical bank, fine for the raw kernel
    inject = np.ones(4)
    states = np.empty((500, 4)); rels = np.empty(500)
    k, status = pyk.run_recursive_solve(weights, 1.0, inject, np.zeros((0, 4)),
                                        1e-12, 500, 1e6, states, rels)
    assert status == pyk.STATUS_DIVERGED
    assert np.sqrt((states[k - 1] ** 2).sum()) > 1e6


def test_budget_status():
    weights = np.eye(4) * 0.99
    inject = np.ones(4)
    states = np.empty((10, 4)); rels = np.empty(10)
    k, status = pyk.run_recursive_solve(weights, 1.0, inject, np.zeros((0, 4)),
                                        1e-12, 10, 1e6, states, rels)
    assert (k, status) == (10, pyk.STATUS_BUDGET_EXHAUSTED)


def test_env_var_forces_python_backend():
    env = dict(os.environ, PHOTONLOOP_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import photonloop; print(photonloop.backend_name())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend_is_compiled_when_available():
    assert backend_name() in ("cython", "python")
    if os.environ.get("PHOTONLOOP_PURE_PYTHON", "0") in ("", "0"):
        assert backend_name() == "cython"


def test_full_inversion_identical_across_backends():
    # drive the whole engine through both kernel modules
    from photonloop import LoopConfig, NoiseConfig
    from photonloop.fixtures import DEMO1
    import photonloop.loop as loop_mod

    cfg = LoopConfig(tol=1e-6, noise=NoiseConfig(sigma_ase=1e-4, sigma_weight=1e-4, rng_seed=9))
    original = loop_mod.kernels
    try:
        loop_mod.kernels = compiled
        r1, t1 = loop_mod.invert_matrix(DEMO1, cfg, strict=False)
        loop_mod.kernels = pyk
        r2, t2 = loop_mod.invert_matrix(DEMO1, cfg, strict=False)
    finally:
        loop_mod.kernels = original
    assert np.array_equal(r1, r2)
    for a, b in zip(t1, t2):
        assert a.circulations_used == b.circulations_used
        assert np.array_equal(a.outputs, b.outputs)
