import math

import numpy as np
import pytest

import ghzsim

OMEGA = 8.95e6


def default_params(phi=0.0):
    g = ghzsim.tune_coupling(OMEGA, 0.05)
    return ghzsim.SystemParams.resonant(OMEGA, g, 0.05, 0.05, 200e6, 4000e6, phi)


def test_operation_time():
    s = ghzsim.ghz_schedule(default_params(), ghzsim.HilbertShape(4, 4))
    assert s["t_p"] * 1e6 == pytest.approx(0.33987, abs=1e-5)
    assert s["a_t_product"] == pytest.approx(math.pi / 4, abs=1e-12)


def test_block_model_reaches_target():
    r = ghzsim.run_protocol(default_params())
    assert r["fidelity"] == pytest.approx(1.0, abs=1e-10)
    assert set(r["populations"]) == {"g,0,0", "e,1,1"}


def test_block_propagator_matches_scipy_expm():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    h, block = ghzsim.build_block_hamiltonian(default_params(), 1, 1, True)
    # Order of the 4x4 block: |g,1,1>, |e,1,1>, |g,0,0>, |e,0,0>.
    u = ghzsim.block_propagator(block["omega"], block["coupling"], 0.2e-6)
    np.testing.assert_allclose(u, scipy_linalg.expm(-1j * h * 0.2e-6), atol=1e-10)


def test_ld_hamiltonian_is_hermitian_and_evolves():
    shape = ghzsim.HilbertShape(3, 3)
    h = ghzsim.build_ld_hamiltonian(default_params(), shape)
    assert h.shape == (18, 18)
    np.testing.assert_allclose(h, h.conj().T, atol=0)
    psi0 = ghzsim.basis_state(shape, "g,0,0")
    states = ghzsim.evolve_static(h, psi0, shape, [0.0, 1e-7])
    np.testing.assert_allclose(np.linalg.norm(states, axis=1), 1.0, atol=1e-12)


def test_target_marginals():
    shape = ghzsim.HilbertShape(2, 2)
    target = ghzsim.target_state("g,0,0", shape)
    for slot in ("ion", "vib", "cav"):
        rho = ghzsim.partial_trace(target, shape, [slot])
        np.testing.assert_allclose(np.linalg.eigvalsh(rho), [0.5, 0.5], atol=1e-12)


def test_sweep_and_errors():
    rows = ghzsim.sweep(default_params(), "eta_c", [0.03, 0.05], threads=2)
    assert [r["value"] for r in rows] == [0.03, 0.05]
    with pytest.raises(ghzsim.InvalidArgument):
        ghzsim.sweep(default_params(), "omega", [1.0])
    p = default_params()
    p.g *= 1.01
    with pytest.raises(ghzsim.ConfigurationError):
        ghzsim.run_protocol(p)
    with pytest.raises(ghzsim.TruncationError):
        ghzsim.run_protocol(default_params(), model="ld", shape=ghzsim.HilbertShape(6, 6))


def test_validation_suite_passes():
    results = ghzsim.run_validation()
    assert results and all(r["passed"] for r in results)
