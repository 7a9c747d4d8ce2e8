import math

import pytest

import netsample as ns


def test_gfunc_binary_tree():
    tree = ns.m_tree(2, 4)
    ds = ns.distance_spectrum(tree)
    assert tree.size == 31
    assert sum(ds.counts) == 31 * 31
    assert ns.g_eval(ds, 1.0) == pytest.approx(1.0)
    assert ns.g_eval(ds, 0.0) == pytest.approx(1 / 31)


def test_single_eigenfunction_identity():
    g, blocks = ns.two_block_sbm(300, 20.0, 0.6, 3)
    s = ns.srw_spectrum(g)
    f2 = s.eigenfunctions[:, 1]
    tree = ns.gw_tree("binom:1,2,0.5", 100, 9)
    rep = ns.variance_exact(s, list(2.0 + 0.5 * f2), tree)
    expected = 0.25 * ns.g_eval(ns.distance_spectrum(tree), s.eigenvalues[1])
    assert rep["var_rds"] == pytest.approx(expected, rel=1e-10)
    assert rep["rho2"] == pytest.approx(1.0)


def test_two_state_kernel():
    s = ns.kernel_spectrum([[0.7, 0.3], [0.1, 0.9]])
    assert s.eigenvalues[1] == pytest.approx(0.6, abs=1e-12)


def test_simulation_runs():
    g, blocks = ns.two_block_sbm(500, 20.0, 0.5, 1)
    rows = ns.mc_design_effect(g, [float(b) for b in blocks], [50, 100], replicates=50,
                               mode="both", budget=100, gw_target=300)
    assert {r["mode"] for r in rows} == {"with", "without"}
    assert all(math.isfinite(r["de"]) for r in rows)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        ns.Graph.parse("0 1 -2\n")
    g = ns.Graph.parse("0 1\n2 3\n")
    with pytest.raises(ArithmeticError):
        ns.srw_spectrum(g)
