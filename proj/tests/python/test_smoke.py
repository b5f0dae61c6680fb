import math

import numpy as np
import pytest

import eprx


def test_ground_orbital_at_origin():
    assert eprx.orbital(0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-14)


def test_overlap_table_completeness():
    t = eprx.overlap_table(8)
    assert t.modes == 8
    np.testing.assert_allclose(t.left + t.right, np.eye(8), atol=1e-12)
    assert t.right[0, 1] == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)


def test_closed_forms():
    assert eprx.negativity_closed_form("coherent", 2.0) == pytest.approx(0.25)
    assert eprx.negativity_closed_form("number", 9) == pytest.approx(0.4)
    assert eprx.negativity_closed_form("number", 1) == 0.0
    assert eprx.fidelity_closed_form(2.0) == pytest.approx(1 / math.sqrt(2))


def test_bell_state_negativity():
    psi = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
    assert eprx.negativity(np.outer(psi, psi.conj())) == pytest.approx(0.5, abs=1e-12)


def test_analytic_limit_number_state():
    m = eprx.block_moments("number", 4)
    assert m.negativity == pytest.approx(0.3, abs=1e-14)


def test_sweep_csv_analytic():
    text = eprx.sweep_csv({"state": "coherent", "alpha_sq": "1,2,4", "path": "analytic"})
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    mu = [float(row.split(",")[header.index("mu")]) for row in lines[1:]]
    np.testing.assert_allclose(mu, [1 / 6, 1 / 4, 1 / 3], atol=1e-14)


def test_empty_sweep_rejected():
    with pytest.raises(eprx.ConfigError):
        eprx.sweep_csv({"state": "number", "path": "analytic"})


def test_sampling_is_seeded():
    assert eprx.sample(0.3, 1000, 7) == eprx.sample(0.3, 1000, 7)
