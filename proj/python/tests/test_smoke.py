import math

import numpy as np
import pytest

import rigaspec as rs


def test_dof_count_and_first_eigenvalue():
    layout = rs.riga_layout(40, 2, 10)
    assert layout.separator_count == 3
    assert layout.free_dimension == 40 + 2 - 2 + 3
    op = rs.assemble(layout)
    lam, vecs = rs.solve(op)
    assert lam.shape == (op.dimension,)
    assert np.all(np.diff(lam) >= 0)
    assert lam[0] == pytest.approx(math.pi**2, rel=1e-6)
    m = op.mass
    assert np.allclose(vecs.T @ m @ vecs, np.eye(op.dimension), atol=1e-9)


def test_linear_scalar_problem():
    lam, _ = rs.solve(rs.assemble(rs.iga_layout(2, 1)), vectors=False)
    assert lam[0] == pytest.approx(12.0, rel=1e-14)


def test_error_budget_identity():
    b = rs.error_budget(rs.assemble(rs.iga_layout(32, 2), rs.Quadrature.blended(2 / 3)))
    assert np.max(np.abs(b["pythagoras_residual"])) < 1e-7
    assert np.max(np.abs(b["energy_gap"])) < 1e-10


def test_outliers_and_bands():
    assert rs.count_outliers(8, 2) == 20
    census = rs.outlier_census(rs.assemble(rs.riga_layout(192, 2, 64)))
    assert census["predicted"] == 2
    assert census["observed"] == 2
    bands = rs.stopping_bands(rs.assemble(rs.riga_layout(100, 2, 10)))
    assert len(bands) == 10
    assert all(b["matched"] for b in bands)


def test_optimal_tau():
    assert rs.optimal_tau(2) == pytest.approx(2 / 3, rel=1e-6)


def test_errors_carry_codes():
    with pytest.raises(rs.RigaspecError) as info:
        rs.count_outliers(1, 0)
    assert info.value.code == "invalid-degree"
    with pytest.raises(ValueError):
        rs.assemble(rs.riga_layout(10, 2, 0))


def test_run_command(tmp_path):
    out = tmp_path / "tau.csv"
    code, log = rs.run_command("tau", {"p": "2", "out": str(out)})
    assert code == 0
    assert "tau" in log
    assert out.read_text().splitlines()[1] == "p,tau"
    code, log = rs.run_command("spectrum", {"method": "fea", "block": "3"})
    assert code == 2
