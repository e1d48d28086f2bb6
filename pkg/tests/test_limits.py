import json
import math

import numpy as np
import pytest

from planchlab.limits import (
    biane_check,
    collect_fluctuations,
    coupling_residual_variance,
    gaussian_reference,
    predicted_profile_sum_sd,
    run_clt_characters,
    run_clt_shape,
    run_clt_transition,
    run_lln,
    staircase_family,
)
from planchlab.partitions import YoungDiagram


SEED = 4711


@pytest.fixture(scope="module")
def small_batch():
    return collect_fluctuations(n=500, N=300, kmax=6, seed=SEED, eta_products=True)


def test_batch_shapes(small_batch):
    assert small_batch.array("eta2").shape == (300,)
    assert len(small_batch.rows_list) == 300
    assert all(sum(rows) == 500 for rows in small_batch.rows_list)


def test_characters_report(small_batch):
    rep = run_clt_characters(500, 300, kmax=5, seed=SEED, batch=small_batch)
    by_name = {f.name: f for f in rep.functionals}
    for k in range(2, 6):
        f = by_name[f"eta{k}"]
        assert abs(f.mean) < 0.3
        assert 0.6 < f.var < 1.5
        assert f.ks_p is not None and f.ks_p > 1e-4
    cov = np.array(rep.covariance)
    assert np.allclose(cov, cov.T)
    assert np.all(np.linalg.eigvalsh(cov) > -1e-12)  # positive semidefinite
    # Hermite-product rows are recorded with their targets
    assert "etaP2,2" in by_name
    assert by_name["etaP2,2"].target_var == 2.0
    assert by_name["etaP2,2,2"].target_var == 6.0


def test_shape_report(small_batch):
    rep = run_clt_shape(500, 300, kmax=4, seed=SEED, batch=small_batch)
    assert rep.extras["u0_max_abs"] == 0.0
    by_name = {f.name: f for f in rep.functionals}
    for k in range(1, 5):
        f = by_name[f"u{k}"]
        assert abs(f.var / f.target_var - 1) < 0.4, k


def test_transition_report(small_batch):
    rep = run_clt_transition(500, 300, kmax=5, seed=SEED, batch=small_batch)
    assert rep.extras["t1_max_abs"] == 0.0
    assert rep.extras["t2_max_abs"] == 0.0
    assert abs(rep.extras["corr_t3_eta2"] - 1.0) < 1e-9
    by_name = {f.name: f for f in rep.functionals}
    for k in range(3, 6):
        assert abs(by_name[f"t{k}"].var / (k - 1) - 1) < 0.4


def test_report_serialization(small_batch):
    rep = run_clt_characters(500, 300, kmax=4, seed=SEED, batch=small_batch)
    payload = json.loads(rep.to_json())
    assert payload["config"] == {
        "kind": "clt-characters", "n": 500, "N": 300, "kmax": 4, "seed": SEED,
    }
    lines = rep.csv_lines()
    assert lines[0].startswith("# config: ")
    assert json.loads(lines[0][len("# config: "):])["n"] == 500
    assert lines[1].split(",")[0] == "name"


def test_reports_deterministic():
    a = run_lln(300, 40, kmax=5, seed=99)
    b = run_lln(300, 40, kmax=5, seed=99)
    assert a.to_json() == b.to_json()
    ra = run_clt_transition(200, 50, kmax=4, seed=123)
    rb = run_clt_transition(200, 50, kmax=4, seed=123)
    assert ra.to_json() == rb.to_json()


def test_lln_report_structure():
    rep = run_lln(400, 60, kmax=6, seed=7)
    ks = [r["k"] for r in rep.rows]
    assert ks == [2, 3, 4, 5, 6]
    # degree-2 profile sums are deterministic: the median deviation is exactly 0
    assert rep.rows[0]["median"] == 0.0 and rep.rows[0]["threshold"] == 0.0
    for r in rep.rows:
        assert r["ok"]
    assert rep.grid_points == 4 * math.ceil(math.sqrt(400))
    assert 0 < rep.sup_median < 0.35
    payload = json.loads(rep.to_json())
    assert payload["config"]["n"] == 400


def test_predicted_sd_values():
    # degree 4: the centered sum is 4/sqrt(n) times a variance-3 Gaussian
    assert abs(predicted_profile_sum_sd(4, 10000) - 4 * math.sqrt(3) / 100) < 1e-12
    assert predicted_profile_sum_sd(2, 100) == 0.0


def test_coupling_residual_decreases():
    small = collect_fluctuations(n=1000, N=250, kmax=5, seed=31)
    large = collect_fluctuations(n=4000, N=250, kmax=5, seed=32)
    for k in (3, 4):
        assert coupling_residual_variance(large, k) < coupling_residual_variance(small, k)


# ---------------------------------------------------------------------------
# character-ratio asymptotics

def test_staircase_family_in_window():
    fam = staircase_family((5, 9))
    assert [lam.n for lam in fam] == [30, 90]
    for lam in fam:
        assert lam.rows[0] <= 3 * math.sqrt(lam.n)
        assert len(lam.rows) <= 3 * math.sqrt(lam.n)


def test_biane_check_staircases():
    rep = biane_check(staircase_family((5, 9, 13)), (2,))
    assert rep.sizes == [30, 90, 182]
    assert rep.bounded
    assert all(r <= 1.5 for r in rep.ratios)
    # the residual decays like n^(-3/2) on this family
    assert abs(rep.residual_exponent + 1.5) < 0.1
    payload = json.loads(rep.to_json())
    assert payload["bounded"] is True
    assert payload["residual_exponent"] == rep.residual_exponent
    # trivial class: prediction is exactly the measured ratio 1
    rep_triv = biane_check(staircase_family((5, 9)), (1, 1))
    assert all(abs(m - 1.0) < 1e-12 for m in np.array(rep_triv.measured) / np.array(rep_triv.predicted))


def test_biane_typical_diagrams_drift_to_zero():
    # on Plancherel-typical diagrams the degree-3 cumulant of the rescaled
    # profile drifts toward zero, so the measured constant shrinks
    from planchlab import plancherel
    from planchlab.observables import free_cumulants

    values = []
    for n, seed in ((400, 5), (6400, 5)):
        lam = plancherel.sample(n, seed)
        c = float(free_cumulants(lam, 3)[1]) / n**1.5
        values.append(abs(c))
    assert values[1] < values[0]


def test_biane_rejects_wide_diagrams():
    with pytest.raises(ValueError):
        biane_check([YoungDiagram((50,))], (2,), A=3.0)


# ---------------------------------------------------------------------------
# reference Gaussian truncations

def test_gaussian_reference_shapes_and_mean():
    grid = np.linspace(-1.9, 1.9, 41)
    out = gaussian_reference(60, grid, seed=8, count=400)
    assert out["delta"].shape == (400, 41)
    # centered: the pointwise mean shrinks like 1/sqrt(count)
    assert np.max(np.abs(out["delta"].mean(axis=0))) < 0.2


def test_gaussian_reference_variance_partial_sum():
    # at the grid point x = 0 (theta = pi/2) the truncation variance is the
    # analytic partial sum (1/pi^2) sum sin^2(k pi/2)/k
    kmax = 100
    out = gaussian_reference(kmax, np.array([0.0]), seed=21, count=10000)
    empirical = float(np.var(out["delta"][:, 0]))
    analytic = sum(
        math.sin(k * math.pi / 2) ** 2 / k for k in range(2, kmax + 1)
    ) / math.pi**2
    assert abs(empirical - analytic) / analytic < 0.10


def test_gaussian_reference_cap():
    with pytest.raises(ValueError):
        gaussian_reference(300, [0.0], seed=1)
