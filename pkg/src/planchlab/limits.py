"""Monte Carlo verification of the limit laws, with machine-readable reports.

Every run is a pure function of (seed, n, N, kmax): samples come from the
counter-based generator via a documented seed split, accumulation is
order-independent, and reruns are bitwise identical.  Tolerances are
engineering choices (Gaussian sampling error plus finite-size margin) and are
recorded in the reports next to the measured values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import stats as scipy_stats

from . import observables, plancherel
from .algebra import psharp_rho_in_p
from .observables import fluctuation_functionals, omega_moment, omega_value
from .partitions import YoungDiagram, multiplicities, sort_partition, _profile_breakpoints


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# sample batches

_ETA_PRODUCT_INDICES = (
    (2, 2), (3, 2), (4, 2), (3, 3), (2, 2, 2),
)


@dataclass
class FluctuationBatch:
    """All fluctuation functionals evaluated on one shared sample set."""

    n: int
    N: int
    kmax: int
    seed: int
    values: dict  # name -> np.ndarray of length N
    rows_list: list
    eta_product_rhos: list = field(default_factory=list)

    def array(self, name: str) -> np.ndarray:
        return self.values[name]


def _eta_product_name(rho: tuple) -> str:
    return "etaP" + ",".join(map(str, rho))


def collect_fluctuations(
    n: int,
    N: int,
    kmax: int,
    seed: int,
    workers: int = 1,
    eta_products: bool = False,
) -> FluctuationBatch:
    """Sample N diagrams of size n and evaluate the functionals on each."""
    rows_list = plancherel.sample_many(n, N, seed, workers=workers)
    names: list[str] = []
    names += [f"q{k}" for k in range(1, kmax + 1)]
    names += [f"g{k}" for k in range(1, kmax + 1)]
    names += [f"eta{k}" for k in range(2, kmax + 1)]
    names += [f"u{k}" for k in range(0, kmax + 1)]
    names += [f"t{k}" for k in range(1, kmax + 1)]
    product_rhos = [r for r in _ETA_PRODUCT_INDICES if sum(r) <= 6] if eta_products else []
    names += [_eta_product_name(r) for r in product_rhos]
    expansions = {r: psharp_rho_in_p(r) for r in product_rhos}

    out = {name: np.empty(N) for name in names}
    for i, rows in enumerate(rows_list):
        lam = YoungDiagram(rows)
        fv = fluctuation_functionals(lam, kmax)
        for k in range(1, kmax + 1):
            out[f"q{k}"][i] = fv.q[k]
            out[f"g{k}"][i] = fv.g[k]
            out[f"t{k}"][i] = fv.t[k]
        for k in range(2, kmax + 1):
            out[f"eta{k}"][i] = fv.eta[k]
        for k in range(0, kmax + 1):
            out[f"u{k}"][i] = fv.u[k]
        for rho in product_rhos:
            value = expansions[rho].evaluate(lam)
            scale = math.prod(
                float(part) ** (m / 2) for part, m in multiplicities(rho).items()
            )
            out[_eta_product_name(rho)][i] = float(value) / (
                scale * float(n) ** (sum(rho) / 2)
            )
    return FluctuationBatch(
        n=n, N=N, kmax=kmax, seed=seed, values=out, rows_list=rows_list,
        eta_product_rhos=list(product_rhos),
    )


# ---------------------------------------------------------------------------
# reports

@dataclass
class FunctionalStats:
    name: str
    mean: float
    var: float
    se_mean: float
    target_mean: float
    target_var: float
    z_mean: float
    ks_stat: float | None = None
    ks_p: float | None = None


@dataclass
class MomentReport:
    kind: str
    n: int
    N: int
    kmax: int
    seed: int
    functionals: list
    names: list
    covariance: list
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "config": {
                "kind": self.kind, "n": self.n, "N": self.N,
                "kmax": self.kmax, "seed": self.seed,
            },
            "functionals": [asdict(f) for f in self.functionals],
            "covariance": {"names": self.names, "matrix": self.covariance},
            "extras": self.extras,
        }
        return json.dumps(payload, sort_keys=True)

    def csv_lines(self) -> list[str]:
        header = "name,n,N,mean,var,target_mean,target_var,z_mean,ks_stat,ks_p"
        lines = [
            "# config: " + json.dumps(
                {"kind": self.kind, "n": self.n, "N": self.N,
                 "kmax": self.kmax, "seed": self.seed}, sort_keys=True),
            header,
        ]
        for f in self.functionals:
            ks_stat = "" if f.ks_stat is None else _fmt(f.ks_stat)
            ks_p = "" if f.ks_p is None else _fmt(f.ks_p)
            lines.append(
                f"{f.name},{self.n},{self.N},{_fmt(f.mean)},{_fmt(f.var)},"
                f"{_fmt(f.target_mean)},{_fmt(f.target_var)},{_fmt(f.z_mean)},"
                f"{ks_stat},{ks_p}"
            )
        return lines


def _stats_row(name, xs: np.ndarray, target_mean: float, target_var: float,
               ks_scale: float | None) -> FunctionalStats:
    N = len(xs)
    mean = float(np.mean(xs))
    var = float(np.var(xs, ddof=1)) if N > 1 else 0.0
    se = math.sqrt(target_var / N) if target_var > 0 else (
        math.sqrt(var / N) if var > 0 else 0.0
    )
    z = (mean - target_mean) / se if se > 0 else 0.0
    ks_stat = ks_p = None
    if ks_scale is not None and ks_scale > 0:
        ks_stat, ks_p = scipy_stats.kstest(xs / ks_scale, "norm")
        ks_stat, ks_p = float(ks_stat), float(ks_p)
    return FunctionalStats(name, mean, var, se, target_mean, target_var, z, ks_stat, ks_p)


# ---------------------------------------------------------------------------
# law of large numbers

@dataclass
class LlnReport:
    n: int
    N: int
    kmax: int
    seed: int
    rows: list   # per k: dict with median/q90 of |pt_k(scaled) - limit| and threshold
    sup_median: float
    sup_q90: float
    sup_bound: float
    grid_points: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": {"kind": "lln", "n": self.n, "N": self.N,
                           "kmax": self.kmax, "seed": self.seed,
                           "grid_points": self.grid_points},
                "rows": self.rows,
                "sup_distance": {
                    "median": self.sup_median, "q90": self.sup_q90,
                    "regression_bound": self.sup_bound,
                },
            },
            sort_keys=True,
        )

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows) and self.sup_median <= self.sup_bound


def predicted_profile_sum_sd(k: int, n: int) -> float:
    """Leading-order standard deviation of the scaled profile power sum.

    The centered scaled sum of degree k is k/sqrt(n) times an asymptotically
    Gaussian combination whose variance is the squared-binomial sum below.
    """
    m = k - 1
    var = 0.0
    for j in range(0, (m - 2) // 2 + 1):
        idx = m - 2 * j
        var += math.comb(m, j) ** 2 * idx
    return k * math.sqrt(var) / math.sqrt(n)


def run_lln(n: int, N: int, kmax: int = 8, seed: int = 20120, workers: int = 1) -> LlnReport:
    """Sample statistics of the scaled profile sums and of the sup-distance."""
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    rows_list = plancherel.sample_many(n, N, seed, workers=workers)
    sqrt_n = math.sqrt(n)
    grid_points = 4 * math.ceil(math.sqrt(n))
    grid = np.linspace(-2.5, 2.5, grid_points)
    omega_grid = np.array([omega_value(x) for x in grid])

    deviations = {k: np.empty(N) for k in range(2, kmax + 1)}
    sups = np.empty(N)
    for i, rows in enumerate(rows_list):
        lam = YoungDiagram(rows)
        for k in range(2, kmax + 1):
            scaled = float(observables.eval_ptilde(k, lam)) / float(n) ** (k / 2)
            deviations[k][i] = abs(scaled - float(omega_moment(k)))
        pts = _profile_breakpoints(rows)
        xp = np.array([p[0] for p in pts]) / sqrt_n
        fp = np.array([p[1] for p in pts]) / sqrt_n
        vals = np.interp(grid, xp, fp)
        outside = (grid < xp[0]) | (grid > xp[-1])
        vals[outside] = np.abs(grid[outside])
        sups[i] = float(np.max(np.abs(vals - omega_grid)))

    report_rows = []
    for k in range(2, kmax + 1):
        med = float(np.median(deviations[k]))
        q90 = float(np.quantile(deviations[k], 0.9))
        threshold = 5.0 * predicted_profile_sum_sd(k, n)
        report_rows.append(
            {"k": k, "median": med, "q90": q90, "threshold": threshold,
             "ok": med <= threshold}
        )
    return LlnReport(
        n=n, N=N, kmax=kmax, seed=seed, rows=report_rows,
        sup_median=float(np.median(sups)), sup_q90=float(np.quantile(sups, 0.9)),
        sup_bound=0.35, grid_points=grid_points,
    )


# ---------------------------------------------------------------------------
# central limit theorems

def run_clt_characters(
    n: int, N: int, kmax: int = 5, seed: int = 20121, workers: int = 1,
    batch: FluctuationBatch | None = None, eta_products: bool = True,
) -> MomentReport:
    """Statistics of the normalized character values against unit Gaussians."""
    if batch is None:
        batch = collect_fluctuations(n, N, kmax, seed, workers=workers,
                                     eta_products=eta_products)
    functionals = []
    names = [f"eta{k}" for k in range(2, kmax + 1)]
    for k in range(2, kmax + 1):
        xs = batch.array(f"eta{k}")
        functionals.append(_stats_row(f"eta{k}", xs, 0.0, 1.0, ks_scale=1.0))
    matrix = np.vstack([batch.array(nm) for nm in names])
    cov = np.cov(matrix)
    extras = {}
    for rho in batch.eta_product_rhos:
        name = _eta_product_name(rho)
        xs = batch.array(name)
        target_var = float(
            math.prod(math.factorial(m) for m in multiplicities(rho).values())
        )
        functionals.append(_stats_row(name, xs, 0.0, target_var, ks_scale=None))
        extras[name] = {"target_var": target_var}
    return MomentReport(
        kind="clt-characters", n=batch.n, N=batch.N, kmax=kmax, seed=batch.seed,
        functionals=functionals, names=names, covariance=cov.tolist(), extras=extras,
    )


def run_clt_shape(
    n: int, N: int, kmax: int = 4, seed: int = 20121, workers: int = 1,
    batch: FluctuationBatch | None = None,
) -> MomentReport:
    """Statistics of the second-kind Chebyshev pairings of the profile deviation."""
    if batch is None:
        batch = collect_fluctuations(n, N, max(kmax + 1, 2), seed, workers=workers)
    functionals = [
        _stats_row("u0", batch.array("u0"), 0.0, 0.0, ks_scale=None)
    ]
    names = [f"u{k}" for k in range(1, kmax + 1)]
    for k in range(1, kmax + 1):
        xs = batch.array(f"u{k}")
        target_var = 1.0 / (k + 1)
        functionals.append(
            _stats_row(f"u{k}", xs, 0.0, target_var, ks_scale=math.sqrt(target_var))
        )
    matrix = np.vstack([batch.array(nm) for nm in names])
    return MomentReport(
        kind="clt-shape", n=batch.n, N=batch.N, kmax=kmax, seed=batch.seed,
        functionals=functionals, names=names, covariance=np.cov(matrix).tolist(),
        extras={"u0_max_abs": float(np.max(np.abs(batch.array("u0"))))},
    )


def run_clt_transition(
    n: int, N: int, kmax: int = 5, seed: int = 20121, workers: int = 1,
    batch: FluctuationBatch | None = None,
) -> MomentReport:
    """Statistics of the first-kind Chebyshev pairings of the measure deviation."""
    if batch is None:
        batch = collect_fluctuations(n, N, max(kmax, 2), seed, workers=workers)
    functionals = []
    for k in (1, 2):
        functionals.append(_stats_row(f"t{k}", batch.array(f"t{k}"), 0.0, 0.0, None))
    names = [f"t{k}" for k in range(3, kmax + 1)]
    for k in range(3, kmax + 1):
        xs = batch.array(f"t{k}")
        target_var = float(k - 1)
        functionals.append(
            _stats_row(f"t{k}", xs, 0.0, target_var, ks_scale=math.sqrt(target_var))
        )
    matrix = np.vstack([batch.array(nm) for nm in names])
    t3 = batch.array("t3")
    eta2 = batch.array("eta2")
    corr = float(np.corrcoef(t3, eta2)[0, 1])
    extras = {
        "corr_t3_eta2": corr,
        "t1_max_abs": float(np.max(np.abs(batch.array("t1")))),
        "t2_max_abs": float(np.max(np.abs(batch.array("t2")))),
    }
    return MomentReport(
        kind="clt-transition", n=batch.n, N=batch.N, kmax=kmax, seed=batch.seed,
        functionals=functionals, names=names, covariance=np.cov(matrix).tolist(),
        extras=extras,
    )


def coupling_residual_variance(batch: FluctuationBatch, k: int) -> float:
    """Empirical variance of u_k minus its driving normalized character term."""
    u = batch.array(f"u{k}")
    eta = batch.array(f"eta{k + 1}")
    return float(np.var(u - eta / math.sqrt(k + 1), ddof=1))


# ---------------------------------------------------------------------------
# character-ratio asymptotics on explicit diagram families

@dataclass
class BianeReport:
    family: str
    rho: tuple
    A: float
    sizes: list
    measured: list
    predicted: list
    residuals: list
    rescaled: list
    ratios: list

    @property
    def bounded(self) -> bool:
        return all(r <= 1.5 for r in self.ratios)

    @property
    def residual_exponent(self) -> float | None:
        """Least-squares slope of log |residual| against log n."""
        pairs = [
            (math.log(n), math.log(abs(r)))
            for n, r in zip(self.sizes, self.residuals)
            if r != 0
        ]
        if len(pairs) < 2:
            return None
        xs = np.array([p[0] for p in pairs])
        ys = np.array([p[1] for p in pairs])
        return float(np.polyfit(xs, ys, 1)[0])

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": {"kind": "biane", "family": self.family,
                           "rho": list(self.rho), "A": self.A},
                "sizes": self.sizes,
                "measured": self.measured,
                "predicted": self.predicted,
                "residuals": self.residuals,
                "rescaled_residuals": self.rescaled,
                "consecutive_ratios": self.ratios,
                "residual_exponent": self.residual_exponent,
                "bounded": self.bounded,
            },
            sort_keys=True,
        )


def staircase_family(steps=(9, 19, 39)) -> list[YoungDiagram]:
    """Even staircases (2k, 2k-2, ..., 2); all lie in Y(3)."""
    return [YoungDiagram(tuple(range(2 * k, 0, -2))) for k in steps]


def biane_check(family, rho, A: float = 3.0, family_name: str = "staircase") -> BianeReport:
    """Compare exact character ratios with their free-cumulant prediction.

    The prediction for class rho (padded by fixed points) on a diagram of
    size n is n^(-(|rho|-len)/2) times the product of free cumulants of the
    rescaled profile; the residual is rescaled by n^((|rho|-len)/2 + 1), the
    order at which it stays bounded on families inside Y(A).
    """
    rho = sort_partition(rho)
    r, ell = sum(rho), len(rho)
    sizes, measured, predicted, residuals, rescaled = [], [], [], [], []
    for lam in family:
        n = lam.n
        sqrt_n = math.sqrt(n)
        if lam.rows and (lam.rows[0] > A * sqrt_n or len(lam.rows) > A * sqrt_n):
            raise ValueError(f"family member {lam.rows} leaves Y({A})")
        if n < r:
            raise ValueError("family member smaller than the class")
        ratio = observables.eval_psharp(rho, lam) / _falling(n, r)
        cumulants = observables.free_cumulants(lam, max(rho) + 1)
        pred = float(n) ** (-(r - ell) / 2)
        for part, m in multiplicities(rho).items():
            scaled = float(cumulants[part + 1 - 2]) / float(n) ** ((part + 1) / 2)
            pred *= scaled**m
        res = float(ratio) - pred
        sizes.append(n)
        measured.append(float(ratio))
        predicted.append(pred)
        residuals.append(res)
        rescaled.append(abs(res) * float(n) ** ((r - ell) / 2 + 1))
    ratios = [
        rescaled[i + 1] / rescaled[i] if rescaled[i] > 0 else 0.0
        for i in range(len(rescaled) - 1)
    ]
    return BianeReport(
        family=family_name, rho=rho, A=A, sizes=sizes, measured=measured,
        predicted=predicted, residuals=residuals, rescaled=rescaled, ratios=ratios,
    )


def _falling(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n - i
    return out


# ---------------------------------------------------------------------------
# reference Gaussian fields (finite truncations, for plot overlays)

def gaussian_reference(kmax: int, grid, seed: int, count: int = 1) -> dict:
    """Finite truncations of the two fluctuation fields on a grid.

    These are truncated random series, not the limiting generalized processes;
    the profile field uses sin(k theta)/(pi sqrt(k)) with x = 2 cos(theta),
    the measure field uses sqrt(k-1) cos(k theta) / (2 pi sin(theta)).
    """
    if kmax > 200:
        raise ValueError("truncation order capped at 200")
    grid = np.asarray(grid, dtype=float)
    rng = np.random.Generator(np.random.Philox(seed))
    xi = rng.standard_normal(size=(count, kmax + 1))  # xi[:, k] drives index k
    inside = np.abs(grid) < 2.0
    theta = np.arccos(np.clip(grid, -2.0, 2.0) / 2.0)
    delta = np.zeros((count, len(grid)))
    delta_hat = np.zeros((count, len(grid)))
    sin_theta = np.sin(theta)
    for k in range(2, kmax + 1):
        delta[:, inside] += (
            np.outer(xi[:, k], np.sin(k * theta[inside])) / (math.pi * math.sqrt(k))
        )
    for k in range(3, kmax + 1):
        delta_hat[:, inside] += np.outer(
            math.sqrt(k - 1) * xi[:, k - 1], np.cos(k * theta[inside])
        ) / (2.0 * math.pi * sin_theta[inside])
    return {"grid": grid, "delta": delta, "delta_hat": delta_hat, "seed": seed}
