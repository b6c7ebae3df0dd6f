"""Analytic-oracle self checks run by ``spdcprobe validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .probe import PolarizationPrep, compute_curve, EvolutionSpec, epsilon
from .spdc import (
    AngularGrid,
    DeltaMarginal,
    PhysicalConfig,
    angular_kernel,
    joint_from_density,
    longitudinal_mismatch,
    pump_amplitude,
    transverse_mismatch,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def gaussian_marginal(s: float, cell: float, half_span: float) -> DeltaMarginal:
    m = int(round(half_span / cell))
    delta = cell * np.arange(-m, m + 1, dtype=float)
    q = np.exp(-0.5 * (delta / s) ** 2) / (s * math.sqrt(2 * math.pi))
    return DeltaMarginal(delta, q, cell)


def box_marginal(w: float, n_half: int) -> DeltaMarginal:
    """Uniform density on ``[-w, w]`` with trapezoid end weights."""
    cell = w / n_half
    delta = cell * np.arange(-n_half, n_half + 1, dtype=float)
    q = np.full(delta.shape, 1.0 / (2 * w))
    q[0] = q[-1] = 0.25 / w
    return DeltaMarginal(delta, q, cell)


def gauss_box_marginal(s: float, w: float, cell: float, half_span: float) -> DeltaMarginal:
    m = int(round(half_span / cell))
    delta = cell * np.arange(-m, m + 1, dtype=float)
    q = (ndtr((delta + w) / s) - ndtr((delta - w) / s)) / (2 * w)
    return DeltaMarginal(delta, q, cell)


def _check_fourier(prep: PolarizationPrep, tol: float = 1e-6) -> list[Check]:
    s, w = 1.0e-3, 2.0e-3
    beta = np.linspace(0.0, 8.0 / s, 201)
    scale = prep.coherence_scale
    cases = [
        ("gaussian-fourier", gaussian_marginal(s, s / 40, 12 * s), np.exp(-0.5 * (beta * s) ** 2)),
        ("box-fourier", box_marginal(w, 20000), np.sinc(beta * w / math.pi)),
        (
            "gauss-box-fourier",
            gauss_box_marginal(s, w, s / 40, w + 12 * s),
            np.exp(-0.5 * (beta * s) ** 2) * np.sinc(beta * w / math.pi),
        ),
    ]
    out = []
    for name, marginal, shape in cases:
        err = float(np.max(np.abs(epsilon(beta, prep, marginal, check_imag=True) - scale * shape)))
        out.append(Check(name, err < tol, f"max error {err:.2e} (tol {tol:.0e})"))
    return out


def _check_closed_vs_eig(tol: float = 1e-8) -> Check:
    rng = np.random.default_rng(20130101)
    worst = 0.0
    for _ in range(20):
        p1 = PolarizationPrep(rng.uniform(0, math.pi / 2), rng.uniform(0, 1))
        p2 = PolarizationPrep(rng.uniform(0, math.pi / 2), rng.uniform(0, 1))
        m1 = gaussian_marginal(rng.uniform(0.5e-3, 2e-3), 5e-5, 0.02)
        m2 = gauss_box_marginal(rng.uniform(0.5e-3, 2e-3), rng.uniform(0.2e-3, 3e-3), 5e-5, 0.03)
        curve = compute_curve(EvolutionSpec.linear(8000.0, 41), p1, m1, p2, m2)
        worst = max(worst, float(np.max(np.abs(curve.d_closed - curve.d_eig))))
    return Check("closed-vs-eigen", worst < tol, f"max |D_closed - D_eig| {worst:.2e} (tol {tol:.0e})")


def _check_separability(tol: float = 1e-9) -> Check:
    """Factored kernel diagonal against direct integration over frequency."""
    cfg = PhysicalConfig(spectral_width_nm=20.0)
    grid = AngularGrid(theta_max_mrad=8.0, n_theta=9, n_omega=65)
    jd = joint_from_density(grid, angular_kernel(cfg, grid).diagonal())
    big_omega = cfg.omega_half_width
    th = grid.theta
    direct = np.empty((grid.n_theta, grid.n_theta))
    for i, ts in enumerate(th):
        for j, ti in enumerate(th):
            dkl = longitudinal_mismatch(ts, ti, cfg)
            sinc2 = np.sinc(dkl * cfg.crystal_length / 2 / math.pi) ** 2
            g, _ = integrate.quad(
                lambda om: pump_amplitude(transverse_mismatch(ts, ti, om, cfg), cfg) ** 2,
                -big_omega,
                big_omega,
                epsabs=0.0,
                epsrel=1e-13,
                limit=200,
            )
            direct[i, j] = sinc2 * g
    direct /= direct.sum() * grid.spacing**2
    err = float(np.max(np.abs(jd.p - direct)) / np.max(direct))
    return Check("separability", err < tol, f"max relative deviation {err:.2e} (tol {tol:.0e})")


def run_checks() -> list[Check]:
    prep = PolarizationPrep(math.pi / 4, 0.96)
    return [*_check_fourier(prep), _check_closed_vs_eig(), _check_separability()]
