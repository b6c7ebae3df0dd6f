"""Angular (environment) state of the down-converted photon pair.

Internally everything is SI: metres, radians, rad/s. Configuration objects
carry explicit units in their field names and expose SI properties.

The joint angular distribution factorizes in the rotated coordinates
``u = theta_s + theta_i`` and ``delta = theta_s - theta_i``::

    P(u, delta) ~ Sinc^2(a u) * G(delta)

with ``G`` the pump transverse spectrum integrated over the signal frequency
window. Frequency integrals use Gauss-Legendre quadrature over the box
window ``[-Omega, Omega]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import DegenerateVariance, GridTooCoarse, OutOfRange, WindowTooNarrow

MIN_N_THETA = 65
SUPPORT_TOL = 1e-6
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PhysicalConfig:
    pump_wavelength_nm: float = 405.0
    theta0_deg: float = 3.0
    crystal_length_mm: float = 1.0
    pump_dk_fwhm_inv_mm: float = 18.0
    spectral_width_nm: float = 10.0
    signal_center_wavelength_nm: float = 810.0

    def __post_init__(self):
        for name in (
            "pump_wavelength_nm",
            "theta0_deg",
            "crystal_length_mm",
            "pump_dk_fwhm_inv_mm",
            "spectral_width_nm",
            "signal_center_wavelength_nm",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise OutOfRange(f"{name} must be positive, got {value!r}")
        if self.spectral_width_nm >= self.signal_center_wavelength_nm:
            raise OutOfRange("spectral_width_nm must be smaller than signal_center_wavelength_nm")

    @property
    def omega_p(self) -> float:
        """Central pump angular frequency [rad/s]."""
        return 2.0 * math.pi * SPEED_OF_LIGHT / (self.pump_wavelength_nm * 1e-9)

    @property
    def theta0(self) -> float:
        return math.radians(self.theta0_deg)

    @property
    def crystal_length(self) -> float:
        return self.crystal_length_mm * 1e-3

    @property
    def pump_dk_fwhm(self) -> float:
        """FWHM of |F(k)|^2 [1/m]."""
        return self.pump_dk_fwhm_inv_mm * 1e3

    @property
    def omega_half_width(self) -> float:
        return wavelength_window_to_freq(
            self.spectral_width_nm * 1e-9, self.signal_center_wavelength_nm * 1e-9
        )

    @property
    def sinc_rate(self) -> float:
        """``a`` in ``Sinc(a u)``: ``omega_p theta0 L / (4 c)`` [1/rad]."""
        return self.omega_p * self.theta0 * self.crystal_length / (4.0 * SPEED_OF_LIGHT)


@dataclass(frozen=True)
class AngularGrid:
    theta_max_mrad: float = 30.0
    n_theta: int = 513
    n_omega: int = 129

    def __post_init__(self):
        if not (math.isfinite(self.theta_max_mrad) and self.theta_max_mrad > 0):
            raise OutOfRange(f"theta_max_mrad must be positive, got {self.theta_max_mrad!r}")
        for name in ("n_theta", "n_omega"):
            n = getattr(self, name)
            if int(n) != n or n < 1 or n % 2 == 0:
                raise OutOfRange(f"{name} must be an odd positive integer, got {n!r}")

    @property
    def theta_max(self) -> float:
        return self.theta_max_mrad * 1e-3

    @property
    def spacing(self) -> float:
        return self.theta_max / ((self.n_theta - 1) // 2) if self.n_theta > 1 else self.theta_max

    @property
    def theta(self) -> np.ndarray:
        half = (self.n_theta - 1) // 2
        return self.spacing * np.arange(-half, half + 1, dtype=float)

    @property
    def delta(self) -> np.ndarray:
        """Difference-angle axis ``theta_s - theta_i`` for all node pairs."""
        m = self.n_theta - 1
        return self.spacing * np.arange(-m, m + 1, dtype=float)

    def refined(self) -> "AngularGrid":
        """Grid with twice the resolution on both axes."""
        return AngularGrid(self.theta_max_mrad, 2 * self.n_theta - 1, 2 * self.n_omega - 1)


def longitudinal_mismatch(theta_s, theta_i, cfg: PhysicalConfig):
    return -(cfg.omega_p * cfg.theta0 / (2.0 * SPEED_OF_LIGHT)) * (np.asarray(theta_s) + theta_i)


def transverse_mismatch(theta_s, theta_i, omega_s, cfg: PhysicalConfig):
    return (cfg.omega_p / (2.0 * SPEED_OF_LIGHT)) * (np.asarray(theta_s) - theta_i) + (
        2.0 * cfg.theta0 * np.asarray(omega_s) / SPEED_OF_LIGHT
    )


def pump_amplitude(k_perp, cfg: PhysicalConfig):
    """Gaussian pump spectrum; ``|F(k)|^2`` has FWHM ``cfg.pump_dk_fwhm``."""
    k = np.asarray(k_perp, dtype=float)
    return np.exp(-(k * k) * (2.0 * _LN2) / cfg.pump_dk_fwhm**2)


def wavelength_window_to_freq(width: float, center: float) -> float:
    """Angular-frequency half-width of a wavelength window (first order)."""
    if not (0 < width < center):
        raise OutOfRange(f"need 0 < width < center, got width={width!r}, center={center!r}")
    return math.pi * SPEED_OF_LIGHT * width / center**2


def _sinc(x):
    return np.sinc(np.asarray(x) / math.pi)


def _symmetric_gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    # exact mirror symmetry keeps G(delta) bit-for-bit even
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


@dataclass(frozen=True, eq=False)
class DeltaMarginal:
    """Density of ``delta = theta_s - theta_i`` on a uniform axis of spacing ``cell``."""

    delta: np.ndarray
    q_delta: np.ndarray
    cell: float

    @cached_property
    def delta_std(self) -> float:
        return float(np.sqrt(np.sum(self.delta**2 * self.q_delta) * self.cell))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Normalized joint angular probability on the ``(theta_s, theta_i)`` grid.

    ``p[i, j]`` is the density at ``(theta[i], theta[j])``; ``q_delta[k]`` the
    density of ``delta[k]``. Both integrate to one with the grid spacing as
    cell size.
    """

    grid: AngularGrid
    theta: np.ndarray
    p: np.ndarray
    delta: np.ndarray
    q_delta: np.ndarray

    @property
    def cell(self) -> float:
        return self.grid.spacing

    @cached_property
    def delta_std(self) -> float:
        return float(np.sqrt(np.sum(self.delta**2 * self.q_delta) * self.cell))

    def marginal(self) -> DeltaMarginal:
        return DeltaMarginal(self.delta, self.q_delta, self.cell)


def delta_marginal(p: np.ndarray, cell: float) -> np.ndarray:
    """Exact discrete marginal of ``p`` along ``delta = theta_s - theta_i``.

    Entry ``k`` corresponds to ``delta = (k - (n - 1)) * cell``.
    """
    n = p.shape[0]
    # np.trace(p, offset=o) sums p[i, i + o], i.e. delta = -o * cell
    return cell * np.array([np.trace(p, offset=-k) for k in range(-(n - 1), n)])


def joint_from_density(grid: AngularGrid, p: np.ndarray) -> JointDistribution:
    """Wrap an unnormalized nonnegative grid density as a JointDistribution."""
    p = np.asarray(p, dtype=float)
    if p.shape != (grid.n_theta, grid.n_theta):
        raise ValueError(f"density shape {p.shape} does not match grid")
    h = grid.spacing
    p = p / (np.sum(p) * h * h)
    p.setflags(write=False)
    q = delta_marginal(p, h)
    q.setflags(write=False)
    return JointDistribution(grid, grid.theta, p, grid.delta, q)


@dataclass(frozen=True, eq=False)
class AngularKernel:
    """Factored angular kernel ``h(theta; theta')``.

    ``h = S(u) S(u') sum_m w_m A_m(delta) A_m(delta') exp(i(phi_m(delta) - phi_m(delta')))``
    with ``S`` the phase-matching Sinc and ``A_m`` the pump spectrum at the
    ``m``-th signal frequency node. ``phase`` only enters off-diagonal
    elements; the diagonal is evaluated without it.
    """

    grid: AngularGrid
    sinc: np.ndarray       # S(u) on (theta_s, theta_i) nodes
    amp: np.ndarray        # A_m(delta_k), shape (2n - 1, n_omega)
    weights: np.ndarray    # frequency quadrature weights [rad/s]
    phase: np.ndarray | None = None

    @cached_property
    def g_delta(self) -> np.ndarray:
        """Frequency-integrated pump overlap on the diagonal, even in delta."""
        n = self.grid.n_theta
        half = (self.amp[n - 1 :] ** 2) @ self.weights
        return np.concatenate([half[:0:-1], half])

    def diagonal(self) -> np.ndarray:
        """``h(theta; theta)`` on the grid, unnormalized."""
        n = self.grid.n_theta
        i, j = np.indices((n, n))
        return self.sinc**2 * self.g_delta[i - j + n - 1]

    def element(self, i: int, j: int, k: int, l: int) -> complex:
        """``h`` between nodes ``(theta_i, theta_j)`` and ``(theta_k, theta_l)``."""
        n = self.grid.n_theta
        d1, d2 = i - j + n - 1, k - l + n - 1
        if (i, j) == (k, l):
            return complex(self.sinc[i, j] ** 2 * self.g_delta[d1])
        f1 = self.amp[d1].astype(complex)
        f2 = self.amp[d2].astype(complex)
        if self.phase is not None:
            f1 = f1 * np.exp(1j * self.phase[d1])
            f2 = f2 * np.exp(1j * self.phase[d2])
        return complex(self.sinc[i, j] * self.sinc[k, l] * np.sum(self.weights * f1 * f2.conj()))

    def purity(self) -> float:
        """``Tr rho^2`` of the normalized kernel, via the delta factorization."""
        n = self.grid.n_theta
        s2 = self.sinc**2
        mass = np.array([np.trace(s2, offset=-k) for k in range(-(n - 1), n)])
        g = self.g_delta
        keep = np.flatnonzero(g > 1e-20 * g.max())
        f = self.amp[keep].astype(complex)
        if self.phase is not None:
            f = f * np.exp(1j * self.phase[keep])
        k_mat = (f * self.weights) @ f.conj().T
        m = mass[keep]
        num = float(np.real(m @ (np.abs(k_mat) ** 2) @ m))
        den = float(np.sum(mass * g))
        return num / den**2


def angular_kernel(
    cfg: PhysicalConfig, grid: AngularGrid, phase_scramble: float = 0.0
) -> AngularKernel:
    """Build the factored kernel without grid-adequacy checks.

    ``phase_scramble`` adds a frequency- and angle-dependent phase
    ``s * (omega/Omega) * (delta/theta_max)`` to the off-diagonal elements
    only: the angular probability distribution is unchanged while the
    angular purity drops.
    """
    n = grid.n_theta
    h = grid.spacing
    half = (n - 1) // 2
    idx = np.arange(n) - half
    # u on nodes from integer index sums keeps S exactly symmetric
    u = h * np.abs(idx[:, None] + idx[None, :]).astype(float)
    sinc = _sinc(cfg.sinc_rate * u)

    x, w = _symmetric_gauss_legendre(grid.n_omega)
    big_omega = cfg.omega_half_width
    omega = big_omega * x
    weights = big_omega * w
    delta = grid.delta
    k_perp = transverse_mismatch(delta[:, None], 0.0, omega[None, :], cfg)
    amp = pump_amplitude(k_perp, cfg)
    phase = None
    if phase_scramble:
        phase = phase_scramble * x[None, :] * (delta[:, None] / grid.theta_max)
    for arr in (sinc, weights, amp) + ((phase,) if phase is not None else ()):
        arr.setflags(write=False)
    return AngularKernel(grid, sinc, amp, weights, phase)


def check_grid(kernel: AngularKernel) -> None:
    """Raise if the grid is too coarse or truncates the delta support."""
    grid = kernel.grid
    if grid.n_theta < MIN_N_THETA:
        raise GridTooCoarse(f"n_theta={grid.n_theta} < {MIN_N_THETA}")
    g = kernel.g_delta
    n = grid.n_theta
    g0 = g[n - 1]
    # delta = theta_max sits at index n - 1 + (n - 1) // 2
    edge = g[n - 1 + (n - 1) // 2]
    if not g0 > 0 or edge > SUPPORT_TOL * g0:
        raise WindowTooNarrow(
            f"G(theta_max)/G(0) = {edge / g0 if g0 > 0 else float('nan'):.2e} exceeds {SUPPORT_TOL:.0e}; "
            "increase theta_max_mrad"
        )


def joint_angular_distribution(
    cfg: PhysicalConfig, grid: AngularGrid, phase_scramble: float = 0.0
) -> JointDistribution:
    kernel = angular_kernel(cfg, grid, phase_scramble)
    check_grid(kernel)
    return joint_from_density(grid, kernel.diagonal())


def angular_purity(cfg: PhysicalConfig, grid: AngularGrid, phase_scramble: float = 0.0) -> float:
    kernel = angular_kernel(cfg, grid, phase_scramble)
    check_grid(kernel)
    return kernel.purity()


def angular_correlation(jd: JointDistribution) -> float:
    """Pearson correlation of ``theta_s`` and ``theta_i`` under ``jd``."""
    cell2 = jd.cell**2
    ts = jd.theta[:, None]
    ti = jd.theta[None, :]
    p = jd.p
    ms = float(np.sum(ts * p) * cell2)
    mi = float(np.sum(ti * p) * cell2)
    vs = float(np.sum((ts - ms) ** 2 * p) * cell2)
    vi = float(np.sum((ti - mi) ** 2 * p) * cell2)
    if vs < 1e-18 or vi < 1e-18:
        raise DegenerateVariance(f"marginal variances {vs:.3e}, {vi:.3e} rad^2 too small")
    cov = float(np.sum((ts - ms) * (ti - mi) * p) * cell2)
    return cov / math.sqrt(vs * vi)
