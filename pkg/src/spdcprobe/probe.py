"""Polarization probe: state preparation, phase-mask evolution, trace distance.

Basis ordering throughout is ``{HH, HV, VH, VV}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDenominator, OutOfRange
from .linalg import DensityMatrix, trace_distance
from .spdc import JointDistribution

HH, VV = 0, 3


@dataclass(frozen=True)
class PolarizationPrep:
    alpha: float = math.pi / 4
    gamma: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= math.pi / 2):
            raise OutOfRange(f"alpha must lie in [0, pi/2], got {self.alpha!r}")
        if not (0.0 <= self.gamma <= 1.0):
            raise OutOfRange(f"gamma must lie in [0, 1], got {self.gamma!r}")

    @property
    def coherence_scale(self) -> float:
        """``gamma * sin(2 alpha)``, the initial HH-VV coherence times two."""
        return self.gamma * math.sin(2.0 * self.alpha)


@dataclass(frozen=True)
class EvolutionSpec:
    beta_values: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.beta_values)
        object.__setattr__(self, "beta_values", b)
        if not b:
            raise ValueError("beta_values must be nonempty")
        if b[0] != 0.0:
            raise ValueError("beta_values must start at 0")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("beta_values must be strictly ascending")

    @classmethod
    def linear(cls, beta_max: float, n: int = 401) -> "EvolutionSpec":
        if n == 1:
            return cls((0.0,))
        return cls(tuple(np.linspace(0.0, beta_max, n)))

    @classmethod
    def default_for(cls, *jds: JointDistribution, n: int = 401) -> "EvolutionSpec":
        """Linear grid up to six inverse widths of the narrowest delta marginal."""
        sigma = min(jd.delta_std for jd in jds)
        return cls.linear(6.0 / sigma, n)


def _state(alpha: float, coherence: float) -> DensityMatrix:
    m = np.zeros((4, 4), dtype=complex)
    m[HH, HH] = math.cos(alpha) ** 2
    m[VV, VV] = math.sin(alpha) ** 2
    m[HH, VV] = m[VV, HH] = coherence
    return DensityMatrix(m)


def prepare_polarization(prep: PolarizationPrep) -> DensityMatrix:
    """``gamma |psi><psi| + (1 - gamma) rho_m`` with ``psi = cos a HH + sin a VV``."""
    # gamma cos(a) sin(a), written as in the evolved state so beta = 0 matches bitwise
    return _state(prep.alpha, 0.5 * prep.coherence_scale)


def epsilon(beta, prep: PolarizationPrep, jd: JointDistribution, check_imag: bool = False):
    """HH-VV coherence amplitude (times two) after the linear phase ``beta``.

    ``jd`` may be a JointDistribution or a bare DeltaMarginal; only the
    delta marginal enters. Accepts scalar or array ``beta``. With ``check_imag`` the sine transform
    of the delta marginal is evaluated too and required to vanish.
    """
    b = np.asarray(beta, dtype=float)
    phase = np.multiply.outer(b, jd.delta)
    w = jd.q_delta * jd.cell
    re = np.cos(phase) @ w
    if check_imag:
        im = np.sin(phase) @ w
        worst = float(np.max(np.abs(im))) if np.size(im) else 0.0
        if worst >= 1e-10:
            raise ArithmeticError(f"imaginary part of epsilon {worst:.2e} is not negligible")
    # beta = 0 is the normalization of q_delta; pin it exactly
    out = np.where(b == 0.0, prep.coherence_scale, prep.coherence_scale * re)
    return float(out) if out.ndim == 0 else out


def evolved_state(beta: float, prep: PolarizationPrep, jd: JointDistribution) -> DensityMatrix:
    eps = prep.coherence_scale if beta == 0 else epsilon(beta, prep, jd)
    return _state(prep.alpha, 0.5 * eps)


def coincidence_probability(rho, phi_s: float, phi_i: float) -> float:
    """Probability of a coincidence behind polarizers at ``phi_s`` and ``phi_i``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    a = np.array([math.cos(phi_s), math.sin(phi_s)])
    b = np.array([math.cos(phi_i), math.sin(phi_i)])
    v = np.kron(a, b)
    return float(np.real(v @ m @ v))


def visibility(rho) -> float:
    """Contrast between (45, 45) and (45, -45) degree polarizer settings.

    Returned as an absolute value so that it matches ``|epsilon|`` also when
    the coherence has turned negative.
    """
    q = math.pi / 4
    p_par = coincidence_probability(rho, q, q)
    p_cross = coincidence_probability(rho, q, -q)
    if p_par < 1e-15 and p_cross < 1e-15:
        raise DegenerateDenominator("both coincidence probabilities vanish")
    return abs(p_par - p_cross) / (p_par + p_cross)


def trace_distance_closed(beta, prep1, jd1, prep2, jd2):
    e1 = epsilon(beta, prep1, jd1)
    e2 = epsilon(beta, prep2, jd2)
    dc = math.cos(prep1.alpha) ** 2 - math.cos(prep2.alpha) ** 2
    return np.sqrt(dc * dc + 0.25 * (np.asarray(e1) - e2) ** 2)


@dataclass(frozen=True, eq=False)
class TraceDistanceCurve:
    beta: np.ndarray
    eps1: np.ndarray
    eps2: np.ndarray
    d_closed: np.ndarray
    d_eig: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.beta)

    def records(self):
        for row in zip(self.beta, self.eps1, self.eps2, self.d_closed, self.d_eig):
            yield tuple(float(x) for x in row)


def compute_curve(
    spec: EvolutionSpec,
    prep1: PolarizationPrep,
    jd1: JointDistribution,
    prep2: PolarizationPrep,
    jd2: JointDistribution,
    meta: dict | None = None,
) -> TraceDistanceCurve:
    """Trace distance along ``spec`` by the closed form and by eigenvalues."""
    beta = np.asarray(spec.beta_values)
    e1 = epsilon(beta, prep1, jd1)
    e2 = epsilon(beta, prep2, jd2)
    dc = math.cos(prep1.alpha) ** 2 - math.cos(prep2.alpha) ** 2
    d_closed = np.sqrt(dc * dc + 0.25 * (e1 - e2) ** 2)
    d_eig = np.array(
        [
            trace_distance(_state(prep1.alpha, 0.5 * a), _state(prep2.alpha, 0.5 * b))
            for a, b in zip(e1, e2)
        ]
    )
    for arr in (beta, e1, e2, d_closed, d_eig):
        arr.setflags(write=False)
    return TraceDistanceCurve(beta, e1, e2, d_closed, d_eig, dict(meta or {}))
