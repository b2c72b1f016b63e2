"""Stability analysis and steady-state Lyapunov solver for linear quadrature dynamics.

The steady covariance matrix V of a stable linear diffusion
``dV/dt = Gamma V + V Gamma^T + Lambda`` solves
``Gamma V + V Gamma^T = -Lambda``.  The solver uses the Kronecker-vectorized
dense linear system; at 6x6 this is exact and fast, and every solve is
checked against a strict residual bound.  A fourth-order transient
integrator is provided as an independent cross-check of the algebraic
route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidInputError, NoSteadyStateError, NumericalError
from .gaussian import CovarianceMatrix

__all__ = [
    "StabilityReport",
    "stability",
    "solve_lyapunov",
    "evolve_covariance",
]

# is_stable requires max Re(eig) below -STABILITY_MARGIN times the spectral radius.
STABILITY_MARGIN: float = 1e-12

# Relative Frobenius residual accepted from a Lyapunov solve.
RESIDUAL_BOUND: float = 1e-10

_BLOWUP_FACTOR: float = 1e12


@dataclass(frozen=True)
class StabilityReport:
    """Spectrum-based stability verdict for a drift matrix."""

    eigenvalues: NDArray[np.complex128]
    max_real_part: float
    is_stable: bool


def _checked_square(matrix: NDArray[np.float64], name: str) -> NDArray[np.float64]:
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def stability(gamma: NDArray[np.float64]) -> StabilityReport:
    """Classify a drift matrix by its eigenvalue spectrum.

    Stable means every eigenvalue real part sits below a margin of
    -1e-12 times the spectral radius, so marginal cases rounded onto the
    imaginary axis are not misreported as stable.
    """
    arr = _checked_square(gamma, "gamma")
    eigenvalues = np.linalg.eigvals(arr)
    max_real = float(eigenvalues.real.max())
    scale = float(np.abs(eigenvalues).max())
    return StabilityReport(
        eigenvalues=eigenvalues,
        max_real_part=max_real,
        is_stable=max_real < -STABILITY_MARGIN * scale,
    )


def solve_lyapunov(
    gamma: NDArray[np.float64], diffusion: NDArray[np.float64]
) -> CovarianceMatrix:
    """Steady covariance matrix solving Gamma V + V Gamma^T = -Lambda.

    Refuses unstable drift matrices (``NoSteadyStateError``).  The result
    is symmetrized, and the relative residual
    ``|Gamma V + V Gamma^T + Lambda| / |Lambda|`` (Frobenius) must come out
    below 1e-10, otherwise ``NumericalError`` carries the measured value.
    """
    arr_g = _checked_square(gamma, "gamma")
    arr_l = _checked_square(diffusion, "diffusion")
    if arr_l.shape != arr_g.shape:
        raise InvalidInputError(
            f"shape mismatch: gamma {arr_g.shape} vs diffusion {arr_l.shape}"
        )
    report = stability(arr_g)
    if not report.is_stable:
        raise NoSteadyStateError(
            f"drift matrix is not stable (max eigenvalue real part {report.max_real_part:.6e})"
        )

    n = arr_g.shape[0]
    eye = np.eye(n)
    # Row-major vectorization: vec(G V + V G^T) = (G kron I + I kron G) vec(V).
    system = np.kron(arr_g, eye) + np.kron(eye, arr_g)
    try:
        v_flat = np.linalg.solve(system, -arr_l.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Lyapunov system solve failed: {exc}") from exc
    v = v_flat.reshape(n, n)
    v = 0.5 * (v + v.T)

    norm_l = float(np.linalg.norm(arr_l))
    residual = float(np.linalg.norm(arr_g @ v + v @ arr_g.T + arr_l)) / max(norm_l, 1e-300)
    if not np.isfinite(residual) or residual > RESIDUAL_BOUND:
        raise NumericalError(
            f"Lyapunov residual {residual:.3e} exceeds bound {RESIDUAL_BOUND:.0e}",
            residual=residual,
        )
    return CovarianceMatrix(v)


def evolve_covariance(
    gamma: NDArray[np.float64],
    diffusion: NDArray[np.float64],
    v0: CovarianceMatrix,
    t_final: float,
    dt: float,
) -> CovarianceMatrix:
    """Integrate dV/dt = Gamma V + V Gamma^T + Lambda with a fourth-order explicit scheme.

    The final step is shortened to land exactly on ``t_final``.  Norm
    blow-up (non-finite entries or growth past 1e12 times the initial
    scale) raises ``NumericalError``; that is the signature of a step size
    too large for the fastest drift timescale.
    """
    arr_g = _checked_square(gamma, "gamma")
    arr_l = _checked_square(diffusion, "diffusion")
    if arr_l.shape != arr_g.shape or v0.data.shape != arr_g.shape:
        raise InvalidInputError("gamma, diffusion and v0 must share one square shape")
    if dt <= 0.0:
        raise InvalidInputError(f"dt must be positive, got {dt}")
    if t_final < 0.0:
        raise InvalidInputError(f"t_final must be non-negative, got {t_final}")
    if t_final == 0.0:
        return v0

    def flow(v: NDArray[np.float64]) -> NDArray[np.float64]:
        return arr_g @ v + v @ arr_g.T + arr_l

    v = v0.data.copy()
    bound = _BLOWUP_FACTOR * max(1.0, float(np.linalg.norm(v)), float(np.linalg.norm(arr_l)))
    n_steps = int(np.ceil(t_final / dt))
    for step in range(n_steps):
        h = min(dt, t_final - step * dt)
        k1 = flow(v)
        k2 = flow(v + 0.5 * h * k1)
        k3 = flow(v + 0.5 * h * k2)
        k4 = flow(v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = 0.5 * (v + v.T)
        if not np.all(np.isfinite(v)) or float(np.linalg.norm(v)) > bound:
            raise NumericalError(
                f"covariance norm blew up at step {step + 1}; reduce dt below the fastest timescale"
            )
    return CovarianceMatrix(v)
