"""Gaussian-state toolbox for continuous-variable entanglement measures.

All routines use the quadrature ordering ``(x_1, p_1, x_2, p_2, ...)`` and
the convention in which the vacuum covariance matrix is ``I/2`` (so the
uncertainty bound reads ``V + (i/2) Omega >= 0``).

The measures provided are the logarithmic negativity for 1|1 and 1|2 mode
partitions, its square (the continuous-variable tangle), and the residual
tangle that quantifies genuinely tripartite entanglement through the
monogamy decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidInputError, InvalidStateError

__all__ = [
    "CovarianceMatrix",
    "Partition",
    "PhysicalityReport",
    "symplectic_form",
    "symplectic_eigenvalues",
    "partial_transpose",
    "log_negativity",
    "contangle",
    "residual_contangle",
    "min_residual_contangle",
    "wigner_single_mode",
    "check_physicality",
]

# Residuals in [-CLAMP_TOL, 0) are treated as floating-point zeros.
CLAMP_TOL: float = 1e-8

# Uncertainty-relation slack accepted by check_physicality.
PHYSICALITY_TOL: float = 1e-9

_SYMMETRY_RTOL: float = 1e-12


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Validated covariance matrix of an n-mode Gaussian state.

    Parameters
    ----------
    data:
        Real square array of shape ``(2n, 2n)`` in interleaved quadrature
        ordering. It must be finite and symmetric to within a relative
        tolerance of 1e-12; violating either raises ``InvalidInputError``.
        Physicality (the uncertainty bound) is *not* enforced here because
        partial transposition legitimately produces unphysical matrices.
    """

    data: NDArray[np.float64]

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(
                f"covariance matrix must be square, got shape {arr.shape}"
            )
        if arr.shape[0] % 2 != 0 or arr.shape[0] == 0:
            raise InvalidInputError(
                f"covariance matrix dimension must be a positive even number, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("covariance matrix contains non-finite entries")
        scale = max(1.0, float(np.linalg.norm(arr)))
        if float(np.linalg.norm(arr - arr.T)) > _SYMMETRY_RTOL * scale:
            raise InvalidInputError(
                "covariance matrix is not symmetric to within relative tolerance 1e-12"
            )
        object.__setattr__(self, "data", arr)

    @property
    def n_modes(self) -> int:
        return self.data.shape[0] // 2

    def mode_block(self, i: int, j: int) -> NDArray[np.float64]:
        """Return the 2x2 block coupling modes ``i`` and ``j`` (copy)."""
        if not (0 <= i < self.n_modes and 0 <= j < self.n_modes):
            raise InvalidInputError(f"mode indices ({i}, {j}) out of range")
        return self.data[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].copy()

    def restricted(self, modes: Sequence[int]) -> "CovarianceMatrix":
        """Reduced covariance matrix of the given modes, in the given order."""
        idx: list[int] = []
        for m in modes:
            if not 0 <= m < self.n_modes:
                raise InvalidInputError(f"mode index {m} out of range")
            idx.extend((2 * m, 2 * m + 1))
        return CovarianceMatrix(self.data[np.ix_(idx, idx)])


@dataclass(frozen=True)
class Partition:
    """Bipartition of a set of modes into two disjoint, non-empty parties."""

    party_a: frozenset[int] = field()
    party_b: frozenset[int] = field()

    def __init__(self, party_a: Iterable[int], party_b: Iterable[int]) -> None:
        a = frozenset(int(m) for m in party_a)
        b = frozenset(int(m) for m in party_b)
        if not a or not b:
            raise InvalidInputError("both parties of a partition must be non-empty")
        if a & b:
            raise InvalidInputError(f"parties overlap on modes {sorted(a & b)}")
        if any(m < 0 for m in a | b):
            raise InvalidInputError("mode indices must be non-negative")
        object.__setattr__(self, "party_a", a)
        object.__setattr__(self, "party_b", b)

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(sorted(self.party_a | self.party_b))


@dataclass(frozen=True)
class PhysicalityReport:
    """Outcome of the uncertainty-relation check.

    ``min_eigenvalue`` is the smallest eigenvalue of the Hermitian matrix
    ``V + (i/2) Omega``; the state is physical when it is >= -1e-9.
    """

    is_physical: bool
    min_eigenvalue: float


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Symplectic form Omega for ``n_modes`` modes in interleaved ordering.

    Block diagonal with ``[[0, 1], [-1, 0]]`` per mode, shape ``(2n, 2n)``.
    """
    if n_modes < 1:
        raise InvalidInputError(f"n_modes must be >= 1, got {n_modes}")
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def symplectic_eigenvalues(v: CovarianceMatrix) -> NDArray[np.float64]:
    """Symplectic spectrum of a positive definite covariance matrix.

    Returns the ``n`` symplectic eigenvalues sorted ascending.  They are
    the moduli of the eigenvalues of ``i Omega V``, which occur in +/-
    pairs; each pair is reported once.

    Raises
    ------
    InvalidInputError
        If ``v`` is not positive definite.
    """
    arr = v.data
    if float(np.linalg.eigvalsh(arr)[0]) <= 0.0:
        raise InvalidInputError("symplectic spectrum requires a positive definite matrix")
    omega = symplectic_form(v.n_modes)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * omega @ arr)))
    # Adjacent entries belong to one +/- pair; average out rounding noise.
    return moduli.reshape(v.n_modes, 2).mean(axis=1)


def partial_transpose(v: CovarianceMatrix, party: Iterable[int]) -> CovarianceMatrix:
    """Covariance matrix after partial transposition of the given modes.

    Transposition flips the sign of the momentum quadrature of every mode
    in ``party``: ``V -> P V P`` with ``P = diag(..., 1, -1, ...)``.  The
    result may violate the uncertainty bound; that violation is exactly
    what signals entanglement.
    """
    modes = sorted({int(m) for m in party})
    if not modes:
        raise InvalidInputError("party must contain at least one mode")
    if modes[0] < 0 or modes[-1] >= v.n_modes:
        raise InvalidInputError(f"party modes {modes} out of range for {v.n_modes} modes")
    signs = np.ones(2 * v.n_modes)
    for m in modes:
        signs[2 * m + 1] = -1.0
    p = np.diag(signs)
    return CovarianceMatrix(p @ v.data @ p)


def _validated_physical(v: CovarianceMatrix) -> None:
    report = check_physicality(v)
    if not report.is_physical:
        raise InvalidStateError(
            "covariance matrix violates the uncertainty bound "
            f"(min eigenvalue of V + (i/2) Omega is {report.min_eigenvalue:.3e})"
        )


def log_negativity(v: CovarianceMatrix, partition: Partition) -> float:
    """Logarithmic negativity across a 1|1 or 1|2 mode bipartition.

    The state is restricted to the partition's modes, party A is partially
    transposed, and the measure is ``max(0, -ln(2 nu))`` with ``nu`` the
    smallest symplectic eigenvalue of the transposed matrix.

    Raises
    ------
    InvalidStateError
        If ``v`` is unphysical.
    InvalidInputError
        If the partition does not cover exactly 2 or 3 modes with at least
        one party being a single mode.
    """
    modes = partition.modes
    if modes[-1] >= v.n_modes:
        raise InvalidInputError(f"partition modes {modes} out of range")
    if len(modes) not in (2, 3):
        raise InvalidInputError("partition must cover 2 or 3 modes in total")
    if min(len(partition.party_a), len(partition.party_b)) != 1:
        raise InvalidInputError("partition must be 1|1 or 1|2")
    _validated_physical(v)

    sub = v.restricted(modes)
    local_a = [modes.index(m) for m in partition.party_a]
    nu_min = float(symplectic_eigenvalues(partial_transpose(sub, local_a))[0])
    if nu_min <= 0.0:
        raise InvalidStateError("partial transpose produced a non-positive spectrum")
    return max(0.0, -float(np.log(2.0 * nu_min)))


def contangle(v: CovarianceMatrix, partition: Partition) -> float:
    """Squared logarithmic negativity, the measure entering monogamy sums."""
    return log_negativity(v, partition) ** 2


def residual_contangle(v: CovarianceMatrix, focus_mode: int, clamp: bool = False) -> float:
    """Residual tangle of a three-mode state with respect to ``focus_mode``.

    Computes ``C(i|jk) - C(i|j) - C(i|k)`` where ``C`` is the squared
    logarithmic negativity and ``i`` is the focus mode.  Monogamy requires
    the result to be non-negative; tiny negative values of magnitude below
    1e-8 are rounding noise and are clamped to zero when ``clamp=True``.
    """
    if v.n_modes != 3:
        raise InvalidInputError(f"residual tangle requires exactly 3 modes, got {v.n_modes}")
    if focus_mode not in (0, 1, 2):
        raise InvalidInputError(f"focus_mode must be 0, 1 or 2, got {focus_mode}")
    others = [m for m in range(3) if m != focus_mode]
    total = contangle(v, Partition({focus_mode}, set(others)))
    split = sum(contangle(v, Partition({focus_mode}, {m})) for m in others)
    residual = total - split
    if clamp and -CLAMP_TOL <= residual < 0.0:
        return 0.0
    return residual


def min_residual_contangle(v: CovarianceMatrix) -> float:
    """Minimum of the residual tangle over the three focus choices, floored at 0.

    This is the conservative witness of genuinely tripartite entanglement:
    it is positive only if every focus decomposition leaves a surplus.
    """
    smallest = min(residual_contangle(v, focus) for focus in range(3))
    return max(0.0, smallest)


def wigner_single_mode(
    v_sub: NDArray[np.float64], grid: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Wigner function of a zero-mean single-mode Gaussian state.

    Parameters
    ----------
    v_sub:
        2x2 covariance matrix of the mode (symmetric positive definite).
    grid:
        Array of shape ``(N, 2)`` of phase-space points ``(x, p)``.

    Returns
    -------
    Array of ``N`` Wigner values
    ``W(u) = exp(-u^T V^{-1} u / 2) / (2 pi sqrt(det V))``.
    """
    m = np.asarray(v_sub, dtype=np.float64)
    if m.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 covariance block, got shape {m.shape}")
    if not np.all(np.isfinite(m)) or abs(m[0, 1] - m[1, 0]) > _SYMMETRY_RTOL * max(
        1.0, float(np.linalg.norm(m))
    ):
        raise InvalidInputError("covariance block must be finite and symmetric")
    det = float(np.linalg.det(m))
    if det <= 0.0 or m[0, 0] <= 0.0:
        raise InvalidStateError(f"covariance block is singular or indefinite (det={det:.3e})")
    pts = np.asarray(grid, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidInputError(f"grid must have shape (N, 2), got {pts.shape}")
    inv = np.linalg.inv(m)
    quad = np.einsum("ni,ij,nj->n", pts, inv, pts)
    return np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(det))


def check_physicality(v: CovarianceMatrix) -> PhysicalityReport:
    """Check the bosonic uncertainty bound ``V + (i/2) Omega >= 0``.

    A small negative tolerance of 1e-9 absorbs rounding in eigensolves.
    """
    omega = symplectic_form(v.n_modes)
    herm = v.data.astype(np.complex128) + 0.5j * omega
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    return PhysicalityReport(is_physical=min_eig >= -PHYSICALITY_TOL, min_eigenvalue=min_eig)
