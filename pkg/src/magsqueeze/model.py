"""Physical model of a driven cavity magnomechanical system with a squeezed magnon mode.

Translates laboratory parameters (frequencies, decay rates, couplings, the
two-magnon drive amplitude and phase, temperature) into the objects the
solver consumes: the 6x6 drift matrix of the linearized quadrature dynamics,
the diagonal diffusion matrix of the input noise, steady-state amplitudes of
the magnon and phonon modes, and validity reports for the linearization.

Quadrature ordering is ``(x_a, p_a, x_m, p_m, q, p)`` for cavity, magnon and
mechanical mode.  All frequencies and rates are angular (rad/s).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.constants as sc
from numpy.typing import NDArray

from .errors import InvalidInputError, ParametricResonanceError

__all__ = [
    "SystemParams",
    "DerivedQuantities",
    "ValidityReport",
    "thermal_occupation",
    "total_spins",
    "rabi_frequency",
    "steady_magnon_amplitude_exact",
    "steady_magnon_amplitude_approx",
    "build_drift",
    "build_diffusion",
    "effective_coupling",
    "derive",
    "validity_report",
]

TWO_PI: float = 2.0 * math.pi

# Maximum iterations for the self-consistent magnon detuning shift.
_SHIFT_MAX_ITER: int = 200
_SHIFT_RTOL: float = 1e-9

# Relative floor below which the drive denominator counts as singular.
_DENOMINATOR_RTOL: float = 1e-6


@dataclass(frozen=True)
class SystemParams:
    """Laboratory parameters of the three-mode system.

    Angular frequencies and rates in rad/s, temperature in kelvin.  The
    magnon detuning can be given either directly (``delta_a``/``delta_m``)
    or through the drive frequency ``omega_0``; exactly one of the two
    forms must be used.  The magnomechanical coupling is either the
    effective ``G_m`` directly or the bare ``g_m`` (combined with a drive
    amplitude so the steady magnon amplitude can be formed).  ``theta`` is
    normalized into [0, 2pi) at construction.
    """

    omega_a: float
    omega_m: float
    omega_b: float
    kappa_a: float
    kappa_m: float
    gamma_b: float
    g_a: float
    upsilon: float
    theta: float
    temperature: float
    delta_a: float | None = None
    delta_m: float | None = None
    omega_0: float | None = None
    G_m: float | None = None
    g_m: float | None = None
    rabi: float | None = None
    h_d: float | None = None
    sphere_diameter: float | None = None
    spin_density: float = 4.22e27
    spin_s: float = 2.5
    gyromagnetic_ratio: float = TWO_PI * 28e9

    def __post_init__(self) -> None:
        for name in ("omega_a", "omega_m", "omega_b"):
            if not getattr(self, name) > 0.0:
                raise InvalidInputError(f"{name} must be positive")
        for name in ("kappa_a", "kappa_m", "gamma_b"):
            if not getattr(self, name) > 0.0:
                raise InvalidInputError(f"{name} must be positive (dissipation required)")
        for name in ("g_a", "upsilon", "temperature"):
            if getattr(self, name) < 0.0:
                raise InvalidInputError(f"{name} must be non-negative")
        if not math.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

        have_deltas = self.delta_a is not None or self.delta_m is not None
        if have_deltas and (self.delta_a is None or self.delta_m is None):
            raise InvalidInputError("delta_a and delta_m must be given together")
        if have_deltas == (self.omega_0 is not None):
            raise InvalidInputError(
                "specify detunings either as (delta_a, delta_m) or as omega_0, not both or neither"
            )
        if self.G_m is None and self.g_m is None:
            raise InvalidInputError("a magnomechanical coupling (G_m or g_m) is required")
        for name in ("G_m", "g_m", "rabi", "h_d", "sphere_diameter"):
            value = getattr(self, name)
            if value is not None and value < 0.0:
                raise InvalidInputError(f"{name} must be non-negative")
        for name in ("spin_density", "spin_s", "gyromagnetic_ratio"):
            if not getattr(self, name) > 0.0:
                raise InvalidInputError(f"{name} must be positive")


@dataclass(frozen=True)
class DerivedQuantities:
    """Quantities derived from :class:`SystemParams` for one operating point.

    ``delta_m`` is the bare magnon detuning and ``delta_m_bar`` the
    effective value entering the drift (they coincide unless the detuning
    is resolved self-consistently from ``omega_0`` with a bare coupling).
    ``m_s``, ``q_s``, ``G_m_effective``, ``omega_rabi`` and ``N_0`` are
    ``None`` when the parameter set does not determine them.
    """

    delta_a: float
    delta_m: float
    delta_m_bar: float
    delta_theta: float
    kappa_theta: float
    delta_theta_plus: float
    delta_theta_minus: float
    kappa_theta_plus: float
    kappa_theta_minus: float
    m_s: complex | None
    q_s: float | None
    G_m_effective: complex | None
    omega_rabi: float | None
    n_a: float
    n_m: float
    n_b: float
    N_0: float | None


@dataclass(frozen=True)
class ValidityReport:
    """Linearization validity checks at one operating point."""

    magnon_amplitude: float
    magnon_occupation: float
    excitation_bound: float
    kerr_coefficient: float
    kerr_drive_ratio: float
    drive_amplitude: float
    low_excitation_ok: bool
    kerr_ok: bool
    stable: bool


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein mean occupation of a mode at angular frequency ``omega``.

    Returns 0 exactly at zero temperature.  Underflows to 0 for
    ``hbar*omega/(k_B T) > 700`` instead of raising.
    """
    if omega <= 0.0:
        raise InvalidInputError(f"omega must be positive, got {omega}")
    if temperature < 0.0:
        raise InvalidInputError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = sc.hbar * omega / (sc.k * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def total_spins(sphere_diameter: float, spin_density: float = 4.22e27) -> float:
    """Total spin count of a sphere: density times (pi/6) d^3."""
    if sphere_diameter <= 0.0:
        raise InvalidInputError(f"sphere_diameter must be positive, got {sphere_diameter}")
    if spin_density <= 0.0:
        raise InvalidInputError(f"spin_density must be positive, got {spin_density}")
    return spin_density * (math.pi / 6.0) * sphere_diameter**3


def rabi_frequency(h_d: float, n_spins: float, gyromagnetic_ratio: float = TWO_PI * 28e9) -> float:
    """Collective drive amplitude (sqrt(5)/4) * gamma * sqrt(N_0) * H_d in rad/s."""
    if h_d < 0.0:
        raise InvalidInputError(f"h_d must be non-negative, got {h_d}")
    if n_spins <= 0.0 or gyromagnetic_ratio <= 0.0:
        raise InvalidInputError("n_spins and gyromagnetic_ratio must be positive")
    return (math.sqrt(5.0) / 4.0) * gyromagnetic_ratio * math.sqrt(n_spins) * h_d


def _bare_detunings(params: SystemParams) -> tuple[float, float]:
    if params.omega_0 is not None:
        return params.omega_a - params.omega_0, params.omega_m - params.omega_0
    assert params.delta_a is not None and params.delta_m is not None
    return params.delta_a, params.delta_m


def _resolve_rabi(params: SystemParams) -> float | None:
    if params.rabi is not None:
        return params.rabi
    if params.h_d is not None and params.sphere_diameter is not None:
        n0 = total_spins(params.sphere_diameter, params.spin_density)
        return rabi_frequency(params.h_d, n0, params.gyromagnetic_ratio)
    return None


def _steady_amplitude(
    omega_rabi: float,
    delta_a: float,
    delta_m_bar: float,
    kappa_a: float,
    kappa_m: float,
    g_a: float,
    upsilon: float,
    theta: float,
) -> complex:
    kappa_minus = (kappa_a - 1j * delta_a) * (kappa_m - 1j * delta_m_bar) + g_a**2
    kappa_plus = (kappa_a + 1j * delta_a) * (kappa_m + 1j * delta_m_bar) + g_a**2
    weight = delta_a**2 + kappa_a**2
    denominator = kappa_minus * kappa_plus - upsilon**2 * weight
    scale = abs(kappa_minus * kappa_plus) + upsilon**2 * weight
    if abs(denominator) <= _DENOMINATOR_RTOL * scale:
        raise ParametricResonanceError(
            "steady amplitude denominator vanishes: the two-magnon drive is at parametric resonance"
        )
    numerator = kappa_minus * (1j * delta_a + kappa_a) + upsilon * weight * np.exp(1j * theta)
    return complex(numerator / denominator * omega_rabi)


def _self_consistent_shift(
    params: SystemParams, omega_rabi: float, delta_a: float, delta_m_bare: float
) -> tuple[float, complex]:
    # Delta_m_bar = Delta_m + g_m * q_s depends on m_s, which depends back
    # on Delta_m_bar; iterate to a fixed point.
    assert params.g_m is not None
    g_m = params.g_m

    def shifted(delta_bar: float) -> tuple[float, complex]:
        m = _steady_amplitude(
            omega_rabi, delta_a, delta_bar,
            params.kappa_a, params.kappa_m, params.g_a, params.upsilon, params.theta,
        )
        return delta_m_bare - g_m**2 * abs(m) ** 2 / params.omega_b, m

    delta_bar = delta_m_bare
    for _ in range(_SHIFT_MAX_ITER):
        updated, m_s = shifted(delta_bar)
        if abs(updated - delta_bar) <= _SHIFT_RTOL * max(1.0, abs(updated)):
            return updated, m_s
        delta_bar = updated

    # Plain iteration cycles once the backaction shift exceeds the magnon
    # linewidth. The residual is positive at the bare detuning and negative
    # far below it, so bracket downward and bisect; of possibly several
    # coexisting branches this selects the one nearest the bare detuning.
    from scipy.optimize import brentq

    def residual(delta_bar: float) -> float:
        return delta_bar - shifted(delta_bar)[0]

    hi = delta_m_bare
    step = max(abs(residual(hi)), params.kappa_m)
    lo = hi - step
    for _ in range(_SHIFT_MAX_ITER):
        if residual(lo) < 0.0:
            break
        step *= 2.0
        lo = hi - step
    else:
        raise ParametricResonanceError(
            "self-consistent magnon detuning has no fixed point below the bare detuning"
        )
    root = float(brentq(residual, lo, hi, xtol=1e-12 * max(1.0, abs(delta_m_bare))))
    updated, m_s = shifted(root)
    return updated, m_s


def derive(params: SystemParams) -> DerivedQuantities:
    """Resolve detunings, steady amplitudes, couplings and occupations."""
    delta_a, delta_m = _bare_detunings(params)
    omega_rabi = _resolve_rabi(params)

    n_0: float | None = None
    if params.sphere_diameter is not None:
        n_0 = total_spins(params.sphere_diameter, params.spin_density)

    m_s: complex | None = None
    if params.omega_0 is not None and params.g_m is not None and omega_rabi is not None:
        delta_m_bar, m_s = _self_consistent_shift(params, omega_rabi, delta_a, delta_m)
    else:
        # Direct detunings are taken as the effective values; no extra shift.
        delta_m_bar = delta_m
        if omega_rabi is not None:
            m_s = _steady_amplitude(
                omega_rabi, delta_a, delta_m_bar,
                params.kappa_a, params.kappa_m, params.g_a, params.upsilon, params.theta,
            )

    q_s: float | None = None
    if m_s is not None and params.g_m is not None:
        q_s = -params.g_m * abs(m_s) ** 2 / params.omega_b

    g_eff: complex | None = None
    if params.G_m is not None:
        g_eff = complex(params.G_m)
    elif m_s is not None:
        g_eff = 1j * math.sqrt(2.0) * params.g_m * m_s

    delta_theta = params.upsilon * math.sin(params.theta)
    kappa_theta = params.upsilon * math.cos(params.theta)
    return DerivedQuantities(
        delta_a=delta_a,
        delta_m=delta_m,
        delta_m_bar=delta_m_bar,
        delta_theta=delta_theta,
        kappa_theta=kappa_theta,
        delta_theta_plus=delta_m_bar + delta_theta,
        delta_theta_minus=delta_m_bar - delta_theta,
        kappa_theta_plus=params.kappa_m + kappa_theta,
        kappa_theta_minus=params.kappa_m - kappa_theta,
        m_s=m_s,
        q_s=q_s,
        G_m_effective=g_eff,
        omega_rabi=omega_rabi,
        n_a=thermal_occupation(params.omega_a, params.temperature),
        n_m=thermal_occupation(params.omega_m, params.temperature),
        n_b=thermal_occupation(params.omega_b, params.temperature),
        N_0=n_0,
    )


def steady_magnon_amplitude_exact(params: SystemParams) -> complex:
    """Steady magnon amplitude from the full three-mode response.

    Requires a drive amplitude (``rabi`` directly, or ``h_d`` with
    ``sphere_diameter``).  Raises ``ParametricResonanceError`` when the
    response denominator is within 1e-6 (relative) of zero.
    """
    derived = derive(params)
    if derived.omega_rabi is None:
        raise InvalidInputError(
            "steady amplitude requires a drive: set rabi, or h_d with sphere_diameter"
        )
    assert derived.m_s is not None
    return derived.m_s


def steady_magnon_amplitude_approx(params: SystemParams) -> complex:
    """Large-detuning approximation of the steady magnon amplitude.

    Valid for detunings well above the linewidths; emits a warning when
    either detuning is below ten linewidths.
    """
    derived = derive(params)
    if derived.omega_rabi is None:
        raise InvalidInputError(
            "steady amplitude requires a drive: set rabi, or h_d with sphere_diameter"
        )
    if derived.delta_a == 0.0:
        raise InvalidInputError("the approximate amplitude requires a nonzero cavity detuning")
    wide = max(params.kappa_a, params.kappa_m)
    if min(abs(derived.delta_a), abs(derived.delta_m_bar)) < 10.0 * wide:
        warnings.warn(
            "detunings are within 10 linewidths; the approximate amplitude may be inaccurate",
            stacklevel=2,
        )
    eta = params.g_a**2 / derived.delta_a - derived.delta_m_bar
    denominator = eta**2 - params.upsilon**2
    if abs(denominator) <= _DENOMINATOR_RTOL * (eta**2 + params.upsilon**2):
        raise ParametricResonanceError(
            "approximate amplitude denominator vanishes: squeezing amplitude at parametric resonance"
        )
    numerator = params.upsilon * np.exp(1j * params.theta) + 1j * eta
    return complex(numerator / denominator * derived.omega_rabi)


def effective_coupling(params: SystemParams) -> complex:
    """Effective magnomechanical coupling.

    With a direct ``G_m`` it is returned unchanged (as a real complex
    number); otherwise it is ``i sqrt(2) g_m m_s``.
    """
    derived = derive(params)
    if derived.G_m_effective is None:
        raise InvalidInputError(
            "effective coupling needs G_m, or g_m with a drive to form the steady amplitude"
        )
    return derived.G_m_effective


def _coupling_magnitude(derived: DerivedQuantities, params: SystemParams) -> float:
    if params.G_m is not None:
        return float(params.G_m)
    if derived.G_m_effective is None:
        raise InvalidInputError(
            "drift matrix needs G_m, or g_m with a drive to form the steady amplitude"
        )
    # Real drift entry: the coupling phase is absorbed into the mechanical
    # quadrature reference, leaving the modulus.
    return abs(derived.G_m_effective)


def build_drift(params: SystemParams) -> NDArray[np.float64]:
    """Drift matrix of the linearized quadrature dynamics.

    Row/column order ``(x_a, p_a, x_m, p_m, q, p)``.  The squeezing drive
    enters the magnon block only: the phase splits the effective magnon
    decay into ``kappa_m +/- upsilon*cos(theta)`` and the detuning into
    ``delta_m_bar +/- upsilon*sin(theta)``.
    """
    d = derive(params)
    g = _coupling_magnitude(d, params)
    return np.array(
        [
            [-params.kappa_a, d.delta_a, 0.0, params.g_a, 0.0, 0.0],
            [-d.delta_a, -params.kappa_a, -params.g_a, 0.0, 0.0, 0.0],
            [0.0, params.g_a, -d.kappa_theta_plus, d.delta_theta_plus, -g, 0.0],
            [-params.g_a, 0.0, -d.delta_theta_minus, -d.kappa_theta_minus, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, params.omega_b],
            [0.0, 0.0, 0.0, g, -params.omega_b, -params.gamma_b],
        ]
    )


def build_diffusion(params: SystemParams) -> NDArray[np.float64]:
    """Diagonal input-noise matrix diag[kappa_a(2n_a+1) x2, kappa_m(2n_m+1) x2, 0, gamma_b(2n_b+1)]."""
    d = derive(params)
    cavity = params.kappa_a * (2.0 * d.n_a + 1.0)
    magnon = params.kappa_m * (2.0 * d.n_m + 1.0)
    phonon = params.gamma_b * (2.0 * d.n_b + 1.0)
    return np.diag([cavity, cavity, magnon, magnon, 0.0, phonon])


def validity_report(params: SystemParams, kerr_coefficient: float) -> ValidityReport:
    """Check the linearization against excitation-number and Kerr bounds.

    Requires the steady amplitude (a drive specification) and the sphere
    diameter for the spin-count bound.  ``stable`` reflects the drift
    matrix spectrum at this operating point.
    """
    if kerr_coefficient < 0.0:
        raise InvalidInputError("kerr_coefficient must be non-negative")
    derived = derive(params)
    if derived.m_s is None or derived.omega_rabi is None:
        raise InvalidInputError(
            "validity checks need the steady amplitude: set rabi, or h_d with sphere_diameter"
        )
    if derived.N_0 is None:
        raise InvalidInputError("validity checks need sphere_diameter for the spin-count bound")

    amplitude = abs(derived.m_s)
    occupation = amplitude**2
    bound = 2.0 * derived.N_0 * params.spin_s
    kerr_shift = kerr_coefficient * amplitude**3
    if derived.omega_rabi > 0.0:
        ratio = kerr_shift / derived.omega_rabi
    else:
        ratio = 0.0 if kerr_shift == 0.0 else math.inf

    from .solver import stability  # local import keeps module layering acyclic

    report = stability(build_drift(params))
    return ValidityReport(
        magnon_amplitude=amplitude,
        magnon_occupation=occupation,
        excitation_bound=bound,
        kerr_coefficient=kerr_coefficient,
        kerr_drive_ratio=ratio,
        drive_amplitude=derived.omega_rabi,
        low_excitation_ok=occupation < 0.01 * bound,
        kerr_ok=ratio < 0.5,
        stable=report.is_stable,
    )
