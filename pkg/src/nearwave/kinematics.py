"""Relativistic kinematics of evanescent-mode absorption by a massive probe.

A probe moving along the screen with wavenumber K0 (units of k0) can absorb
exactly one mode of the evanescent set: energy and momentum conservation
together with the mass shells of probe and photon single out

    kx = sign(K0) * sqrt(1 + K_mu^2 / K0^2),

always beyond the evanescence threshold, and hand the probe the mode's
imaginary transverse wavenumber i*K_mu/|K0|.  The probe itself is then in
an evanescent state; once it leaves the screen its momentum magnitude
relaxes to the real free-particle value, which is independent of kx.

All quantities are dimensionless: wavenumbers in k0, frequencies in c*k0,
with the input photon frequency equal to 1.  ``K_mu`` is the probe's
Compton wavenumber m*c/hbar in units of k0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateInputError


@dataclass(frozen=True)
class ProbeState:
    """Probe 4-momentum (omega; Kx, Kz) with Kz allowed complex."""

    omega: float
    Kx: float
    Kz: complex
    K_mu: float

    @classmethod
    def initial(cls, K0: float, K_mu: float) -> "ProbeState":
        """On-shell input state moving along the screen."""
        return cls(omega=math.hypot(K0, K_mu), Kx=K0, Kz=0.0, K_mu=K_mu)

    def on_shell_residual(self) -> float:
        """|omega^2 - Kx^2 - Kz^2 - K_mu^2| with the complex square."""
        return abs(self.omega**2 - self.Kx**2 - self.Kz * self.Kz - self.K_mu**2)


@dataclass(frozen=True)
class TransferResult:
    """Outcome of one absorption event: selected mode, transfer, exit momentum.

    ``ff_direction`` is caller-supplied metadata for the far-field exit
    direction; the geometry of the screen edge determines it and no formula
    is imposed here.
    """

    kx_selected: float
    kz_transferred: complex
    final_state: ProbeState
    ff_momentum_magnitude: float
    ff_direction: tuple[float, float, float] | None = field(default=None)


def _require_moving(K0: float) -> None:
    if K0 == 0.0:
        raise DegenerateInputError(
            "probe at rest: every mode satisfies the selection rule only in the "
            "zero-frequency limit, outside this fixed-frequency model"
        )


def absorbable_kx(K0: float, K_mu: float) -> float:
    """Mode selected by a probe of wavenumber K0; same sign as K0, |kx| > 1."""
    _require_moving(K0)
    return math.copysign(math.sqrt(1.0 + (K_mu / K0) ** 2), K0)


def transferred_kz(K0: float, K_mu: float) -> complex:
    """Imaginary transverse wavenumber handed to the probe: i*K_mu/|K0|."""
    _require_moving(K0)
    return complex(0.0, K_mu / abs(K0))


def post_absorption_state(K0: float, K_mu: float) -> ProbeState:
    """Probe state immediately after absorbing the selected mode."""
    kx = absorbable_kx(K0, K_mu)
    return ProbeState(
        omega=math.hypot(K0, K_mu) + 1.0,
        Kx=K0 + kx,
        Kz=transferred_kz(K0, K_mu),
        K_mu=K_mu,
    )


def grating_match(m: int, k_d: float, K_mu: float) -> float | None:
    """Probe wavenumber that absorbs grating order m, or None.

    Only evanescent orders (m^2 k_d^2 > 1) can match; on or below the
    threshold no mode is suitable and None is returned.
    """
    disc = (m * k_d) ** 2 - 1.0
    if disc <= 0.0:
        return None
    return K_mu / math.sqrt(disc)


def ff_exit_momentum(K0: float, K_mu: float) -> float:
    """Free momentum magnitude after the probe leaves the screen.

    Computed two algebraically identical ways, from the post-absorption
    energy and mass shell and from the expanded form in K0.  The shell
    form subtracts (s+1)^2 - K_mu^2, so its round-off grows with that
    cancellation scale; the agreement gate accounts for it, and a
    disagreement beyond it would indicate a broken invariant and raises.
    The stable expanded form is returned.
    """
    _require_moving(K0)
    s = math.hypot(K0, K_mu)
    from_shell = math.sqrt((s + 1.0) ** 2 - K_mu * K_mu)
    expanded = math.sqrt(K0 * K0 + 2.0 * s + 1.0)
    tol = 1e-12 * max(expanded, (s + 1.0) ** 2 / expanded)
    if abs(from_shell - expanded) > tol:
        raise ArithmeticError(
            f"exit-momentum forms disagree: {from_shell!r} vs {expanded!r}"
        )
    return expanded


def selection_residual(K0: float, K_mu: float, kx: float) -> float:
    """Residual of the conservation/mass-shell system at a candidate kx.

    Evaluates (sqrt(K0^2+K_mu^2)+1)^2 - (K0+kx)^2 - (1-kx^2) - K_mu^2 with
    exact summation of the expanded terms.  The magnitude is meaningful
    relative to the largest term, which grows like kx^2; compare against
    tol * max(1, kx^2, K0^2 + K_mu^2).
    """
    s = math.hypot(K0, K_mu)
    return math.fsum(
        (
            (s + 1.0) ** 2,
            -((K0 + kx) ** 2),
            -(1.0 - kx * kx),
            -(K_mu * K_mu),
        )
    )


def evanescence_transfer(K0: float, K_mu: float) -> TransferResult:
    """Full absorption record for one probe input state."""
    kx = absorbable_kx(K0, K_mu)
    return TransferResult(
        kx_selected=kx,
        kz_transferred=transferred_kz(K0, K_mu),
        final_state=post_absorption_state(K0, K_mu),
        ff_momentum_magnitude=ff_exit_momentum(K0, K_mu),
    )


def consistency_checks(n_cases: int = 1000) -> list[tuple[str, bool, str]]:
    """Identity sweeps over a log-uniform parameter box; CLI check mode."""
    import numpy as np

    rng = np.random.default_rng(20260808)
    K0 = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), n_cases))
    K0 *= rng.choice([-1.0, 1.0], n_cases)
    K_mu = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), n_cases))

    worst_sel = worst_shell = worst_disp = 0.0
    forward_ok = evanescent_ok = True
    for k0_, kmu_ in zip(K0, K_mu):
        kx = absorbable_kx(k0_, kmu_)
        scale = max(1.0, kx * kx, k0_ * k0_ + kmu_ * kmu_)
        worst_sel = max(worst_sel, abs(selection_residual(k0_, kmu_, kx)) / scale)
        state = post_absorption_state(k0_, kmu_)
        worst_shell = max(worst_shell, state.on_shell_residual() / scale)
        kz = transferred_kz(k0_, kmu_)
        worst_disp = max(worst_disp, abs(kz * kz + kx * kx - 1.0) / max(1.0, kx * kx))
        evanescent_ok &= abs(kx) > 1.0
        forward_ok &= math.copysign(1.0, state.Kx) == math.copysign(1.0, k0_) and abs(state.Kx) > abs(k0_)

    return [
        ("selection-residual", worst_sel < 1e-12, f"max scaled residual {worst_sel:.3e}"),
        ("on-shell-residual", worst_shell < 1e-12, f"max scaled residual {worst_shell:.3e}"),
        ("mode-dispersion", worst_disp < 1e-12, f"max scaled residual {worst_disp:.3e}"),
        ("selected-mode-evanescent", evanescent_ok, "|kx| > 1 throughout sweep"),
        ("no-backscatter", forward_ok, "probe keeps direction and gains momentum"),
    ]
