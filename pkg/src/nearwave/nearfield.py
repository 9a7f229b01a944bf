"""Near-field superposition behind the screen, split into RW and CW parts.

The scalar field at height z >= 0 over the screen is

    psi(x, z) = 2 * [ integral_0^1  F(k) e^{i sqrt(1-k^2) z} cos(k x) dk
                    + integral_1^inf F(k) e^{-sqrt(k^2-1) z} cos(k x) dk ]

(times the global factor e^{-i omega0 t}, which samples omit).  The first
integral collects running waves, the second the evanescent set.  Both have
an integrable square-root derivative singularity at k = 1; the RW side is
mapped by k = sin(theta) and the innermost CW stretch by k = cosh(s), which
remove it exactly.  The CW range is truncated where the exponential or the
profile makes the integrand negligible; slit profiles additionally supply
an analytic large-k tail, so the oscillatory 1/k^2 decay at z ~ 0 is not
left to brute-force panels.

Units: x and z carry k0, wavenumbers are in k0, the field inherits the
profile's (unnormalized) amplitude scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aperture import ApertureProfile, GaussianProfile, SingleSlitProfile
from .quadrature import adaptive_quad, oscillation_breakpoints

_EXP_CUT = 46.0  # exp(-46) ~ 1e-20, below any tolerance used here


@dataclass(frozen=True)
class FieldSample:
    """Field at one point, split into running and evanescent parts (t = 0)."""

    x: float
    z: float
    psi_rw: complex
    psi_cw: complex

    @property
    def psi_total(self) -> complex:
        return self.psi_rw + self.psi_cw


def _profile_rate(profile: ApertureProfile) -> float:
    """Oscillation rate of the amplitude itself, for panel seeding."""
    if isinstance(profile, SingleSlitProfile):
        return 0.5 * profile.a
    return 0.0


def _cw_pieces(x: float, z: float, profile: ApertureProfile, kernel: str, abs_tol: float, rel_tol: float) -> complex:
    """Evanescent-range integral with the chosen x-kernel ('cos' or 'dcos').

    Returns 2 * integral_1^inf F(k) e^{-chi z} kernel(k x) dk including the
    profile's analytic tail when the truncation is set by oscillation
    rather than by the exponential.
    """
    k_exp = math.inf if z == 0.0 else math.sqrt(1.0 + (_EXP_CUT / z) ** 2)
    k_profile = profile.cutoff(z)
    k_hi = max(1.5, min(k_profile, k_exp))
    k_mid = min(2.0, k_hi)
    rate0 = _profile_rate(profile)

    if kernel == "cos":
        def ker(k):
            return np.cos(k * x)
    else:
        def ker(k):
            return -k * np.sin(k * x)

    def integrand_s(s):
        k = np.cosh(s)
        return profile.amplitude(k) * np.exp(-z * np.sinh(s)) * ker(k) * np.sinh(s)

    s_hi = math.acosh(k_mid)
    rate_s = (abs(x) + z + rate0) * math.sinh(s_hi) if s_hi > 0 else 0.0
    total = adaptive_quad(
        integrand_s,
        0.0,
        s_hi,
        abs_tol=0.5 * abs_tol,
        rel_tol=rel_tol,
        breakpoints=oscillation_breakpoints(0.0, s_hi, rate_s),
    ).value

    if k_hi > k_mid:
        def integrand_k(k):
            chi = np.sqrt((k - 1.0) * (k + 1.0))
            return profile.amplitude(k) * np.exp(-z * chi) * ker(k)

        total += adaptive_quad(
            integrand_k,
            k_mid,
            k_hi,
            abs_tol=0.5 * abs_tol,
            rel_tol=rel_tol,
            breakpoints=oscillation_breakpoints(k_mid, k_hi, abs(x) + rate0),
        ).value

    total *= 2.0
    if profile.has_analytic_tail() and k_profile <= k_exp:
        if kernel == "cos":
            total += profile.field_tail(k_hi, x, z)
        else:
            total += profile.field_tail_dx(k_hi, x, z)
    return total


def _rw_piece(x: float, z: float, profile: ApertureProfile, kernel: str, abs_tol: float, rel_tol: float) -> complex:
    """Running-range integral, k = sin(theta) substitution."""
    if kernel == "cos":
        def ker(k):
            return np.cos(k * x)
    else:
        def ker(k):
            return -k * np.sin(k * x)

    def integrand(theta):
        k = np.sin(theta)
        c = np.cos(theta)
        return profile.amplitude(k) * np.exp(1j * z * c) * ker(k) * c

    rate = math.hypot(x, z) + _profile_rate(profile)
    res = adaptive_quad(
        integrand,
        0.0,
        0.5 * math.pi,
        abs_tol=0.5 * abs_tol,
        rel_tol=rel_tol,
        breakpoints=oscillation_breakpoints(0.0, 0.5 * math.pi, rate),
    )
    return 2.0 * res.value


def field_at(
    x: float,
    z: float,
    profile: ApertureProfile,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> FieldSample:
    """Evaluate the near-field superposition at one point (z >= 0)."""
    if z < 0:
        raise ValueError(f"z must be non-negative (transmission side), got {z!r}")
    psi_rw = _rw_piece(x, z, profile, "cos", abs_tol, rel_tol)
    psi_cw = _cw_pieces(x, z, profile, "cos", abs_tol, rel_tol)
    return FieldSample(x=x, z=z, psi_rw=complex(psi_rw), psi_cw=complex(psi_cw))


def field_dx_at(
    x: float,
    z: float,
    profile: ApertureProfile,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> FieldSample:
    """x-derivative of the field, differentiated under the integrals."""
    if z < 0:
        raise ValueError(f"z must be non-negative (transmission side), got {z!r}")
    d_rw = _rw_piece(x, z, profile, "dcos", abs_tol, rel_tol)
    d_cw = _cw_pieces(x, z, profile, "dcos", abs_tol, rel_tol)
    return FieldSample(x=x, z=z, psi_rw=complex(d_rw), psi_cw=complex(d_cw))


def probability_current_x(
    x: float,
    z: float,
    profile: ApertureProfile,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> float:
    """Transverse probability current J_x = Im(psi* d(psi)/dx) at t = 0.

    Odd in x and zero on the symmetry axis; a nonzero value off-axis is the
    flux the standing-wave decomposition carries along the screen.
    """
    psi = field_at(x, z, profile, abs_tol=abs_tol, rel_tol=rel_tol).psi_total
    dpsi = field_dx_at(x, z, profile, abs_tol=abs_tol, rel_tol=rel_tol).psi_total
    return (psi.conjugate() * dpsi).imag


def cw_fraction_profile(
    x: float,
    z_grid,
    profile: ApertureProfile,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> list[tuple[float, float]]:
    """Evanescent intensity fraction |psi_cw|^2/|psi_total|^2 along a z scan."""
    zs = [float(z) for z in z_grid]
    if any(z < 0 for z in zs):
        raise ValueError("z grid must be non-negative")
    if any(b <= a for a, b in zip(zs, zs[1:])):
        raise ValueError("z grid must be strictly increasing")
    out = []
    for z in zs:
        s = field_at(x, z, profile, abs_tol=abs_tol, rel_tol=rel_tol)
        out.append((z, abs(s.psi_cw) ** 2 / abs(s.psi_total) ** 2))
    return out


def consistency_checks() -> list[tuple[str, bool, str]]:
    """Closed-form, linearity and symmetry checks; CLI check mode."""
    results = []

    w = 2.0
    gauss = GaussianProfile(w=w)
    worst = 0.0
    for x in (0.0, 0.7, 2.5):
        got = field_at(x, 0.0, gauss).psi_total
        want = 2.0 * math.sqrt(math.pi) / w * math.exp(-((x / w) ** 2))
        worst = max(worst, abs(got - want) / want)
    results.append(("gaussian-z0-closed-form", worst < 1e-10, f"max rel {worst:.3e}"))

    slit = SingleSlitProfile(a=1.0)
    s1 = field_at(1.0, 0.4, slit).psi_total
    class Scaled(SingleSlitProfile):
        def amplitude(self, kx):
            return 3.0 * super().amplitude(kx)
        def field_tail(self, k_hi, x, z):
            return 3.0 * super().field_tail(k_hi, x, z)
        def field_tail_dx(self, k_hi, x, z):
            return 3.0 * super().field_tail_dx(k_hi, x, z)
    s3 = field_at(1.0, 0.4, Scaled(a=1.0)).psi_total
    lin_ok = abs(s3 - 3.0 * s1) <= 1e-12 * abs(s3)
    results.append(("linearity", lin_ok, f"{s3!r} vs 3*{s1!r}"))

    j0 = probability_current_x(0.0, 0.5, slit)
    jp = probability_current_x(1.5, 0.5, slit)
    jm = probability_current_x(-1.5, 0.5, slit)
    results.append(("current-axis-zero", abs(j0) < 1e-12, f"J_x(0) = {j0!r}"))
    results.append(("current-odd", abs(jp + jm) <= 1e-10 * max(1.0, abs(jp)), f"{jp!r} vs {jm!r}"))

    fr = cw_fraction_profile(0.0, (0.3, 3.0), slit)
    results.append(("cw-fraction-decay", fr[0][1] > fr[1][1], f"{fr}"))
    return results
