"""Physical constants, the scaled unit system, and stable numeric primitives.

Everything heavy in this package runs in dimensionless form: wavenumbers are
measured in units of the input-photon wavenumber k0, energies in units of
eps0 = hbar*c*k0, lengths in 1/k0, times in 1/(c*k0) and velocities in c.
This keeps quantities of wildly different magnitude (the Compton wavenumber
of a 0.1 kg screen is ~3.8e34 k0 for a visible photon) inside the
comfortable range of double precision.  Conversion to and from SI happens
only at the package boundary, through :class:`ScaledUnits`.

Complex-valued quantities are plain Python ``complex``; anything that may
acquire an imaginary part is typed that way and never silently assumed real.
Comparisons of such values are tolerance based, see :func:`complex_close`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA 2018 (hbar and c are exact SI definitions)
HBAR: float = 1.054571817e-34  # J s
C_LIGHT: float = 2.99792458e8  # m / s
ELECTRON_MASS: float = 9.1093837015e-31  # kg

#: Default relative tolerance for dimensionless algebraic identities.
DEFAULT_REL_TOL: float = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable bundle of the constants the package relies on."""

    hbar: float = HBAR
    c: float = C_LIGHT
    electron_mass: float = ELECTRON_MASS


CONSTANTS = PhysicalConstants()

_SI_FACTORS = ("wavenumber", "energy", "length", "time", "velocity")


@dataclass(frozen=True)
class ScaledUnits:
    """Dimensionless unit system anchored to an input wavenumber k0 [1/m].

    Internally every module works with ratios such as kx/k0 or E/eps0;
    this class is the single place where those ratios meet SI.
    """

    k0: float

    def __post_init__(self):
        if not (math.isfinite(self.k0) and self.k0 > 0):
            raise ValueError(f"k0 must be positive and finite, got {self.k0!r}")

    @property
    def eps0(self) -> float:
        """Input photon energy hbar*c*k0 [J]."""
        return HBAR * C_LIGHT * self.k0

    @property
    def lambda0(self) -> float:
        """Input wavelength 2*pi/k0 [m]."""
        return 2.0 * math.pi / self.k0

    @property
    def omega0(self) -> float:
        """Input angular frequency c*k0 [1/s]."""
        return C_LIGHT * self.k0

    def _factor(self, kind: str) -> float:
        if kind == "wavenumber":
            return self.k0
        if kind == "energy":
            return self.eps0
        if kind == "length":
            return 1.0 / self.k0
        if kind == "time":
            return 1.0 / (C_LIGHT * self.k0)
        if kind == "velocity":
            return C_LIGHT
        raise ValueError(f"unknown quantity kind {kind!r}; expected one of {_SI_FACTORS}")

    def to_si(self, value: float, kind: str) -> float:
        """Convert a dimensionless value of the given kind to SI."""
        return value * self._factor(kind)

    def from_si(self, value: float, kind: str) -> float:
        """Convert an SI value of the given kind to dimensionless form."""
        return value / self._factor(kind)


def compton_wavenumber_ratio(mass_kg: float, units: ScaledUnits) -> float:
    """Compton wavenumber m*c/hbar of a mass, in units of k0."""
    if not (mass_kg > 0):
        raise ValueError(f"mass must be positive, got {mass_kg!r}")
    return mass_kg * C_LIGHT / (HBAR * units.k0)


def stable_one_minus_inv_sqrt1p(mu: float) -> float:
    """Return 1 - (1 + mu)**-0.5 without cancellation.

    Uses the algebraically identical form
    ``mu / (sqrt(1+mu) * (1 + sqrt(1+mu)))``, accurate for mu all the way
    down to the subnormal range.  The naive expression loses every digit
    once mu drops below machine epsilon.
    """
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu!r}")
    s = math.sqrt(1.0 + mu)
    return mu / (s * (1.0 + s))


def complex_close(a: complex, b: complex, rel: float = DEFAULT_REL_TOL, abs_tol: float = 0.0) -> bool:
    """Tolerance-based equality for complex values."""
    scale = max(abs(a), abs(b))
    return abs(a - b) <= max(abs_tol, rel * scale)


def consistency_checks() -> list[tuple[str, bool, str]]:
    """Fast self-checks for the unit system; used by the CLI check mode."""
    results = []
    units = ScaledUnits(k0=7.5e6)
    for kind in _SI_FACTORS:
        x = 1.2345
        rt = units.from_si(units.to_si(x, kind), kind)
        ok = abs(rt - x) <= 2.0 * math.ulp(x)
        results.append((f"roundtrip-{kind}", ok, f"value {rt!r}"))
    # stable primitive against the naive form where the naive form is healthy
    for mu in (1e-6, 1e-3, 1.0, 3.0, 1e3):
        stable = stable_one_minus_inv_sqrt1p(mu)
        naive = 1.0 - 1.0 / math.sqrt(1.0 + mu)
        ok = abs(stable - naive) <= 1e-10 * abs(naive)
        results.append((f"one-minus-inv-sqrt1p mu={mu:g}", ok, f"{stable!r} vs {naive!r}"))
    return results
