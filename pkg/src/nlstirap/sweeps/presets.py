"""Background scattering lengths and the resulting collisional strengths for common species."""

import math
from dataclasses import dataclass

from scipy.constants import atomic_mass, hbar

DENSITY = 1e21  # m^-3


@dataclass(frozen=True)
class SpeciesPreset:
    species: str
    mass_number: int
    B0: str
    a_bg: float
    U_aa: float

    @property
    def B0_gauss(self):
        """Field value without the quoted uncertainty digits."""
        return float(self.B0.split("(")[0])


# U_aa as tabulated (rad/us); collisional_strength() recomputes it.
_TABLE = (
    ("6Li", 6, "543.25(5)", 3.122, 0.415),
    ("6Li", 6, "834.149", -74.348, -9.880),
    ("23Na", 23, "853", 3.381, 0.117),
    ("23Na", 23, "907", 3.323, 0.115),
    ("40K", 40, "202.10(7)", 9.208, 0.184),
    ("40K", 40, "224.21(5)", 9.208, 0.184),
    ("85Rb", 85, "155.0", -23.442, -0.220),
    ("87Rb", 87, "1007.40(4)", 5.318, 0.049),
    ("133Cs", 133, "19.90(3)", 8.625, 0.052),
    ("133Cs", 133, "47.97(3)", 47.890, 0.287),
)


def species_presets():
    return [SpeciesPreset(*row) for row in _TABLE]


def collisional_strength(a_bg_nm, mass_number, density=DENSITY):
    """``4 pi hbar a_bg n0 / m`` in rad/us, with ``m = mass_number`` atomic mass units."""
    m = mass_number * atomic_mass
    return 4.0 * math.pi * hbar * a_bg_nm * 1e-9 * density / m * 1e-6
