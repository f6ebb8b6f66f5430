"""STO-3G basis data and contracted Gaussian shells.

Exponents/coefficients are the published STO-3G values for H and O (the
only elements the fixture set needs). Contraction coefficients are given
for normalized primitives; contracted functions are renormalized
numerically at construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

# element -> list of shells: (angular momentum letter, exponents, coefficients)
STO3G = {
    "H": [
        ("S", [3.425250914, 0.6239137298, 0.1688554040],
              [0.1543289673, 0.5353281423, 0.4446345422]),
    ],
    "O": [
        ("S", [130.7093200, 23.80886050, 6.443608313],
              [0.1543289673, 0.5353281423, 0.4446345422]),
        ("S", [5.033151319, 1.169596125, 0.3803889600],
              [-0.09996722919, 0.3995128261, 0.7001154689]),
        ("P", [5.033151319, 1.169596125, 0.3803889600],
              [0.1559162750, 0.6076837186, 0.3919573931]),
    ],
}

NUCLEAR_CHARGE = {"H": 1, "O": 8}

_CARTESIAN = {"S": [(0, 0, 0)], "P": [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    l, m, n = lmn
    num = (2 * alpha / np.pi) ** 0.75 * (4 * alpha) ** ((l + m + n) / 2)
    den = np.sqrt(
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return num / den


@dataclass
class BasisFunction:
    """One contracted Cartesian Gaussian centered on an atom."""

    center: np.ndarray  # bohr
    lmn: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive norms and contraction norm

    @property
    def total_angular_momentum(self) -> int:
        return sum(self.lmn)


def _contracted(center, lmn, exponents, raw_coeffs) -> BasisFunction:
    exponents = np.asarray(exponents, dtype=np.float64)
    coeffs = np.asarray(raw_coeffs, dtype=np.float64) * np.array(
        [_primitive_norm(a, lmn) for a in exponents]
    )
    # self-overlap of the contracted function, closed form for aligned centers
    l, m, n = lmn
    self_ov = 0.0
    for ca, aa in zip(coeffs, exponents):
        for cb, ab in zip(coeffs, exponents):
            p = aa + ab
            pref = (np.pi / p) ** 1.5
            fac = (
                _double_factorial(2 * l - 1)
                * _double_factorial(2 * m - 1)
                * _double_factorial(2 * n - 1)
                / (2 * p) ** (l + m + n)
            )
            self_ov += ca * cb * pref * fac
    coeffs = coeffs / np.sqrt(self_ov)
    return BasisFunction(np.asarray(center, dtype=np.float64), lmn, exponents, coeffs)


@dataclass
class Molecule:
    symbols: list[str]
    coords_angstrom: np.ndarray  # (n_atoms, 3)
    charge: int

    @property
    def coords_bohr(self) -> np.ndarray:
        return self.coords_angstrom * ANGSTROM_TO_BOHR

    @property
    def n_electrons(self) -> int:
        return sum(NUCLEAR_CHARGE[s] for s in self.symbols) - self.charge

    def nuclear_repulsion(self) -> float:
        coords = self.coords_bohr
        energy = 0.0
        for i in range(len(self.symbols)):
            for j in range(i + 1, len(self.symbols)):
                r = np.linalg.norm(coords[i] - coords[j])
                energy += NUCLEAR_CHARGE[self.symbols[i]] * NUCLEAR_CHARGE[self.symbols[j]] / r
        return energy

    def basis_functions(self) -> list[BasisFunction]:
        funcs = []
        for sym, center in zip(self.symbols, self.coords_bohr):
            if sym not in STO3G:
                raise ValueError(f"no STO-3G data for element {sym!r}")
            for kind, exps, coeffs in STO3G[sym]:
                for lmn in _CARTESIAN[kind]:
                    funcs.append(_contracted(center, lmn, exps, coeffs))
        return funcs
