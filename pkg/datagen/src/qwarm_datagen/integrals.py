"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: products of Gaussians are expanded in Hermite
Gaussians (coefficients E), Coulomb-type integrals reduce to Hermite
Coulomb integrals R evaluated through the Boys function. Adequate and exact
for the s/p shells the STO-3G fixture set needs.
"""
from __future__ import annotations

import numpy as np
from scipy.special import hyp1f1

from .basis import BasisFunction, Molecule, NUCLEAR_CHARGE


def boys(n: int, t: float) -> float:
    return hyp1f1(n + 0.5, n + 1.5, -t) / (2.0 * n + 1.0)


def hermite_e(i: int, j: int, t: int, q_dist: float, a: float, b: float) -> float:
    """Hermite expansion coefficient E_t^{ij} for exponents a, b and A-B distance."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return float(np.exp(-mu * q_dist * q_dist))
    if j == 0:
        return (
            hermite_e(i - 1, j, t - 1, q_dist, a, b) / (2 * p)
            - (mu * q_dist / a) * hermite_e(i - 1, j, t, q_dist, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, q_dist, a, b)
        )
    return (
        hermite_e(i, j - 1, t - 1, q_dist, a, b) / (2 * p)
        + (mu * q_dist / b) * hermite_e(i, j - 1, t, q_dist, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, q_dist, a, b)
    )


def hermite_coulomb(t: int, u: int, v: int, n: int, p: float, pc: np.ndarray, dist2: float) -> float:
    """Hermite Coulomb integral R^n_{tuv} by downward recursion."""
    if t == u == v == 0:
        return float((-2.0 * p) ** n * boys(n, p * dist2))
    if t > 0:
        val = 0.0
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc, dist2)
        val += pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc, dist2)
        return val
    if u > 0:
        val = 0.0
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc, dist2)
        val += pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc, dist2)
        return val
    val = 0.0
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc, dist2)
    val += pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc, dist2)
    return val


def _primitive_overlap(a, lmn1, ra, b, lmn2, rb) -> float:
    p = a + b
    s = (np.pi / p) ** 1.5
    for axis in range(3):
        s *= hermite_e(lmn1[axis], lmn2[axis], 0, ra[axis] - rb[axis], a, b)
    return float(s)


def _primitive_kinetic(a, lmn1, ra, b, lmn2, rb) -> float:
    l2, m2, n2 = lmn2

    def ov(lmn):
        return _primitive_overlap(a, lmn1, ra, b, lmn, rb)

    term0 = b * (2 * (l2 + m2 + n2) + 3) * ov((l2, m2, n2))
    term1 = -2.0 * b * b * (
        ov((l2 + 2, m2, n2)) + ov((l2, m2 + 2, n2)) + ov((l2, m2, n2 + 2))
    )
    term2 = -0.5 * (
        l2 * (l2 - 1) * (ov((l2 - 2, m2, n2)) if l2 >= 2 else 0.0)
        + m2 * (m2 - 1) * (ov((l2, m2 - 2, n2)) if m2 >= 2 else 0.0)
        + n2 * (n2 - 1) * (ov((l2, m2, n2 - 2)) if n2 >= 2 else 0.0)
    )
    return term0 + term1 + term2


def _primitive_nuclear(a, lmn1, ra, b, lmn2, rb, rc) -> float:
    p = a + b
    cap_p = (a * ra + b * rb) / p
    pc = cap_p - rc
    dist2 = float(pc @ pc)
    val = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        et = hermite_e(lmn1[0], lmn2[0], t, ra[0] - rb[0], a, b)
        if et == 0.0:
            continue
        for u in range(lmn1[1] + lmn2[1] + 1):
            eu = hermite_e(lmn1[1], lmn2[1], u, ra[1] - rb[1], a, b)
            if eu == 0.0:
                continue
            for v in range(lmn1[2] + lmn2[2] + 1):
                ev = hermite_e(lmn1[2], lmn2[2], v, ra[2] - rb[2], a, b)
                if ev == 0.0:
                    continue
                val += et * eu * ev * hermite_coulomb(t, u, v, 0, p, pc, dist2)
    return float(2.0 * np.pi / p * val)


def _primitive_eri(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    cap_p = (a * ra + b * rb) / p
    cap_q = (c * rc + d * rd) / q
    pq = cap_p - cap_q
    dist2 = float(pq @ pq)

    e1 = [
        [hermite_e(lmn1[ax], lmn2[ax], t, ra[ax] - rb[ax], a, b)
         for t in range(lmn1[ax] + lmn2[ax] + 1)]
        for ax in range(3)
    ]
    e2 = [
        [hermite_e(lmn3[ax], lmn4[ax], t, rc[ax] - rd[ax], c, d)
         for t in range(lmn3[ax] + lmn4[ax] + 1)]
        for ax in range(3)
    ]
    val = 0.0
    for t, et in enumerate(e1[0]):
        if et == 0.0:
            continue
        for u, eu in enumerate(e1[1]):
            if eu == 0.0:
                continue
            for v, ev in enumerate(e1[2]):
                if ev == 0.0:
                    continue
                for tau, etau in enumerate(e2[0]):
                    if etau == 0.0:
                        continue
                    for nu, enu in enumerate(e2[1]):
                        if enu == 0.0:
                            continue
                        for phi, ephi in enumerate(e2[2]):
                            if ephi == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            val += (
                                et * eu * ev * etau * enu * ephi * sign
                                * hermite_coulomb(t + tau, u + nu, v + phi, 0, alpha, pq, dist2)
                            )
    pref = 2.0 * np.pi**2.5 / (p * q * np.sqrt(p + q))
    return float(pref * val)


def _contract2(func, bf1: BasisFunction, bf2: BasisFunction, *extra) -> float:
    val = 0.0
    for c1, a1 in zip(bf1.coefficients, bf1.exponents):
        for c2, a2 in zip(bf2.coefficients, bf2.exponents):
            val += c1 * c2 * func(a1, bf1.lmn, bf1.center, a2, bf2.lmn, bf2.center, *extra)
    return val


def overlap_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    s = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            s[i, j] = s[j, i] = _contract2(_primitive_overlap, basis[i], basis[j])
    return s


def kinetic_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    t = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            t[i, j] = t[j, i] = _contract2(_primitive_kinetic, basis[i], basis[j])
    return t


def nuclear_matrix(basis: list[BasisFunction], molecule: Molecule) -> np.ndarray:
    n = len(basis)
    v = np.zeros((n, n))
    coords = molecule.coords_bohr
    for i in range(n):
        for j in range(i, n):
            val = 0.0
            for sym, rc in zip(molecule.symbols, coords):
                val -= NUCLEAR_CHARGE[sym] * _contract2(
                    _primitive_nuclear, basis[i], basis[j], rc
                )
            v[i, j] = v[j, i] = val
    return v


def eri_tensor(basis: list[BasisFunction]) -> np.ndarray:
    """Full (ij|kl) tensor in chemist notation, using 8-fold symmetry."""
    n = len(basis)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    val = 0.0
                    b1, b2, b3, b4 = basis[i], basis[j], basis[k], basis[l]
                    for c1, a1 in zip(b1.coefficients, b1.exponents):
                        for c2, a2 in zip(b2.coefficients, b2.exponents):
                            for c3, a3 in zip(b3.coefficients, b3.exponents):
                                for c4, a4 in zip(b4.coefficients, b4.exponents):
                                    val += c1 * c2 * c3 * c4 * _primitive_eri(
                                        a1, b1.lmn, b1.center,
                                        a2, b2.lmn, b2.center,
                                        a3, b3.lmn, b3.center,
                                        a4, b4.lmn, b4.center,
                                    )
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val
    return eri
