"""Integral engine checks against closed-form and published anchors."""
from __future__ import annotations

import numpy as np
import pytest

from qwarm_datagen.basis import Molecule
from qwarm_datagen.integrals import (
    boys,
    eri_tensor,
    hermite_e,
    kinetic_matrix,
    nuclear_matrix,
    overlap_matrix,
)


@pytest.fixture(scope="module")
def h2():
    return Molecule(["H", "H"], np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.74]]), 0)


@pytest.fixture(scope="module")
def h2_basis(h2):
    return h2.basis_functions()


class TestPrimitives:
    def test_boys_zero_argument(self):
        # F_n(0) = 1/(2n+1)
        for n in range(4):
            assert boys(n, 0.0) == pytest.approx(1.0 / (2 * n + 1))

    def test_boys_large_argument_asymptotics(self):
        # F_0(t) -> sqrt(pi/(4t)) for large t
        t = 40.0
        assert boys(0, t) == pytest.approx(np.sqrt(np.pi / (4 * t)), rel=1e-6)

    def test_hermite_base_case(self):
        assert hermite_e(0, 0, 0, 0.0, 1.3, 0.7) == pytest.approx(1.0)

    def test_hermite_out_of_range(self):
        assert hermite_e(1, 1, 3, 0.5, 1.0, 1.0) == 0.0


class TestOneElectron:
    def test_overlap_normalized_diagonal(self, h2_basis):
        s = overlap_matrix(h2_basis)
        np.testing.assert_allclose(np.diag(s), 1.0, atol=1e-12)

    def test_overlap_known_offdiagonal(self, h2_basis):
        # STO-3G H2 at 0.74 A has S12 ~ 0.6599
        s = overlap_matrix(h2_basis)
        assert s[0, 1] == pytest.approx(0.6599, abs=2e-4)

    def test_kinetic_symmetric_positive_diagonal(self, h2_basis):
        t = kinetic_matrix(h2_basis)
        np.testing.assert_allclose(t, t.T, atol=1e-14)
        assert np.all(np.diag(t) > 0)

    def test_nuclear_negative(self, h2, h2_basis):
        v = nuclear_matrix(h2_basis, h2)
        assert np.all(np.diag(v) < 0)


class TestEri:
    def test_eightfold_symmetry(self, h2_basis):
        eri = eri_tensor(h2_basis)
        rng = np.random.default_rng(0)
        n = len(h2_basis)
        for _ in range(20):
            i, j, k, l = rng.integers(0, n, 4)
            ref = eri[i, j, k, l]
            for perm in (
                (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            ):
                assert eri[perm] == pytest.approx(ref, abs=1e-12)

    def test_known_h2_on_site_repulsion(self, h2_basis):
        # (11|11) for STO-3G H is ~ 0.7746 Ha
        eri = eri_tensor(h2_basis)
        assert eri[0, 0, 0, 0] == pytest.approx(0.7746, abs=2e-4)

    def test_p_function_self_repulsion_positive(self):
        mol = Molecule(["O"], np.array([[0.0, 0.0, 0.0]]), 0)
        basis = mol.basis_functions()
        eri = eri_tensor(basis)
        for i in range(len(basis)):
            assert eri[i, i, i, i] > 0
