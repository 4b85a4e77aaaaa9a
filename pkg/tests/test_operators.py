import math

import numpy as np
import pytest

import folner_lab as fl

ALPHA = (math.sqrt(5.0) - 1.0) / 2.0


class TestToeplitzSections:
    def test_constant_symbol(self):
        t = fl.Toeplitz({0: 5.0})
        assert np.array_equal(fl.build_toeplitz_section(t, 3), 5.0 * np.eye(4))

    def test_hopping_symbol(self):
        t = fl.Toeplitz({1: 1.0, -1: 1.0}, selfadjoint=True)
        want = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
        assert np.array_equal(fl.build_toeplitz_section(t, 2), want)

    def test_sampled_symbol_matches_coefficients(self):
        # discrete Fourier recovery oracle: g(theta) = 2 cos(theta) at 64 nodes
        theta = 2.0 * np.pi * np.arange(64) / 64
        t_sampled = fl.toeplitz_from_samples(2.0 * np.cos(theta), bandwidth=1)
        t_coeffs = fl.Toeplitz({1: 1.0, -1: 1.0})
        a = fl.build_toeplitz_section(t_sampled, 10)
        b = fl.build_toeplitz_section(t_coeffs, 10)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_nyquist_bound(self):
        with pytest.raises(fl.NyquistError):
            fl.toeplitz_from_samples(np.ones(4), bandwidth=2)

    def test_selfadjoint_flag_checks_coefficients(self):
        with pytest.raises(ValueError):
            fl.Toeplitz({1: 1.0, -1: 2.0}, selfadjoint=True)

    def test_constant_diagonals(self):
        rng = np.random.default_rng(7)
        coeffs = {k: complex(rng.standard_normal(), rng.standard_normal()) for k in range(-3, 4)}
        m = fl.build_toeplitz_section(fl.Toeplitz(coeffs), 8)
        for i in range(9):
            for j in range(9):
                assert m[i, j] == coeffs.get(i - j, 0j)


class TestCompress:
    def test_tridiagonal_window(self):
        t = fl.Toeplitz({1: 1.0, -1: 1.0})
        for n in (2, 5):
            m = fl.compress(t, fl.Window(fl.N0, 0, n))
            assert m.shape == (n + 1, n + 1)
            assert np.array_equal(m, np.eye(n + 1, k=1) + np.eye(n + 1, k=-1))

    def test_shift_window(self):
        m = fl.compress(fl.Shift(), fl.Window(fl.N0, 0, 4))
        assert np.array_equal(m, np.eye(5, k=-1))

    def test_almost_mathieu_window(self):
        am = fl.AlmostMathieu(0.5, ALPHA, 0.0)
        m = fl.compress(am, fl.Window(fl.Z, -2, 2))
        ks = np.arange(-2, 3)
        # d_0(n) = 2 * 0.5 * cos(2 pi alpha n), evaluated directly
        assert np.allclose(np.diag(m), np.cos(2.0 * np.pi * ALPHA * ks), atol=1e-15)
        assert np.array_equal(m - np.diag(np.diag(m)), np.eye(5, k=1) + np.eye(5, k=-1))
        assert np.max(np.abs(m - m.conj().T)) == 0.0

    def test_lattice_mismatch(self):
        with pytest.raises(fl.LatticeMismatchError):
            fl.compress(fl.Shift(), fl.Window(fl.Z, -1, 1))

    def test_index_set_compression(self):
        rng = np.random.default_rng(0)
        mat = rng.standard_normal((6, 6))
        m = fl.compress(fl.Dense(mat), fl.IndexSet(fl.N0, (1, 3, 4)))
        assert np.array_equal(m, mat[np.ix_([1, 3, 4], [1, 3, 4])])


class TestAdjoint:
    def test_dense_example(self):
        adj = fl.op_adjoint(fl.Dense(np.array([[0.0, 1.0], [0.0, 0.0]])))
        assert np.array_equal(adj.matrix, [[0.0, 0.0], [1.0, 0.0]])

    def test_almost_mathieu_selfadjoint(self):
        am = fl.AlmostMathieu(1.7, ALPHA, 0.3)
        assert fl.is_selfadjoint(am, fl.finite_section(fl.Z, 6), tol=1e-14)

    def test_shift_not_selfadjoint(self):
        assert not fl.is_selfadjoint(fl.Shift(), fl.finite_section(fl.N0, 5))

    @pytest.mark.parametrize("seed", range(5))
    def test_adjoint_compression_is_conj_transpose(self, seed):
        rng = np.random.default_rng(seed)
        specs = [
            fl.Dense(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))),
            fl.Toeplitz({k: complex(rng.standard_normal(), rng.standard_normal()) for k in (-2, 0, 1)}),
            fl.Band(1, ((0, lambda n: np.exp(2j * np.pi * ALPHA * np.asarray(n))), (1, 0.5))),
        ]
        for op in specs:
            proj = (
                fl.Window(op.lattice, 0, 4) if op.lattice == fl.N0 else fl.Window(fl.Z, -2, 2)
            )
            a = fl.compress(fl.op_adjoint(op), proj)
            b = fl.compress(op, proj).conj().T
            assert np.max(np.abs(a - b)) < 1e-14

    def test_band_adjoint_roundtrip(self):
        band = fl.Band(2, ((-2, 1j), (0, lambda n: np.asarray(n) + 0j), (1, 2.0)))
        twice = fl.op_adjoint(fl.op_adjoint(band))
        proj = fl.Window(fl.Z, -4, 4)
        assert np.max(np.abs(fl.compress(twice, proj) - fl.compress(band, proj))) < 1e-14


class TestKron:
    def test_scalar_example(self):
        a = fl.Dense(np.array([[2.0]]))
        p = fl.Window(fl.N0, 0, 0)
        m = fl.compress(fl.kron_op(a, a), fl.kron_proj(p, p))
        assert np.array_equal(m, [[4.0]])

    def test_shift_tensor_identity_blocks(self):
        s, one = fl.Shift(), fl.identity(fl.N0)
        p = fl.Window(fl.N0, 0, 2)
        q = fl.Window(fl.N0, 0, 1)
        m = fl.compress(fl.kron_op(s, one), fl.kron_proj(p, q))
        assert np.array_equal(m, np.kron(np.eye(3, k=-1), np.eye(2)))

    def test_random_kron_oracle(self):
        rng = np.random.default_rng(3)
        a = fl.Dense(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        b = fl.Dense(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        m = fl.compress(
            fl.kron_op(a, b),
            fl.kron_proj(fl.Window(fl.N0, 0, 2), fl.Window(fl.N0, 0, 1)),
        )
        assert np.max(np.abs(m - np.kron(a.matrix, b.matrix))) < 1e-14

    def test_kron_factorization_random_specs(self):
        # entrywise match of kron compression against factor compressions
        rng = np.random.default_rng(11)
        for _ in range(10):
            da, db = rng.integers(2, 9), rng.integers(2, 8)
            a = fl.Dense(rng.standard_normal((da, da)))
            b = fl.Toeplitz({k: complex(rng.standard_normal()) for k in (-1, 0, 2)})
            p = fl.Window(fl.N0, 0, int(rng.integers(1, da)))
            q = fl.Window(fl.N0, 0, int(rng.integers(1, 6)))
            lhs = fl.compress(fl.kron_op(a, b), fl.kron_proj(p, q))
            rhs = np.kron(fl.compress(a, p), fl.compress(b, q))
            assert lhs.shape[0] <= 64
            assert np.max(np.abs(lhs - rhs)) < 1e-13

    def test_kron_requires_kron_projection(self):
        with pytest.raises(fl.LatticeMismatchError):
            fl.compress(fl.kron_op(fl.Shift(), fl.Shift()), fl.Window(fl.N0, 0, 3))


class TestPoly:
    def test_sum_linearity_exact(self):
        rng = np.random.default_rng(5)
        a = fl.Dense(rng.standard_normal((6, 6)))
        b = fl.Dense(rng.standard_normal((6, 6)))
        proj = fl.IndexSet(fl.N0, (0, 2, 5))
        lhs = fl.compress(fl.op_sum(a, b), proj)
        assert np.array_equal(lhs, fl.compress(a, proj) + fl.compress(b, proj))

    @pytest.mark.parametrize("seed", range(10))
    def test_product_compression_defect(self, seed):
        # compress(AB, P) - compress(A, P) compress(B, P) == P A (1-P) B P
        rng = np.random.default_rng(seed)
        d = 7
        am = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        bm = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        idx = sorted(rng.choice(d, size=3, replace=False).tolist())
        proj = fl.IndexSet(fl.N0, tuple(idx))
        pm = np.zeros((d, d))
        pm[idx, idx] = 1.0
        lhs = fl.compress(fl.op_prod(fl.Dense(am), fl.Dense(bm)), proj)
        cut = fl.compress(fl.Dense(am), proj) @ fl.compress(fl.Dense(bm), proj)
        defect = (pm @ am @ (np.eye(d) - pm) @ bm @ pm)[np.ix_(idx, idx)]
        assert np.max(np.abs(lhs - cut - defect)) < 1e-12

    def test_padded_product_is_exact_for_banded(self):
        # S* S = identity on l2(N0), including the lattice edge
        s = fl.Shift()
        prod = fl.op_prod(fl.op_adjoint(s), s)
        m = fl.compress(prod, fl.Window(fl.N0, 0, 6))
        assert np.max(np.abs(m - np.eye(7))) < 1e-14

    def test_mixed_lattice_rejected(self):
        with pytest.raises(fl.LatticeMismatchError):
            fl.op_sum(fl.Shift(), fl.Band(0, ((0, 1.0),)))

    def test_operator_arithmetic_sugar(self):
        t = fl.Toeplitz({1: 1.0, -1: 1.0})
        proj = fl.Window(fl.N0, 0, 4)
        m = fl.compress(2.0 * t + fl.identity(fl.N0), proj)
        want = 2.0 * (np.eye(5, k=1) + np.eye(5, k=-1)) + np.eye(5)
        assert np.max(np.abs(m - want)) < 1e-14
