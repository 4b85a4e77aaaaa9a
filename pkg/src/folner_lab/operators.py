"""Operator specifications on sequence spaces and their finite compressions.

An operator spec is a symbolic description of a bounded operator on
l2(N0), l2(Z), or a tensor product of those.  Compressions P T P are
generated exactly from the entry formula of each variant; polynomial
combinations are evaluated on a padded index window so that all requested
entries agree with the infinite-dimensional operator.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

N0 = "n0"
Z = "z"

_LATTICES = (N0, Z)


class LatticeMismatchError(ValueError):
    """Operator and projection (or polynomial operands) live on different lattices."""


class NyquistError(ValueError):
    """Too few symbol samples for the requested coefficient bandwidth."""


# ---------------------------------------------------------------------------
# spec variants


class OperatorSpec:
    """Base class for operator specifications."""

    lattice: str

    def __add__(self, other):
        return op_sum(self, other)

    def __sub__(self, other):
        return op_sum(self, op_scale(-1.0, other))

    def __mul__(self, other):
        if isinstance(other, OperatorSpec):
            return op_prod(self, other)
        return op_scale(other, self)

    def __rmul__(self, scalar):
        return op_scale(scalar, self)


@dataclass(frozen=True)
class Dense(OperatorSpec):
    """Explicit square matrix, acting on the first d basis vectors of l2(N0)."""

    matrix: np.ndarray
    lattice: str = N0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"dense spec needs a square matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    def __hash__(self):
        return hash((self.lattice, self.matrix.shape[0]))

    def __eq__(self, other):
        return (
            isinstance(other, Dense)
            and self.lattice == other.lattice
            and np.array_equal(self.matrix, other.matrix)
        )


@dataclass(frozen=True)
class Toeplitz(OperatorSpec):
    """Toeplitz operator on l2(N0) with entries a_{i-j} from a finite symbol."""

    coeffs: tuple  # sorted tuple of (k, complex a_k)
    selfadjoint: bool = False
    lattice: str = N0

    def __post_init__(self):
        if isinstance(self.coeffs, dict):
            items = self.coeffs.items()
        else:
            items = self.coeffs
        cs = tuple(sorted((int(k), complex(v)) for k, v in items if v != 0))
        object.__setattr__(self, "coeffs", cs)
        if self.selfadjoint:
            d = dict(cs)
            for k, v in cs:
                if d.get(-k, 0j) != v.conjugate():
                    raise ValueError(
                        "selfadjoint toeplitz symbol requires a_{-k} == conj(a_k)"
                    )

    @property
    def bandwidth(self) -> int:
        return max((abs(k) for k, _ in self.coeffs), default=0)

    def symbol_values(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate g(theta) = sum_k a_k e^{ik theta}."""
        vals = np.zeros(np.shape(theta), dtype=complex)
        for k, a in self.coeffs:
            vals += a * np.exp(1j * k * np.asarray(theta))
        return vals


def toeplitz_from_samples(values, bandwidth: int, selfadjoint: bool = False) -> Toeplitz:
    """Recover Fourier coefficients |k| <= bandwidth from uniform symbol samples.

    Uses the plain discrete Fourier sum; requires at least 2*bandwidth + 1
    samples (Nyquist bound for the requested band).
    """
    v = np.asarray(values, dtype=complex)
    m = v.size
    if m < 2 * bandwidth + 1:
        raise NyquistError(
            f"{m} samples cannot resolve coefficients up to |k| = {bandwidth}"
        )
    theta = 2.0 * np.pi * np.arange(m) / m
    coeffs = {}
    for k in range(-bandwidth, bandwidth + 1):
        a = np.mean(v * np.exp(-1j * k * theta))
        coeffs[k] = a
    return Toeplitz(coeffs, selfadjoint=selfadjoint)


@dataclass(frozen=True)
class Shift(OperatorSpec):
    """Weighted unilateral shift on l2(N0): S e_i = w(i) e_{i+1}; default w == 1."""

    weight: Callable[[np.ndarray], np.ndarray] | None = None
    lattice: str = N0

    def weights(self, idx: np.ndarray) -> np.ndarray:
        if self.weight is None:
            return np.ones(idx.shape, dtype=complex)
        return np.asarray(self.weight(idx), dtype=complex)


@dataclass(frozen=True)
class Band(OperatorSpec):
    """Band operator on l2(Z): (A psi)(n) = sum_{|j|<=b} d_j(n) psi(n+j).

    Matrix entries: <e_i, A e_j> = d_{j-i}(i).  Diagonal functions may be
    constants or callables (vectorized over integer arrays).
    """

    bandwidth: int
    diagonals: tuple = ()  # tuple of (offset, const-or-callable)
    lattice: str = Z

    def __post_init__(self):
        if isinstance(self.diagonals, dict):
            items = self.diagonals.items()
        else:
            items = self.diagonals
        ds = tuple(sorted(items, key=lambda kv: kv[0]))
        for off, _ in ds:
            if abs(off) > self.bandwidth:
                raise ValueError(f"diagonal offset {off} exceeds bandwidth {self.bandwidth}")
        object.__setattr__(self, "diagonals", ds)

    def diag_values(self, offset: int, idx: np.ndarray) -> np.ndarray:
        for off, fn in self.diagonals:
            if off == offset:
                if callable(fn):
                    return np.asarray(fn(idx), dtype=complex)
                return np.full(idx.shape, complex(fn))
        return np.zeros(idx.shape, dtype=complex)


@dataclass(frozen=True)
class AlmostMathieu(OperatorSpec):
    """Discrete Schroedinger operator with cosine potential on l2(Z).

    Hopping terms 1 on offsets +-1 and diagonal 2*coupling*cos(2pi(freq*n + phase)).
    """

    coupling: float
    freq: float
    phase: float = 0.0
    lattice: str = Z

    def as_band(self) -> Band:
        lam, alpha, phi = self.coupling, self.freq, self.phase

        def pot(n):
            return 2.0 * lam * np.cos(2.0 * np.pi * (alpha * n + phi)) + 0j

        return Band(1, ((-1, 1.0), (0, pot), (1, 1.0)))


@dataclass(frozen=True)
class Kron(OperatorSpec):
    """Tensor product of two operator specs; compressions factor through np.kron."""

    left: OperatorSpec
    right: OperatorSpec
    lattice: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lattice", (self.left.lattice, self.right.lattice))


# polynomial expression nodes ------------------------------------------------


@dataclass(frozen=True)
class SumE:
    parts: tuple


@dataclass(frozen=True)
class ProdE:
    parts: tuple


@dataclass(frozen=True)
class AdjE:
    child: object


@dataclass(frozen=True)
class ScaleE:
    scalar: complex
    child: object


@dataclass(frozen=True)
class Poly(OperatorSpec):
    """*-polynomial combination of operator specs sharing one lattice."""

    expr: object
    lattice: str = field(init=False)

    def __post_init__(self):
        lats = set(_expr_lattices(self.expr))
        if len(lats) != 1:
            raise LatticeMismatchError(f"poly spec mixes lattices {sorted(map(str, lats))}")
        object.__setattr__(self, "lattice", lats.pop())


def _expr_lattices(node):
    if isinstance(node, OperatorSpec):
        yield node.lattice
    elif isinstance(node, (SumE, ProdE)):
        for p in node.parts:
            yield from _expr_lattices(p)
    elif isinstance(node, (AdjE, ScaleE)):
        yield from _expr_lattices(node.child)
    else:
        raise TypeError(f"not a polynomial node: {node!r}")


def _as_node(op):
    if isinstance(op, Poly):
        return op.expr
    if isinstance(op, Kron):
        raise LatticeMismatchError("tensor-product specs cannot appear inside a poly spec")
    if isinstance(op, OperatorSpec):
        return op
    raise TypeError(f"expected an operator spec, got {op!r}")


def op_sum(*ops) -> Poly:
    return Poly(SumE(tuple(_as_node(o) for o in ops)))


def op_prod(*ops) -> Poly:
    return Poly(ProdE(tuple(_as_node(o) for o in ops)))


def op_scale(scalar, op) -> Poly:
    return Poly(ScaleE(complex(scalar), _as_node(op)))


def identity(lattice: str = N0) -> OperatorSpec:
    if lattice == N0:
        return Toeplitz({0: 1.0}, selfadjoint=True)
    if lattice == Z:
        return Band(0, ((0, 1.0),))
    raise LatticeMismatchError(f"unknown lattice {lattice!r}")


# ---------------------------------------------------------------------------
# entry formulas


def _match(rows: np.ndarray, cols: np.ndarray, k: int):
    """Positions (ri, ci) with rows[ri] == cols[ci] + k; inputs strictly increasing."""
    _, ri, ci = np.intersect1d(rows, cols + k, assume_unique=True, return_indices=True)
    return ri, ci


def _leaf_entries(op: OperatorSpec, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Matrix of <e_r, T e_c> for a non-composite spec."""
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    out = np.zeros((rows.size, cols.size), dtype=complex)
    if isinstance(op, Dense):
        d = op.matrix.shape[0]
        rm = rows < d
        cm = cols < d
        out[np.ix_(rm, cm)] = op.matrix[np.ix_(rows[rm], cols[cm])]
        return out
    if isinstance(op, Toeplitz):
        for k, a in op.coeffs:
            ri, ci = _match(rows, cols, k)
            out[ri, ci] = a
        return out
    if isinstance(op, Shift):
        ri, ci = _match(rows, cols, 1)
        out[ri, ci] = op.weights(cols[ci])
        return out
    if isinstance(op, AlmostMathieu):
        return _leaf_entries(op.as_band(), rows, cols)
    if isinstance(op, Band):
        for off, _ in op.diagonals:
            ri, ci = _match(rows, cols, -off)  # entry (i, j) nonzero when j - i == off
            if ri.size:
                out[ri, ci] = op.diag_values(off, rows[ri])
        return out
    raise TypeError(f"no entry formula for {type(op).__name__}")


def _banded_width(node) -> int:
    """Upper bound on how far matrix entries reach via banded hops."""
    if isinstance(node, (Toeplitz, Band)):
        return node.bandwidth
    if isinstance(node, Shift):
        return 1
    if isinstance(node, AlmostMathieu):
        return 1
    if isinstance(node, Dense):
        return 0  # handled via support
    if isinstance(node, Poly):
        return _banded_width(node.expr)
    if isinstance(node, SumE):
        return max(_banded_width(p) for p in node.parts)
    if isinstance(node, ProdE):
        return sum(_banded_width(p) for p in node.parts)
    if isinstance(node, (AdjE, ScaleE)):
        return _banded_width(node.child)
    raise TypeError(f"no bandwidth for {node!r}")


def _dense_supports(node):
    if isinstance(node, Dense):
        yield node.matrix.shape[0]
    elif isinstance(node, Poly):
        yield from _dense_supports(node.expr)
    elif isinstance(node, (SumE, ProdE)):
        for p in node.parts:
            yield from _dense_supports(p)
    elif isinstance(node, (AdjE, ScaleE)):
        yield from _dense_supports(node.child)


def pad_indices(op: OperatorSpec, idx: np.ndarray) -> np.ndarray:
    """Smallest convenient index set on which every entry coupling idx is visible."""
    idx = np.asarray(idx, dtype=np.int64)
    bw = _banded_width(op)
    support = max(_dense_supports(op), default=0)
    pieces = [idx]
    if support:
        pieces.append(np.arange(support, dtype=np.int64))
    base = np.unique(np.concatenate(pieces))
    if bw:
        base = np.unique(base[:, None] + np.arange(-bw, bw + 1)[None, :])
    if op.lattice == N0:
        base = base[base >= 0]
    return base


def _eval_expr(node, idx: np.ndarray) -> np.ndarray:
    if isinstance(node, OperatorSpec):
        return _leaf_entries(node, idx, idx)
    if isinstance(node, SumE):
        acc = _eval_expr(node.parts[0], idx)
        for p in node.parts[1:]:
            acc = acc + _eval_expr(p, idx)
        return acc
    if isinstance(node, ProdE):
        acc = _eval_expr(node.parts[0], idx)
        for p in node.parts[1:]:
            acc = acc @ _eval_expr(p, idx)
        return acc
    if isinstance(node, AdjE):
        return _eval_expr(node.child, idx).conj().T
    if isinstance(node, ScaleE):
        return node.scalar * _eval_expr(node.child, idx)
    raise TypeError(f"cannot evaluate node {node!r}")


def exact_entries(op: OperatorSpec, idx: np.ndarray) -> np.ndarray:
    """Entries of the infinite operator restricted to idx x idx, exactly.

    Polynomial specs are evaluated on an enlarged window and cut back so
    that no compression-product boundary error reaches the requested block.
    """
    idx = np.asarray(idx, dtype=np.int64)
    if isinstance(op, Kron):
        raise LatticeMismatchError("tensor-product specs need a tensor-product projection")
    if isinstance(op, Poly):
        big = pad_indices(op, idx)
        m = _eval_expr(op.expr, big)
        pos = np.searchsorted(big, idx)
        return m[np.ix_(pos, pos)]
    return _leaf_entries(op, idx, idx)


# ---------------------------------------------------------------------------
# public operations


def compress(op: OperatorSpec, proj) -> np.ndarray:
    """Finite section P T P as a rank(P) x rank(P) matrix on the range of P."""
    from .projections import KronProj  # local import to avoid a cycle

    if isinstance(op, Kron) or isinstance(proj, KronProj):
        if not (isinstance(op, Kron) and isinstance(proj, KronProj)):
            raise LatticeMismatchError(
                "tensor-product operator requires a tensor-product projection (and vice versa)"
            )
        return np.kron(compress(op.left, proj.left), compress(op.right, proj.right))
    if op.lattice != proj.lattice:
        raise LatticeMismatchError(
            f"operator on {op.lattice!r} vs projection on {proj.lattice!r}"
        )
    idx = proj.index_array()
    return exact_entries(op, idx)


def padded_compression(op: OperatorSpec, proj):
    """Return (A, mask): entries of op on the padded index set and the 0/1
    marker of the projection's indices inside it.

    The padded set captures every nonzero entry of A P and P A, so
    commutators and off-corner blocks formed from (A, mask) are exact.
    """
    from .projections import KronProj

    if isinstance(op, Kron) or isinstance(proj, KronProj):
        if not (isinstance(op, Kron) and isinstance(proj, KronProj)):
            raise LatticeMismatchError(
                "tensor-product operator requires a tensor-product projection (and vice versa)"
            )
        a, ma = padded_compression(op.left, proj.left)
        b, mb = padded_compression(op.right, proj.right)
        return np.kron(a, b), np.kron(ma, mb)
    if op.lattice != proj.lattice:
        raise LatticeMismatchError(
            f"operator on {op.lattice!r} vs projection on {proj.lattice!r}"
        )
    idx = proj.index_array()
    big = pad_indices(op, idx)
    a = exact_entries(op, big)
    mask = np.isin(big, idx).astype(float)
    return a, mask


def diagonal_entries(op: OperatorSpec, proj) -> np.ndarray:
    """Diagonal of the compression, via the entry formula where possible."""
    from .projections import KronProj

    if isinstance(op, Kron) and isinstance(proj, KronProj):
        dl = diagonal_entries(op.left, proj.left)
        dr = diagonal_entries(op.right, proj.right)
        return np.outer(dl, dr).ravel()
    if isinstance(op, (Kron,)) or isinstance(proj, KronProj):
        raise LatticeMismatchError(
            "tensor-product operator requires a tensor-product projection (and vice versa)"
        )
    idx = proj.index_array()
    if isinstance(op, Dense):
        d = op.matrix.shape[0]
        out = np.zeros(idx.size, dtype=complex)
        m = idx < d
        out[m] = np.diag(op.matrix)[idx[m]]
        return out
    if isinstance(op, Toeplitz):
        a0 = dict(op.coeffs).get(0, 0j)
        return np.full(idx.size, a0)
    if isinstance(op, Shift):
        return np.zeros(idx.size, dtype=complex)
    if isinstance(op, AlmostMathieu):
        return op.as_band().diag_values(0, idx)
    if isinstance(op, Band):
        return op.diag_values(0, idx)
    return np.diag(exact_entries(op, idx)).copy()


def op_adjoint(op: OperatorSpec) -> OperatorSpec:
    """Spec of the adjoint operator."""
    if isinstance(op, Dense):
        return Dense(op.matrix.conj().T)
    if isinstance(op, Toeplitz):
        return Toeplitz({-k: a.conjugate() for k, a in op.coeffs}, selfadjoint=op.selfadjoint)
    if isinstance(op, AlmostMathieu):
        return op
    if isinstance(op, Band):
        diags = []
        for off, fn in op.diagonals:
            if callable(fn):
                diags.append((-off, _shifted_conj(fn, off)))
            else:
                diags.append((-off, complex(fn).conjugate()))
        return Band(op.bandwidth, tuple(diags))
    if isinstance(op, Kron):
        return Kron(op_adjoint(op.left), op_adjoint(op.right))
    if isinstance(op, Poly):
        node = op.expr
        if isinstance(node, AdjE):
            child = node.child
            return child if isinstance(child, OperatorSpec) else Poly(child)
        return Poly(AdjE(node))
    if isinstance(op, Shift):
        return Poly(AdjE(op))
    raise TypeError(f"no adjoint rule for {type(op).__name__}")


def _shifted_conj(fn, off):
    # adjoint diagonal: d'_{-off}(n) = conj(d_off(n + off))
    def g(n):
        return np.conj(np.asarray(fn(np.asarray(n) + off), dtype=complex))

    return g


def is_selfadjoint(op: OperatorSpec, proj, tol: float = 1e-12) -> bool:
    m = compress(op, proj)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def kron_op(a: OperatorSpec, b: OperatorSpec) -> Kron:
    return Kron(a, b)


def build_toeplitz_section(symbol: Toeplitz, n: int) -> np.ndarray:
    """(n+1) x (n+1) finite section with entries a_{i-j}."""
    if n < 0:
        raise ValueError("section order must be nonnegative")
    idx = np.arange(n + 1, dtype=np.int64)
    return _leaf_entries(symbol, idx, idx)
