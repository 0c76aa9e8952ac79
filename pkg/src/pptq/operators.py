"""Dense Hermitian operator algebra on bipartite tensor-product spaces.

Index convention used everywhere in this package: the composite index of the
pair (a, b) is a*d_b + b (A-major, B-minor, row-major matrices).
"""

import numpy as np

from ._backend import kernels
from .errors import DimensionCapExceeded, InvariantViolation, NonConvergence

HERMITICITY_TOL = 1e-10
DEFAULT_DIM_CAP = 4096


class BipartiteOperator:
    """A Hermitian matrix on A x B with recorded local dimensions.

    The matrix is symmetrized at construction when the deviation from
    Hermiticity is below 1e-10 (absorbs I/O rounding noise) and rejected
    above. Instances are immutable.
    """

    __slots__ = ("d_a", "d_b", "matrix")

    def __init__(self, d_a: int, d_b: int, matrix):
        d_a = int(d_a)
        d_b = int(d_b)
        if d_a < 1 or d_b < 1:
            raise InvariantViolation("local dimensions must be positive")
        m = np.asarray(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantViolation(f"matrix must be square, got shape {m.shape}")
        if m.shape[0] != d_a * d_b:
            raise InvariantViolation(
                f"matrix side {m.shape[0]} != d_a*d_b = {d_a * d_b}"
            )
        dev = np.abs(m - m.conj().T).max() if m.size else 0.0
        if not dev <= HERMITICITY_TOL:
            raise InvariantViolation(
                f"matrix is not Hermitian: max deviation {dev:.3e}"
            )
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "d_a", d_a)
        object.__setattr__(self, "d_b", d_b)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("BipartiteOperator is immutable")

    @property
    def side(self) -> int:
        return self.d_a * self.d_b

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def __repr__(self):
        return f"BipartiteOperator(d_a={self.d_a}, d_b={self.d_b})"


class SpectralDecomposition:
    """Eigenvalues in descending order with matching eigenvector columns."""

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues, eigenvectors):
        ev = np.asarray(eigenvalues, dtype=np.float64)
        vv = np.asarray(eigenvectors, dtype=np.complex128)
        ev.setflags(write=False)
        vv.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "eigenvectors", vv)

    def __setattr__(self, name, value):
        raise AttributeError("SpectralDecomposition is immutable")

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues.astype(np.complex128)) @ v.conj().T


def partial_transpose(op: BipartiteOperator) -> BipartiteOperator:
    """Transpose the B factor only: out[(a,b),(a',b')] = in[(a,b'),(a',b)]."""
    return BipartiteOperator(
        op.d_a, op.d_b, kernels.pt_matrix(op.matrix, op.d_a, op.d_b)
    )


def _canonical_phase(col):
    for x in col:
        if abs(x) > 1e-12:
            return col * (abs(x) / x)
    return col


def eigendecompose(op: BipartiteOperator) -> SpectralDecomposition:
    """Hermitian eigendecomposition, eigenvalues descending.

    Eigenvector phases are canonicalized (first significant component real
    positive); exact eigenvalue ties are broken by lexicographic order of
    the eigenvector entries, so repeated runs give identical output.
    """
    try:
        w, v = np.linalg.eigh(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigensolver failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    cols = [_canonical_phase(v[:, j]) for j in range(v.shape[1])]
    i = 0
    n = len(w)
    while i < n:
        j = i
        while j + 1 < n and w[j + 1] == w[i]:
            j += 1
        if j > i:
            block = sorted(
                cols[i:j + 1],
                key=lambda c: tuple(x for e in c for x in (e.real, e.imag)),
            )
            cols[i:j + 1] = block
        i = j + 1
    return SpectralDecomposition(w, np.column_stack(cols))


def trace_norm(op: BipartiteOperator) -> float:
    """Sum of absolute eigenvalues (Hermitian input)."""
    return float(np.abs(np.linalg.eigvalsh(op.matrix)).sum())


def operator_norm(op: BipartiteOperator) -> float:
    """Largest absolute eigenvalue (Hermitian input)."""
    return float(np.abs(np.linalg.eigvalsh(op.matrix)).max())


def tensor_power(op: BipartiteOperator, n: int,
                 cap: int = DEFAULT_DIM_CAP) -> BipartiteOperator:
    """n-fold tensor power with systems regrouped to a genuine A^n : B^n cut.

    The raw Kronecker power lives on (A1 B1 ... An Bn); the output permutes
    systems to (A1..An)(B1..Bn) so that downstream partial transposes see a
    true bipartition.
    """
    if n < 1:
        raise ValueError("tensor power requires n >= 1")
    side = op.side ** n
    if side > cap:
        raise DimensionCapExceeded(
            f"tensor power side {side} exceeds cap {cap}"
        )
    if n == 1:
        return op
    m = op.matrix
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    dims = [op.d_a, op.d_b] * n
    perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    out = out.reshape(dims + dims)
    out = out.transpose(perm + [p + 2 * n for p in perm])
    out = np.ascontiguousarray(out.reshape(side, side))
    return BipartiteOperator(op.d_a ** n, op.d_b ** n, out)
