"""Exact scalar fields and dense matrices over them.

Two kinds of field are supported: prime fields GF(p), stored as int64
residues in [0, p), and the rationals, stored as numpy object arrays of
:class:`fractions.Fraction`.  Every downstream computation reduces to
:func:`rref`, :func:`kernel_basis` and :func:`solve` on :class:`Matrix`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

DEFAULT_PRIME = 101
CROSS_CHECK_PRIME = 32003


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Common interface of the exact scalar fields."""

    name: str

    def reduce(self, arr):
        raise NotImplementedError

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def element(self, x):
        return self.array([x])[0]

    def to_json(self):
        raise NotImplementedError

    def encode(self, x):
        """JSON-safe representative of one scalar."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 3037000499:
            raise ValueError("prime too large for int64 products")
        self.p = p
        self.name = f"GF({p})"

    def reduce(self, arr):
        return np.mod(arr, self.p)

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        flat = [_to_residue(x, self.p) for x in a.ravel()]
        return np.array(flat, dtype=np.int64).reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def to_json(self):
        return {"kind": "gf", "p": self.p}

    def encode(self, x):
        return int(x)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))


def _to_residue(x, p: int) -> int:
    if isinstance(x, Fraction):
        return (x.numerator % p) * pow(x.denominator % p, p - 2, p) % p
    return int(x) % p


class RationalField(Field):
    name = "QQ"

    def reduce(self, arr):
        return arr

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = Fraction(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / Fraction(x)

    def to_json(self):
        return {"kind": "qq"}

    def encode(self, x):
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("qq")


@lru_cache(maxsize=None)
def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


QQ = RationalField()


def field_from_json(data) -> Field:
    if isinstance(data, str):
        if data == "QQ":
            return QQ
        if data.startswith("GF(") and data.endswith(")"):
            return GF(int(data[3:-1]))
        raise ValueError(f"unknown field {data!r}")
    if data.get("kind") == "gf":
        return GF(int(data["p"]))
    if data.get("kind") == "qq":
        return QQ
    raise ValueError(f"unknown field {data!r}")


def decode_scalar(field: Field, x):
    if isinstance(x, str):
        return field.element(Fraction(x))
    return field.element(x)


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, data, *, _trusted: bool = False):
        if _trusted:
            arr = data
        else:
            arr = field.array(data)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        arr.flags.writeable = False
        self.field = field
        self.a = arr

    @classmethod
    def _wrap(cls, field: Field, arr: np.ndarray) -> "Matrix":
        if not arr.flags.owndata or arr.flags.writeable is False:
            arr = arr.copy()
        return cls(field, arr, _trusted=True)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)), _trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        arr = field.zeros((n, n))
        for i in range(n):
            arr[i, i] = field.element(1)
        return cls(field, arr, _trusted=True)

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence["Matrix"]) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return hstack(list(columns))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix._wrap(self.field, self.field.reduce(self.a @ other.a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.field, self.field.reduce(-self.a))

    def scale(self, s) -> "Matrix":
        s = self.field.element(s)
        return Matrix._wrap(self.field, self.field.reduce(self.a * s))

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.field, self.a.T.copy())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    __hash__ = None

    def is_zero(self) -> bool:
        return not bool(np.any(self.a != 0))

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def entry(self, i: int, j: int):
        return self.a[i, j]

    def column(self, j: int) -> "Matrix":
        return Matrix._wrap(self.field, self.a[:, j : j + 1].copy())

    def submatrix(self, rows, cols) -> "Matrix":
        arr = self.a[np.ix_(list(rows), list(cols))] if len(rows) and len(cols) else self.field.zeros((len(rows), len(cols)))
        return Matrix._wrap(self.field, np.array(arr))

    def vec(self) -> np.ndarray:
        """Row-major flattening."""
        return self.a.reshape(-1)

    def tolist(self):
        return [[self.field.encode(x) for x in row] for row in self.a]

    def __repr__(self):
        return f"Matrix({self.field}, {self.tolist()})"


def hstack(ms: Sequence[Matrix]) -> Matrix:
    f = ms[0].field
    return Matrix._wrap(f, np.hstack([m.a for m in ms]))


def vstack(ms: Sequence[Matrix]) -> Matrix:
    f = ms[0].field
    return Matrix._wrap(f, np.vstack([m.a for m in ms]))


def block_diag(ms: Sequence[Matrix], field: Optional[Field] = None) -> Matrix:
    field = field or ms[0].field
    r = sum(m.rows for m in ms)
    c = sum(m.cols for m in ms)
    arr = field.zeros((r, c))
    i = j = 0
    for m in ms:
        arr[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix(field, arr, _trusted=True)


def from_vector(field: Field, v: np.ndarray, rows: int, cols: int) -> Matrix:
    return Matrix._wrap(field, np.array(v).reshape(rows, cols).copy())


def rref(m: Matrix):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(R, pivots)`` where ``R`` is a numpy array and ``pivots`` the
    list of pivot columns.
    """
    return _rref_array(m.field, m.a)


def _rref_array(field: Field, arr: np.ndarray):
    A = np.array(arr, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = field.inv(A[r, c])
        A[r] = field.reduce(A[r] * inv)
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = field.reduce(A[hit] - np.outer(col[hit], A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the right null space of ``m``."""
    field = m.field
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(field, n)
    R, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    out = field.zeros((n, len(free)))
    one = field.element(1)
    for k, fc in enumerate(free):
        out[fc, k] = one
        for i, pc in enumerate(pivots):
            out[pc, k] = field.reduce(-R[i, fc])
    return Matrix(field, out, _trusted=True)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some ``x`` with ``a @ x == b``, or ``None`` when inconsistent."""
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    a._check(b)
    field = a.field
    n = a.cols
    if a.rows == 0:
        return Matrix.zeros(field, n, b.cols)
    R, pivots = _rref_array(field, np.hstack([a.a, b.a]))
    if pivots and pivots[-1] >= n:
        return None
    x = field.zeros((n, b.cols))
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n:]
    return Matrix(field, x, _trusted=True)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    x = solve(m, Matrix.identity(m.field, m.rows))
    if x is None or m @ x != Matrix.identity(m.field, m.rows):
        raise ValueError("matrix is singular")
    return x


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def column_space(m: Matrix) -> Matrix:
    """Pivot columns of ``m``: a basis of its image drawn from its own columns."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    _, pivots = rref(m)
    return m.submatrix(range(m.rows), pivots)


def row_basis(m: Matrix) -> Matrix:
    """Nonzero rows of the reduced echelon form."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.field, 0, m.cols)
    R, pivots = rref(m)
    return Matrix._wrap(m.field, R[: len(pivots)].copy())


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with block ordering (i, j) -> i * cols(b) + j."""
    a._check(b)
    return Matrix._wrap(a.field, a.field.reduce(np.kron(a.a, b.a)))


def complement_coordinates(sub_rows: Matrix):
    """Quotient data for ``V / rowspace(sub_rows)``.

    Returns ``(R, pivots, free)``: the reduced rows, their pivot columns and
    the complementary coordinates, which index a basis of the quotient.
    """
    n = sub_rows.cols
    if sub_rows.rows == 0:
        return sub_rows.field.zeros((0, n)), [], list(range(n))
    R, pivots = rref(sub_rows)
    R = R[: len(pivots)]
    ps = set(pivots)
    return R, pivots, [c for c in range(n) if c not in ps]


def quotient_projection(sub_rows: Matrix) -> Matrix:
    """Matrix of ``V -> V / rowspace(sub_rows)`` in the free-coordinate basis."""
    field = sub_rows.field
    n = sub_rows.cols
    R, pivots, free = complement_coordinates(sub_rows)
    # v = sum_i v[p_i] e_{p_i} + ...; e_{p_i} == -sum_f R[i, f] e_f modulo the subspace
    proj = field.zeros((len(free), n))
    one = field.element(1)
    for k, fc in enumerate(free):
        proj[k, fc] = one
        for i, pc in enumerate(pivots):
            proj[k, pc] = field.reduce(-R[i, fc])
    return Matrix(field, proj, _trusted=True)


def stack_kernel(blocks: Iterable[Matrix], n: int, field: Field) -> Matrix:
    """Kernel of the vertical stack of ``blocks``, refined block by block."""
    basis = Matrix.identity(field, n)
    for blk in blocks:
        if basis.cols == 0:
            break
        if blk.rows == 0:
            continue
        k = kernel_basis(blk @ basis)
        basis = basis @ k
    return basis


def random_matrix(field: Field, rows: int, cols: int, rng) -> Matrix:
    """Uniform entries over GF(p); small integers in [-4, 4] over QQ."""
    if isinstance(field, PrimeField):
        vals = [rng.below(field.p) for _ in range(rows * cols)]
    else:
        vals = [rng.below(9) - 4 for _ in range(rows * cols)]
    return Matrix(field, np.array(vals, dtype=object).reshape(rows, cols))


def random_invertible(field: Field, n: int, rng, tries: int = 64) -> Matrix:
    for _ in range(tries):
        m = random_matrix(field, n, n, rng)
        if is_invertible(m):
            return m
    return Matrix.identity(field, n)
