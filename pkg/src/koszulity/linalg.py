"""Exact dense linear algebra over a prime field.

Everything downstream (Groebner reduction, kernel slices, chain-map lifting)
funnels through `Matrix.rref`; that elimination loop is the hot kernel of the
whole engine.  It lives in the compiled extension ``_kernels`` when that was
built, with a bit-identical pure-Python twin ``_kernels_py`` as fallback.
Set ``KOSZULITY_BACKEND=python`` (or ``compiled``) to force one side.

Pivoting is deterministic (first nonzero entry, scanning left-to-right and
top-to-bottom), so outputs are bit-identical across runs and backends.
"""

from __future__ import annotations

import os
from array import array

from .errors import InputError

_requested = os.environ.get("KOSZULITY_BACKEND", "")
if _requested == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

inv_mod = _impl.inv_mod


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldElement:
    """A residue in the prime field F_p; arithmetic is closed and exact."""

    __slots__ = ("value", "char")

    def __init__(self, value: int, char: int):
        if not is_prime(char):
            raise InputError(f"field characteristic {char} is not prime")
        self.value = value % char
        self.char = char

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.char != self.char:
                raise InputError(f"mixed characteristics {self.char} and {other.char}")
            return other
        return FieldElement(other, self.char)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value + o.value, self.char)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value - o.value, self.char)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o.value, self.char)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.char)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(inv_mod(self.value, self.char), self.char)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.char == other.char
        if isinstance(other, int):
            return self.value == other % self.char
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.char))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value}, char={self.char})"


class Matrix:
    """Dense matrix over F_p; entries stored row-major as reduced residues."""

    __slots__ = ("rows", "cols", "char", "data")

    def __init__(self, rows: int, cols: int, char: int, data=None):
        self.rows = rows
        self.cols = cols
        self.char = char
        if data is None:
            self.data = array("q", bytes(8 * rows * cols))
        else:
            if len(data) != rows * cols:
                raise InputError(
                    f"matrix data length {len(data)} != {rows}x{cols}"
                )
            self.data = array("q", (x % char for x in data))

    @classmethod
    def from_rows(cls, rows_list, char: int) -> "Matrix":
        nrows = len(rows_list)
        ncols = len(rows_list[0]) if nrows else 0
        flat = []
        for row in rows_list:
            if len(row) != ncols:
                raise InputError("ragged rows")
            flat.extend(row)
        return cls(nrows, ncols, char, flat)

    @classmethod
    def from_columns(cls, columns, nrows: int, char: int) -> "Matrix":
        m = cls(nrows, len(columns), char)
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                if x:
                    m.data[i * m.cols + j] = x % char
        return m

    @classmethod
    def identity(cls, n: int, char: int) -> "Matrix":
        m = cls(n, n, char)
        for i in range(n):
            m.data[i * n + i] = 1
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i * self.cols + j] = value % self.char

    def row(self, i: int) -> list[int]:
        return list(self.data[i * self.cols : (i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.data[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def copy(self) -> "Matrix":
        m = Matrix.__new__(Matrix)
        m.rows, m.cols, m.char = self.rows, self.cols, self.char
        m.data = array("q", self.data)
        return m

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.char == other.char
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.char, bytes(self.data.tobytes())))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} mod {self.char})"

    def is_zero(self) -> bool:
        return not any(self.data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows or self.char != other.char:
            raise InputError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = Matrix(self.rows, other.cols, self.char)
        _impl.matmul_mod(
            out.data, self.data, other.data, self.rows, self.cols, other.cols, self.char
        )
        return out

    def apply(self, vec) -> list[int]:
        """Matrix-vector product (vec indexed by columns)."""
        if len(vec) != self.cols:
            raise InputError(f"vector length {len(vec)} != {self.cols} columns")
        p = self.char
        out = [0] * self.rows
        for i in range(self.rows):
            base = i * self.cols
            acc = 0
            for j, x in enumerate(vec):
                if x:
                    acc = (acc + self.data[base + j] * x) % p
            out[i] = acc
        return out

    def apply_pairs(self, pairs) -> list[int]:
        """Matrix-vector product for a sparse vector given as (col, coeff)."""
        p = self.char
        out = [0] * self.rows
        for j, c in pairs:
            if c:
                for i in range(self.rows):
                    v = self.data[i * self.cols + j]
                    if v:
                        out[i] = (out[i] + v * c) % p
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.char != other.char:
            raise InputError("hstack shape mismatch")
        out = Matrix(self.rows, self.cols + other.cols, self.char)
        for i in range(self.rows):
            a, b, o = i * self.cols, i * other.cols, i * out.cols
            out.data[o : o + self.cols] = self.data[a : a + self.cols]
            out.data[o + self.cols : o + out.cols] = other.data[b : b + other.cols]
        return out

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and its strictly increasing pivot columns."""
        m = self.copy()
        pivots = _impl.rref_inplace(m.data, m.rows, m.cols, m.char)
        return m, list(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[list[int]]:
        """Basis of the right null space, one column vector per free column.

        Deterministic: free columns ascending; each basis vector has a 1 in
        its free column.  len(result) == cols - rank.
        """
        red, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vec = [0] * self.cols
            vec[free] = 1
            for r, pc in enumerate(pivots):
                if pc < free:
                    entry = red.data[r * red.cols + free]
                    if entry:
                        vec[pc] = (-entry) % self.char
            basis.append(vec)
        return basis

    def solve(self, b) -> list[int] | None:
        """A particular x with self . x = b, or None when b is outside the
        column space.  Free variables are set to 0 (deterministic)."""
        if len(b) != self.rows:
            raise InputError(f"rhs length {len(b)} != {self.rows} rows")
        aug = self.hstack(Matrix.from_columns([b], self.rows, self.char))
        red, pivots = aug.rref()
        if pivots and pivots[-1] == self.cols:
            return None
        x = [0] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = red.data[r * red.cols + self.cols]
        return x


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    return m.rref()


def kernel_basis(m: Matrix) -> list[list[int]]:
    return m.kernel_basis()


def solve(m: Matrix, b) -> list[int] | None:
    return m.solve(b)


class Solver:
    """Repeated exact solves against one matrix.

    Precomputes rref([A | I]) once; each solve is a row-transform apply plus
    a consistency check.  Produces the same particular solution (free
    variables zero) as Matrix.solve.
    """

    def __init__(self, m: Matrix):
        self.m = m
        aug = m.hstack(Matrix.identity(m.rows, m.char)) if m.rows else m.copy()
        red, pivots = aug.rref()
        self.red = red
        self.pivots = [p for p in pivots if p < m.cols]
        self.rank = len(self.pivots)

    def solve(self, b) -> list[int] | None:
        m = self.m
        if len(b) != m.rows:
            raise InputError(f"rhs length {len(b)} != {m.rows} rows")
        char = m.char
        cols = m.cols
        width = self.red.cols
        x = [0] * cols
        data = self.red.data
        for r in range(m.rows):
            base = r * width + cols
            acc = 0
            for i, bi in enumerate(b):
                if bi:
                    acc = (acc + data[base + i] * bi) % char
            if r < self.rank:
                x[self.pivots[r]] = acc
            elif acc:
                return None
        return x


def column_span_pivots(columns, nrows: int, char: int) -> list[int]:
    """Indices of the columns that survive as pivots of the column span.

    Feeding [modulus columns] + [candidate columns] and keeping the pivots
    that land in the candidate range is the deterministic "extend a basis"
    step used all over the resolution engine.
    """
    if not columns:
        return []
    m = Matrix.from_columns(columns, nrows, char)
    return m.rref()[1]
