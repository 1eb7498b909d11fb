"""Dense exact linear algebra over Z/p^M: products, determinants, Smith form.

Matrices are small (dimension <= 8 in every case this package handles), so
everything is dense and exact.  The module-level functions that end in
``_raw`` work on plain lists of ints and back the hot loops elsewhere; the
``SquareMatrix`` wrappers give the typed, modulus-checked surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, ModulusMismatch, PrecisionTooLow
from .modp import SATURATED, Modulus, Residue


@dataclass(frozen=True)
class SquareMatrix:
    """An l x l matrix of residues sharing one modulus.

    Entries are canonical representatives stored row-major as a tuple of
    tuples; instances are immutable and hashable.
    """

    rows: tuple
    modulus: Modulus

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], modulus: Modulus) -> "SquareMatrix":
        l = len(rows)
        if l < 1 or any(len(r) != l for r in rows):
            raise DimensionMismatch("matrix must be square with dim >= 1")
        pM = modulus.pM
        return SquareMatrix(tuple(tuple(x % pM for x in r) for r in rows), modulus)

    @staticmethod
    def identity(dim: int, modulus: Modulus) -> "SquareMatrix":
        return SquareMatrix.from_rows(
            [[1 if i == j else 0 for j in range(dim)] for i in range(dim)], modulus
        )

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Residue:
        return Residue(self.rows[i][j], self.modulus)

    def _check(self, other: "SquareMatrix") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check(other)
        return SquareMatrix(
            mat_mul_raw(self.rows, other.rows, self.modulus.pM), self.modulus
        )

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check(other)
        pM = self.modulus.pM
        return SquareMatrix(
            tuple(
                tuple((a - b) % pM for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            self.modulus,
        )

    def __pow__(self, n: int) -> "SquareMatrix":
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        acc = SquareMatrix.identity(self.dim, self.modulus)
        base = self
        while n:
            if n & 1:
                acc = acc @ base
            base = base @ base if n > 1 else base
            n >>= 1
        return acc

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.dim)) % self.modulus.pM

    def reduce(self, n: int) -> "SquareMatrix":
        """Entrywise image in Z/p^n for n <= M."""
        if n > self.modulus.M:
            raise PrecisionTooLow(f"cannot reduce precision {self.modulus.M} to {n}")
        m = Modulus(self.modulus.p, n)
        return SquareMatrix(tuple(tuple(x % m.pM for x in r) for r in self.rows), m)

    def encode(self) -> bytes:
        """Canonical byte form: fixed-width big-endian entries, row-major.

        Byte-lexicographic order on encodings agrees with entrywise numeric
        order, which fixes the canonical representative of a conjugacy class.
        """
        width = ((self.modulus.pM - 1).bit_length() + 7) // 8
        return b"".join(
            x.to_bytes(width, "big") for row in self.rows for x in row
        )

    def is_identity(self) -> bool:
        return all(
            self.rows[i][j] == (1 if i == j else 0)
            for i in range(self.dim)
            for j in range(self.dim)
        )


def mat_mul_raw(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], pM: int) -> tuple:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % pM for col in bt) for row in a
    )


def multiply(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """Exact product mod p^M."""
    return a @ b


@dataclass(frozen=True)
class SmithValuations:
    """Valuations (e_1 <= ... <= e_l) of the Smith form over Z/p^M.

    Over the local ring every elementary divisor is a unit times p^e, so the
    valuation list describes the Smith form completely.  Entries that vanish
    mod p^M are reported as SATURATED (None) rather than as M: at precision M
    a divisor p^M is indistinguishable from the zero entry, and callers must
    not conflate the two.  Saturated entries sort last.
    """

    vals: tuple
    modulus: Modulus

    @property
    def dim(self) -> int:
        return len(self.vals)

    def diagonal(self) -> tuple:
        """Diagonal presentation: p^e for finite valuations, 0 for saturated."""
        return tuple(0 if e is SATURATED else self.modulus.p ** e for e in self.vals)

    def saturated_count(self) -> int:
        return sum(1 for e in self.vals if e is SATURATED)

    def finite_positive(self) -> tuple:
        return tuple(e for e in self.vals if e is not SATURATED and e > 0)


def smith_valuations_raw(rows: Sequence[Sequence[int]], p: int, M: int) -> list:
    """Smith-form valuations of a square matrix over Z/p^M.

    Repeatedly pick a pivot of minimal valuation (ties broken by lowest
    (row, column)), scale its row to make the pivot exactly p^e, and clear
    its row and column; recurse on the minor.  Because the pivot valuation
    is globally minimal the output is already non-decreasing.
    """
    pM = p ** M
    a = [[x % pM for x in row] for row in rows]
    n = len(a)
    out = []
    for s in range(n):
        best_e, bi, bj = M, -1, -1
        for i in range(s, n):
            row = a[i]
            for j in range(s, n):
                x = row[j]
                if x == 0:
                    continue
                e = 0
                while x % p == 0:
                    x //= p
                    e += 1
                if e < best_e:
                    best_e, bi, bj = e, i, j
                    if e == 0:
                        break
            if best_e == 0:
                break
        if bi < 0:
            out.extend([SATURATED] * (n - s))
            break
        if bi != s:
            a[s], a[bi] = a[bi], a[s]
        if bj != s:
            for row in a:
                row[s], row[bj] = row[bj], row[s]
        pe = p ** best_e
        unit_inv = pow(a[s][s] // pe, -1, pM)
        a[s] = [x * unit_inv % pM for x in a[s]]
        for i in range(s + 1, n):
            q = a[i][s] // pe
            if q:
                ai, as_ = a[i], a[s]
                a[i] = [(x - q * y) % pM for x, y in zip(ai, as_)]
        for j in range(s + 1, n):
            q = a[s][j] // pe
            if q:
                for i in range(s, n):
                    a[i][j] = (a[i][j] - q * a[i][s]) % pM
        out.append(best_e)
    return out


def smith_valuations(a: SquareMatrix) -> SmithValuations:
    """Smith normal form of a, reported as sorted valuations."""
    vals = smith_valuations_raw(a.rows, a.modulus.p, a.modulus.M)
    return SmithValuations(tuple(vals), a.modulus)


def kernel_size_raw(rows: Sequence[Sequence[int]], p: int, n: int) -> int:
    """|Ker(A mod p^n)| = prod p^min(e_i, n) over the Smith valuations mod p^n."""
    vals = smith_valuations_raw(rows, p, n)
    return p ** sum(n if e is SATURATED else e for e in vals)


def kernel_size(a: SquareMatrix, n: int) -> int:
    """Exact number of vectors v in (Z/p^n)^l with A v = 0."""
    if n > a.modulus.M:
        raise PrecisionTooLow(f"need precision {n}, matrix has {a.modulus.M}")
    return kernel_size_raw(a.rows, a.modulus.p, n)


def determinant_raw(rows: Sequence[Sequence[int]], pM: int) -> int:
    """Determinant mod p^M via fraction-free (Bareiss) elimination over Z.

    The canonical representatives are treated as integers; all divisions in
    Bareiss elimination are exact, so the result is the true determinant of
    the lift reduced mod p^M.
    """
    a = [list(map(int, row)) for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for s in range(n - 1):
        if a[s][s] == 0:
            for i in range(s + 1, n):
                if a[i][s] != 0:
                    a[s], a[i] = a[i], a[s]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(s + 1, n):
            for j in range(s + 1, n):
                a[i][j] = (a[i][j] * a[s][s] - a[i][s] * a[s][j]) // prev
            a[i][s] = 0
        prev = a[s][s]
    return sign * a[n - 1][n - 1] % pM


def determinant(a: SquareMatrix) -> Residue:
    """Exact determinant mod p^M."""
    return Residue(determinant_raw(a.rows, a.modulus.pM), a.modulus)


def parse_matrix_text(text: str) -> SquareMatrix:
    """Parse the plain-text matrix format: header "p M rows cols", then rows.

    Entries are non-negative integers, reduced mod p^M on ingestion.
    """
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix file")
    header = lines[0].split()
    if len(header) != 4:
        raise ValueError('header must be "p M rows cols"')
    p, M, nrows, ncols = (int(tok) for tok in header)
    if nrows != ncols:
        raise ValueError(f"matrix must be square, got {nrows}x{ncols}")
    if len(lines) - 1 != nrows:
        raise ValueError(f"expected {nrows} rows, found {len(lines) - 1}")
    modulus = Modulus(p, M)
    rows = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != ncols:
            raise ValueError(f"row has {len(row)} entries, expected {ncols}")
        if any(x < 0 for x in row):
            raise ValueError("entries must be non-negative")
        rows.append(row)
    return SquareMatrix.from_rows(rows, modulus)
