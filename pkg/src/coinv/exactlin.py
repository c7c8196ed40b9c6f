"""Exact sparse linear algebra over the rationals.

Everything downstream (ideal truncations, coinvariant solvers, kernel
computations) reduces to row reduction of sparse matrices with Fraction
entries.  Rows are dicts mapping column index to a nonzero coefficient;
reduced row echelon form is canonical, so subspace equality is dict
equality of RREF rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Q = Fraction

# sparse row: column index -> nonzero rational coefficient
Row = dict[int, Q]


def _clean_row(entries: Mapping[int, object]) -> Row:
    """Copy a mapping into a Row, coercing values to Q and dropping zeros."""
    row: Row = {}
    for c, v in entries.items():
        q = Q(v)
        if q:
            row[int(c)] = q
    return row


def row_from_sequence(vec: Sequence[object]) -> Row:
    """Sparse row from a dense coefficient sequence."""
    return {i: Q(v) for i, v in enumerate(vec) if Q(v)}


class RationalMatrix:
    """Immutable-by-convention sparse matrix over Q."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[Row]):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        for r in rows:
            if r and (min(r) < 0 or max(r) >= ncols):
                raise ValueError("column index out of range")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], ncols: int | None = None) -> "RationalMatrix":
        """Build from dense row data."""
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, [row_from_sequence(r) for r in rows])

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: Mapping[tuple[int, int], object]) -> "RationalMatrix":
        rows: list[Row] = [dict() for _ in range(nrows)]
        for (r, c), v in entries.items():
            q = Q(v)
            if q:
                rows[r][c] = q
        return cls(nrows, ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [{i: Q(1)} for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls(nrows, ncols, [dict() for _ in range(nrows)])

    # -- access ----------------------------------------------------------

    def entry(self, r: int, c: int) -> Q:
        return self.rows[r].get(c, Q(0))

    def row(self, r: int) -> Row:
        return dict(self.rows[r])

    def to_dense(self) -> list[list[Q]]:
        return [[self.entry(r, c) for c in range(self.ncols)] for r in range(self.nrows)]

    def iter_entries(self) -> Iterator[tuple[int, int, Q]]:
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                yield r, c, v

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for c, v in b.items():
                w = r.get(c, Q(0)) + v
                if w:
                    r[c] = w
                else:
                    r.pop(c, None)
            rows.append(r)
        return RationalMatrix(self.nrows, self.ncols, rows)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(Q(-1))

    def scale(self, a: object) -> "RationalMatrix":
        q = Q(a)
        if not q:
            return RationalMatrix.zero(self.nrows, self.ncols)
        return RationalMatrix(self.nrows, self.ncols, [{c: q * v for c, v in r.items()} for r in self.rows])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self.mul(other)

    def mul(self, other: "RationalMatrix") -> "RationalMatrix":
        """Matrix product self @ other."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        rows: list[Row] = []
        for a in self.rows:
            acc: Row = {}
            for k, v in a.items():
                for c, w in other.rows[k].items():
                    s = acc.get(c, Q(0)) + v * w
                    if s:
                        acc[c] = s
                    else:
                        del acc[c]
            rows.append(acc)
        return RationalMatrix(self.nrows, other.ncols, rows)

    def mul_vector(self, vec: Sequence[object] | Mapping[int, object]) -> Row:
        """Matrix-vector product as a sparse column (row index -> value)."""
        v = _clean_row(vec) if isinstance(vec, Mapping) else row_from_sequence(vec)
        out: Row = {}
        for r, row in enumerate(self.rows):
            s = Q(0)
            for c, w in row.items():
                x = v.get(c)
                if x:
                    s += w * x
            if s:
                out[r] = s
        return out

    def transpose(self) -> "RationalMatrix":
        rows: list[Row] = [dict() for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                rows[c][r] = v
        return RationalMatrix(self.ncols, self.nrows, rows)

    def kron(self, other: "RationalMatrix") -> "RationalMatrix":
        """Kronecker product; block (r, c) of the result is entry(r, c) * other."""
        rows: list[Row] = []
        for r in range(self.nrows):
            arow = self.rows[r]
            for r2 in range(other.nrows):
                brow = other.rows[r2]
                out: Row = {}
                for c, v in arow.items():
                    base = c * other.ncols
                    for c2, w in brow.items():
                        out[base + c2] = v * w
                rows.append(out)
        return RationalMatrix(self.nrows * other.nrows, self.ncols * other.ncols, rows)

    # -- misc ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols}, nnz={sum(len(r) for r in self.rows)})"


def vstack(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    """Stack matrices with equal column counts vertically."""
    if not mats:
        raise ValueError("vstack of nothing")
    ncols = mats[0].ncols
    rows: list[Row] = []
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("column count mismatch in vstack")
        rows.extend(dict(r) for r in m.rows)
    return RationalMatrix(len(rows), ncols, rows)


# -- row reduction ---------------------------------------------------------


def _echelon_insert(pivots: dict[int, Row], row: Row) -> int | None:
    """Reduce `row` against the triangular basis `pivots`, installing it if
    a new leading column survives.  Returns the new pivot column or None.

    Invariant: pivots[c] is a row whose minimal support column is c with
    coefficient 1, and distinct pivot rows have distinct leading columns.
    """
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            inv = Q(1) / row[lead]
            if inv != 1:
                for c in row:
                    row[c] *= inv
            pivots[lead] = row
            return lead
        a = row.pop(lead)
        for c, v in piv.items():
            if c == lead:
                continue
            w = row.get(c, Q(0)) - a * v
            if w:
                row[c] = w
            else:
                row.pop(c, None)
    return None


def _echelon(rows: Iterable[Row]) -> dict[int, Row]:
    """Triangular (not fully reduced) basis of the row space, keyed by pivot column."""
    pivots: dict[int, Row] = {}
    for r in rows:
        _echelon_insert(pivots, dict(r))
    return pivots


def _back_substitute(pivots: dict[int, Row]) -> dict[int, Row]:
    """Fully reduce a triangular basis so non-pivot tails avoid pivot columns."""
    reduced: dict[int, Row] = {}
    for lead in sorted(pivots, reverse=True):
        row = dict(pivots[lead])
        for c in [c for c in row if c != lead and c in reduced]:
            a = row.pop(c)
            for cc, vv in reduced[c].items():
                if cc == c:
                    continue
                w = row.get(cc, Q(0)) - a * vv
                if w:
                    row[cc] = w
                else:
                    row.pop(cc, None)
        reduced[lead] = row
    return reduced


@dataclass(frozen=True)
class RrefResult:
    matrix: RationalMatrix
    rank: int
    pivot_cols: tuple[int, ...]


def rref(m: RationalMatrix) -> RrefResult:
    """Reduced row echelon form (canonical for the row space)."""
    reduced = _back_substitute(_echelon(m.rows))
    leads = sorted(reduced)
    rows = [reduced[c] for c in leads]
    return RrefResult(RationalMatrix(len(rows), m.ncols, rows), len(rows), tuple(leads))


def rank(m: RationalMatrix) -> int:
    return len(_echelon(m.rows))


class Subspace:
    """Subspace of Q^n, stored as the canonical RREF basis of its vectors."""

    __slots__ = ("ambient_dim", "basis", "pivot_cols", "_pivot_rows")

    def __init__(self, ambient_dim: int, reduced_rows: dict[int, Row]):
        """`reduced_rows` must be a fully reduced basis keyed by leading column:
        each row has leading coefficient 1 at its key and no support on other keys.
        Use `from_vectors` for arbitrary spanning sets.
        """
        self.ambient_dim = ambient_dim
        leads = sorted(reduced_rows)
        self.pivot_cols: tuple[int, ...] = tuple(leads)
        self.basis = RationalMatrix(len(leads), ambient_dim, [reduced_rows[c] for c in leads])
        self._pivot_rows = reduced_rows

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Mapping[int, object] | Sequence[object]]) -> "Subspace":
        rows: list[Row] = []
        for v in vectors:
            rows.append(_clean_row(v) if isinstance(v, Mapping) else row_from_sequence(v))
        for r in rows:
            if r and max(r) >= ambient_dim:
                raise ValueError("vector exceeds ambient dimension")
        return cls(ambient_dim, _back_substitute(_echelon(rows)))

    @classmethod
    def from_matrix_rows(cls, m: RationalMatrix) -> "Subspace":
        return cls(m.ncols, _back_substitute(_echelon(m.rows)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, {})

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, {i: {i: Q(1)} for i in range(ambient_dim)})

    # -- queries -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def reduce(self, vector: Mapping[int, object] | Sequence[object]) -> Row:
        """Residual of a vector after reduction against the basis (zero iff member)."""
        v = _clean_row(vector) if isinstance(vector, Mapping) else row_from_sequence(vector)
        if v and max(v) >= self.ambient_dim:
            raise ValueError("vector exceeds ambient dimension")
        for c in sorted(v):
            if c in self._pivot_rows and c in v:
                a = v.pop(c)
                for cc, vv in self._pivot_rows[c].items():
                    if cc == c:
                        continue
                    w = v.get(cc, Q(0)) - a * vv
                    if w:
                        v[cc] = w
                    else:
                        v.pop(cc, None)
        return v

    def contains(self, vector: Mapping[int, object] | Sequence[object]) -> bool:
        return not self.reduce(vector)

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(other.contains(row) for row in self.basis.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_vectors(self.ambient_dim, list(self.basis.rows) + list(other.basis.rows))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def membership(space: Subspace, vector: Mapping[int, object] | Sequence[object]) -> bool:
    """Exact membership test of a vector in a subspace."""
    return space.contains(vector)


def kernel_basis(m: RationalMatrix) -> Subspace:
    """Right kernel {x : m @ x = 0} as a subspace of Q^(ncols)."""
    res = rref(m)
    pivot_set = set(res.pivot_cols)
    free_cols = [c for c in range(m.ncols) if c not in pivot_set]
    vectors: list[Row] = []
    for f in free_cols:
        v: Row = {f: Q(1)}
        for prow, pcol in zip(res.matrix.rows, res.pivot_cols):
            a = prow.get(f)
            if a:
                v[pcol] = -a
        vectors.append(v)
    return Subspace.from_vectors(m.ncols, vectors)


def solve_homogeneous(rows: Iterable[Row], nunknowns: int) -> Subspace:
    """Kernel of the linear system given by sparse equation rows over `nunknowns`."""
    cleaned = [_clean_row(r) for r in rows]
    return kernel_basis(RationalMatrix(len(cleaned), nunknowns, cleaned))
