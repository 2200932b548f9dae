"""Exact sparse linear algebra over the rationals and homology of finite complexes."""

import math
from fractions import Fraction

from .lincomb import axpy


class ShapeError(ValueError):
    pass


class ComplexError(ValueError):
    pass


class SparseMatrix:
    """rows x cols matrix stored as {(row, col): coeff} without zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows)
                                      for j, v in enumerate(r) if v})

    @classmethod
    def from_columns(cls, nrows, columns):
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(nrows, len(columns), entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column_dicts(self):
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def to_dense(self):
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            dense[r][c] = v
        return dense

    def is_zero(self):
        return not self.entries

    def apply(self, vec):
        """Matrix times a sparse column vector {col: coeff}."""
        cols = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, []).append((r, v))
        out = {}
        for c, x in vec.items():
            for r, v in cols.get(c, ()):
                axpy(out, {r: v}, x)
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        left_rows = {}
        for (r, c), v in self.entries.items():
            left_rows.setdefault(r, []).append((c, v))
        right_rows = {}
        for (r, c), v in other.entries.items():
            right_rows.setdefault(r, []).append((c, v))
        out = {}
        for r, terms in left_rows.items():
            for k, v in terms:
                for c, w in right_rows.get(k, ()):
                    key = (r, c)
                    new = out.get(key, 0) + v * w
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
        return SparseMatrix(self.rows, other.cols, out)

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})


class Echelon:
    """Incrementally built row-echelon basis of a subspace of sparse vectors.

    Each stored row is normalized so that its smallest key (the pivot) has
    coefficient 1.  With ``track=True`` every row also carries the combination
    of inserted vectors (by insertion tag) that produced it.
    """

    def __init__(self, track=False):
        self.rows = {}
        self.track = track
        self.tags = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, tag=None):
        """Reduce vec against stored rows; returns (remainder, combination)."""
        vec = dict(vec)
        comb = dict(tag) if tag is not None else {}
        while vec:
            piv = min(vec)
            row = self.rows.get(piv)
            if row is None:
                break
            c = vec[piv]
            axpy(vec, row, -c)
            if self.track:
                axpy(comb, self.tags[piv], -c)
        return vec, comb

    def add(self, vec, tag=None):
        """Insert vec; returns True if it enlarged the span."""
        rem, comb = self.reduce(vec, tag)
        if not rem:
            return False
        piv = min(rem)
        inv = Fraction(1, 1) / rem[piv]
        row = {k: _norm(v * inv) for k, v in rem.items()}
        self.rows[piv] = row
        if self.track:
            self.tags[piv] = {k: _norm(v * inv) for k, v in comb.items()}
        return True

    def contains(self, vec):
        rem, _ = self.reduce(vec)
        return not rem


class IntegerEchelon:
    """Row-echelon span of integer sparse vectors, eliminated without
    fractions: a reduction step is ``v <- p v - c row`` followed by division
    by the content, which keeps every stored row primitive.  Membership in
    the rational span is decided exactly."""

    def __init__(self):
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        vec = {k: _as_int(v) for k, v in vec.items() if v}
        rows = self.rows
        while vec:
            piv = min(vec)
            row = rows.get(piv)
            if row is None:
                break
            p = row[piv]
            c = vec[piv]
            g = math.gcd(p, c)
            p, c = p // g, c // g
            out = {}
            for k, v in vec.items():
                out[k] = p * v
            for k, v in row.items():
                new = out.get(k, 0) - c * v
                if new:
                    out[k] = new
                else:
                    out.pop(k, None)
            vec = _primitive(out)
        return vec

    def add(self, vec):
        rem = self.reduce(vec)
        if not rem:
            return False
        self.rows[min(rem)] = rem
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def _as_int(x):
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError("IntegerEchelon needs integer entries")
        return x.numerator
    return int(x)


def _primitive(vec):
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def sparse_rank(m):
    ech = Echelon()
    for row in m.row_dicts():
        if row:
            ech.add(row)
    return len(ech)


def rref(rows):
    """Reduced row echelon form of a list of sparse rows: {pivot: row}."""
    ech = Echelon()
    for row in rows:
        if row:
            ech.add(row)
    pivots = sorted(ech.rows)
    reduced = {}
    for piv in reversed(pivots):
        row = dict(ech.rows[piv])
        for other in list(row):
            if other != piv and other in reduced:
                axpy(row, reduced[other], -row[other])
        reduced[piv] = row
    return reduced


def kernel_basis(m):
    """Basis of {v : m v = 0} as sparse vectors {col: coeff}, exact."""
    red = rref(m.row_dicts())
    pivots = set(red)
    basis = []
    for free in range(m.cols):
        if free in pivots:
            continue
        vec = {free: 1}
        for piv, row in red.items():
            c = row.get(free)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return basis


def image_basis(m):
    ech = Echelon()
    for col in m.column_dicts():
        if col:
            ech.add(col)
    return [dict(r) for _, r in sorted(ech.rows.items())]


class ComplexSlice:
    """A finite (co)chain complex: bases per position and sparse differentials.

    ``differentials[i]`` is the matrix of the differential *leaving* position
    ``i``: to ``i - 1`` for ``orientation="chain"``, to ``i + 1`` for
    ``"cochain"``.  Missing differentials are zero maps.  The constructor
    verifies shapes and that consecutive differentials compose to zero.
    """

    def __init__(self, positions, differentials, orientation="chain", check=True, label=""):
        if orientation not in ("chain", "cochain"):
            raise ComplexError("orientation must be 'chain' or 'cochain'")
        self.positions = {i: list(basis) for i, basis in positions.items()}
        self.differentials = dict(differentials)
        self.orientation = orientation
        self.label = label
        step = -1 if orientation == "chain" else 1
        self.step = step
        for i, d in self.differentials.items():
            src = len(self.positions.get(i, ()))
            tgt = len(self.positions.get(i + step, ()))
            if d.cols != src or d.rows != tgt:
                raise ShapeError(
                    f"differential at {i} is {d.rows}x{d.cols}, expected {tgt}x{src}")
        if check:
            for i, d in self.differentials.items():
                nxt = self.differentials.get(i + step)
                if nxt is not None and not (nxt @ d).is_zero():
                    raise ComplexError(f"d o d != 0 at position {i}")

    def dim(self, i):
        return len(self.positions.get(i, ()))

    def outgoing(self, i):
        d = self.differentials.get(i)
        if d is None:
            return SparseMatrix(self.dim(i + self.step), self.dim(i))
        return d

    def incoming(self, i):
        d = self.differentials.get(i - self.step)
        if d is None:
            return SparseMatrix(self.dim(i), self.dim(i - self.step))
        return d


class HomologyGroup:
    """Homology at one position: dimension, representative cycles, class map."""

    def __init__(self, index, basis, dimension, representatives, image, reps_echelon):
        self.index = index
        self.basis = basis
        self.dimension = dimension
        self.representatives = representatives
        self._image = image
        self._reps = reps_echelon

    def is_boundary(self, vec):
        return self._image.contains(vec)

    def coordinates(self, vec):
        """Coordinates of the class of a cycle in terms of the representatives."""
        rem, comb = self._reps.reduce(vec, {})
        if rem:
            raise ComplexError("vector is not a cycle of this position")
        return {k: -v for k, v in comb.items()}


def complex_homology(c):
    """{position: HomologyGroup} for every position of a ComplexSlice."""
    out = {}
    for i in sorted(c.positions):
        dout = c.outgoing(i)
        din = c.incoming(i)
        image = Echelon()
        for col in din.column_dicts():
            if col:
                image.add(col)
        # image rows carry an empty tag so they never show up in class coordinates
        reps_ech = Echelon(track=True)
        for piv, row in image.rows.items():
            reps_ech.add(row, {})
        reps = []
        for vec in kernel_basis(dout):
            if reps_ech.add(vec, {len(reps): 1}):
                reps.append(vec)
        out[i] = HomologyGroup(i, c.positions[i], len(reps), reps, image, reps_ech)
    return out
