"""Finite slices of the Hochschild complexes and their homology tables.

Three families of complexes are assembled here:

* ``C_*(A, M)``, split by weight (the internal degree).  Each weight slice is
  finite and, for weights inside the algebra window, exact.
* ``C^*(A, M)``, split by map weight ``w(output) - w(arguments)``, with
  arguments restricted to total weight at most the window degree.  The
  restriction is a quotient complex, so its cohomology is an approximation
  for infinite algebras; reports flag it.
* The Hom complex ``C_*(E*, {}_a E*_b)`` for ungraded finite-dimensional A,
  graded by ``T = sum deg(slot) - n`` (differential b + delta raises T by
  one) and by total map weight, restricted to tensors with at most
  ``max_arity`` tail slots.  That restriction is a subcomplex, so cycles and
  boundaries found in it are genuine.
"""

import concurrent.futures
import itertools
import math
import os
from fractions import Fraction

from .algebra import Bimodule
from .chains import AlgebraContext, EndoContext, boundary_b, total_differential
from .cochains import delta_pieces, piece_weight
from .lincomb import fmt_coeff
from .linalg import ComplexError, ComplexSlice, IntegerEchelon, SparseMatrix, complex_homology


class WindowError(ValueError):
    pass


class Window:
    def __init__(self, max_arity, max_degree):
        if max_arity < 1 or max_degree < 1:
            raise WindowError("window bounds must be at least 1")
        self.max_arity = max_arity
        self.max_degree = max_degree

    def __repr__(self):
        return f"Window(max_arity={self.max_arity}, max_degree={self.max_degree})"


def num_threads():
    try:
        n = int(os.environ.get("HH_NUM_THREADS", "1"))
    except ValueError:
        raise WindowError("HH_NUM_THREADS must be an integer") from None
    return max(1, n)


# -- basis enumeration ------------------------------------------------------

def _by_weight(A, keys):
    out = {}
    for k in keys:
        out.setdefault(A.weights[k], []).append(k)
    return out


def _tails(groups, n, weight):
    """Ordered n-tuples of keys from ``groups`` (weight -> keys) of total weight."""
    if n == 0:
        if weight == 0:
            yield ()
        return
    for w in sorted(groups):
        if w > weight:
            break
        for k in groups[w]:
            for rest in _tails(groups, n - 1, weight - w):
                yield (k,) + rest


def chain_basis(A, n, weight):
    """Basis tensors (a_0, .., a_n) of C_n(A, M) of the given weight, in
    lexicographic order of basis indices."""
    heads = _by_weight(A, range(A.dim))
    tails = _by_weight(A, [k for k in range(A.dim) if k != A.unit])
    out = []
    for w0 in sorted(heads):
        if w0 > weight:
            break
        for a0 in heads[w0]:
            for t in _tails(tails, n, weight - w0):
                out.append((a0,) + t)
    out.sort()
    return out


def _check_weight_window(A, max_weight):
    if A.window is not None and max_weight > A.window:
        raise WindowError(
            f"internal degree {max_weight} lies beyond the algebra window {A.window}; "
            "that slice is not finite in this presentation")


def _weight_preserving(M):
    A = M.algebra
    for phi in (M.left, M.right):
        for i, img in phi.images.items():
            if any(A.weights[k] != A.weights[i] for k in img):
                return False
    return True


def _matrix(src, tgt, image_of):
    index = {b: i for i, b in enumerate(tgt)}
    entries = {}
    for j, b in enumerate(src):
        for key, c in image_of(b).items():
            if key not in index:
                raise ComplexError(f"differential leaves the slice at {key}")
            entries[(index[key], j)] = c
    return SparseMatrix(len(tgt), len(src), entries)


# -- complexes ---------------------------------------------------------------

class SlicedComplex:
    """A family of ComplexSlices indexed by internal degree."""

    def __init__(self, name, slices, window, kind, exact, notes=""):
        self.name = name
        self.slices = slices
        self.window = window
        self.kind = kind
        self.exact = exact
        self.notes = notes

    def __repr__(self):
        return f"SlicedComplex({self.name!r}, degrees={sorted(self.slices)})"


def _module_name(M):
    if M.untwisted:
        return "A"
    return f"{M.left.name}A{M.right.name}"


def _chain_slice(M, weight, max_arity):
    A = M.algebra
    ctx = AlgebraContext(M)
    top = max_arity + 1
    positions = {n: chain_basis(A, n, weight) for n in range(top + 1)}
    diffs = {}
    for n in range(1, top + 1):
        diffs[n] = _matrix(positions[n], positions[n - 1],
                           lambda key: boundary_b(ctx, {key: 1}))
    return ComplexSlice(positions, diffs, "chain", label=f"weight {weight}")


def assemble_chain_complex(A, M=None, w=None, workers=None):
    """C_n(A, M) for n <= max_arity + 1 in every weight <= max_degree.

    The extra position max_arity + 1 makes the homology at max_arity exact.
    """
    M = M or Bimodule(A)
    if A.differential is not None:
        raise ComplexError("the chain complex engine handles algebras without a differential")
    if not _weight_preserving(M):
        raise ComplexError("twists do not preserve weights; weight slices are not subcomplexes")
    _check_weight_window(A, w.max_degree)
    weights = list(range(w.max_degree + 1))
    workers = workers or num_threads()
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            built = list(pool.map(_chain_slice, [M] * len(weights), weights,
                                  [w.max_arity] * len(weights)))
    else:
        built = [_chain_slice(M, wt, w.max_arity) for wt in weights]
    slices = dict(zip(weights, built))
    # every position is a full basis of its weight, and the reported indices
    # stop one short of the top position, so each reported entry is exact
    exact = True
    return SlicedComplex(f"C_*({A.name}, {_module_name(M)})", slices, w, "chain", exact)


def cochain_basis(A, M, d, map_weight, max_arg_weight):
    """Elementary cochains (args, r) of arity d with w(r) - w(args) = map_weight
    and w(args) <= max_arg_weight."""
    tails = _by_weight(A, [k for k in range(A.dim) if k != A.unit])
    outs = _by_weight(A, range(A.dim))
    out = []
    for aw in range(max_arg_weight + 1):
        rw = aw + map_weight
        if rw not in outs:
            continue
        for args in _tails(tails, d, aw):
            for r in outs[rw]:
                out.append((args, r))
    out.sort()
    return out


def _restrict_args(A, pieces, max_arg_weight):
    return {k: c for k, c in pieces.items()
            if sum(A.weights[a] for a in k[0]) <= max_arg_weight}


def assemble_cochain_complex(A, M=None, w=None, map_weights=None):
    """C^d(A, M) for d <= max_arity + 1, split by map weight.

    Arguments are restricted to total weight <= max_degree; map weights are
    limited so that every value computed stays inside the algebra window.
    """
    M = M or Bimodule(A)
    if not _weight_preserving(M):
        raise ComplexError("twists do not preserve weights")
    W = w.max_degree
    top_w = max(A.weights)
    if A.window is not None:
        if W > A.window:
            raise WindowError(f"argument weight {W} lies beyond the algebra window {A.window}")
        hi = A.window - W
    else:
        hi = top_w
    if map_weights is None:
        map_weights = range(-W, hi + 1)
    slices = {}
    top = w.max_arity + 1
    for j in map_weights:
        if j > hi:
            raise WindowError(f"map weight {j} needs values beyond the algebra window")
        positions = {d: cochain_basis(A, M, d, j, W) for d in range(top + 1)}
        diffs = {}
        for d in range(top):
            diffs[d] = _matrix(positions[d], positions[d + 1],
                               lambda key: _restrict_args(A, delta_pieces(M, {key: 1}), W))
        slices[j] = ComplexSlice(positions, diffs, "cochain", label=f"map weight {j}")
    tails = [A.weights[k] for k in range(A.dim) if k != A.unit]
    exact = A.window is None and (not tails or min(tails) > 0) and W >= top * max(tails + [0])
    return SlicedComplex(f"C^*({A.name}, {_module_name(M)})", slices, w, "cochain", exact,
                         notes="" if exact else f"arguments of weight <= {W}")


def _piece_key(A, piece):
    args, r = piece
    return (len(args), args, r)


def hom_slot_pieces(A, max_slot_arity, head=False):
    """Elementary cochain pieces of arity <= max_slot_arity (tail slots
    exclude the unit zero-cochain)."""
    nonunit = [k for k in range(A.dim) if k != A.unit]
    out = []
    for d in range(max_slot_arity + 1):
        for args in itertools.product(nonunit, repeat=d):
            for r in range(A.dim):
                if not head and d == 0 and r == A.unit:
                    continue
                out.append((args, r))
    return out


def _check_hom_algebra(A):
    if A.window is not None or any(A.degrees):
        raise ComplexError("Hom-complex slices need an ungraded finite-dimensional algebra")


def hom_basis(A, n, total, map_weight, head_pieces, tail_pieces):
    """Tensors (P_0, .., P_n) with sum(arity) - n = total and fixed map weight."""
    target = total + n
    if target < 0:
        return []
    out = []

    def rec(prefix, left, mw, slots):
        if slots == 0:
            if left == 0 and mw == map_weight:
                out.append(tuple(prefix))
            return
        pool = head_pieces if not prefix else tail_pieces
        for p in pool:
            d = len(p[0])
            if d > left:
                continue
            rec(prefix + [p], left - d, mw + piece_weight(A, p), slots - 1)

    rec([], target, 0, n + 1)
    out.sort(key=lambda key: tuple(_piece_key(A, p) for p in key))
    return out


def hom_position_basis(A, max_arity, T, map_weight):
    max_slot = T + max_arity
    if max_slot < 0:
        return []
    heads = hom_slot_pieces(A, max_slot, head=True)
    tails = hom_slot_pieces(A, max_slot)
    basis = []
    for n in range(max_arity + 1):
        basis.extend(hom_basis(A, n, T, map_weight, heads, tails))
    return basis


def assemble_hom_complex(M, max_arity, totals, map_weight):
    """Positions T in ``totals`` (plus neighbours) of C_*(E*, {}_a E*_b) with
    at most ``max_arity`` tail slots, for ungraded finite-dimensional A."""
    A = M.algebra
    _check_hom_algebra(A)
    ctx = EndoContext(M)
    lo, hi = min(totals) - 1, max(totals) + 1
    positions = {T: hom_position_basis(A, max_arity, T, map_weight) for T in range(lo, hi + 1)}
    diffs = {}
    for T in range(lo, hi):
        diffs[T] = _matrix(positions[T], positions[T + 1],
                           lambda key: total_differential(ctx, {key: 1}))
    return ComplexSlice(positions, diffs, "cochain",
                        label=f"hom n<={max_arity} map weight {map_weight}")


class HomBoundaries:
    """Boundaries of the Hom complex at one (T, map weight), inside the
    subcomplex of tensors with at most ``max_arity`` tail slots.  Only the
    image of the incoming differential is built; the differential has
    integer entries, so elimination runs fraction-free."""

    def __init__(self, M, max_arity, T, map_weight):
        A = M.algebra
        _check_hom_algebra(A)
        ctx = EndoContext(M)
        self.index = {}
        self.echelon = IntegerEchelon()
        for key in hom_position_basis(A, max_arity, T - 1, map_weight):
            image = total_differential(ctx, {key: 1})
            vec = {self.index.setdefault(k, len(self.index)): c for k, c in image.items()}
            if vec:
                self.echelon.add(vec)

    def contains(self, chain):
        vec = {}
        for k, c in chain.items():
            if k not in self.index:
                return False
            vec[self.index[k]] = c
        # a rational chain is a boundary iff a nonzero multiple of it is
        den = 1
        for c in vec.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        return self.echelon.contains({k: c * den for k, c in vec.items()})


# -- reports -----------------------------------------------------------------

class HomologyReport:
    """dims and representatives per (homological index, internal degree)."""

    def __init__(self, complex_name, table, metadata):
        self.complex_name = complex_name
        self.table = table
        self.metadata = metadata

    def dims(self):
        return {k: v[0] for k, v in self.table.items()}

    def dim(self, index, degree):
        return self.table.get((index, degree), (0, []))[0]

    def by_index(self):
        out = {}
        for (i, _), (d, _) in sorted(self.table.items()):
            out[i] = out.get(i, 0) + d
        return out

    def to_csv(self):
        lines = ["complex,homologicalIndex,internalDegree,dimension"]
        for (i, deg), (d, _) in sorted(self.table.items()):
            lines.append(f'"{self.complex_name}",{i},{deg},{d}')
        return "\n".join(lines) + "\n"

    def to_markdown(self):
        degs = sorted({deg for _, deg in self.table})
        idxs = sorted({i for i, _ in self.table})
        head = [f"# {self.complex_name}", ""]
        for key in sorted(self.metadata):
            head.append(f"- {key}: {self.metadata[key]}")
        head.append("")
        head.append("| index \\ degree | " + " | ".join(str(d) for d in degs) + " |")
        head.append("|---" * (len(degs) + 1) + "|")
        for i in idxs:
            row = [str(self.dim(i, d)) for d in degs]
            head.append(f"| {i} | " + " | ".join(row) + " |")
        return "\n".join(head) + "\n"

    def representatives_text(self, label):
        lines = []
        for (i, deg), (d, reps) in sorted(self.table.items()):
            for r in reps:
                lines.append(f"({i},{deg}): {format_chain(r, label)}")
        return "\n".join(lines) + ("\n" if lines else "")


def format_chain(chain, label):
    terms = []
    for key, c in sorted(chain.items()):
        terms.append(f"{fmt_coeff(c)}*({'|'.join(label(k) for k in key)})")
    return " + ".join(terms) if terms else "0"


def homology_table(sc, indices=None):
    """HomologyReport of a SlicedComplex; ``indices`` limits the reported
    positions (default: the window's 0..max_arity)."""
    if indices is None:
        indices = range(sc.window.max_arity + 1)
    table = {}
    for deg in sorted(sc.slices):
        c = sc.slices[deg]
        groups = complex_homology(c)
        for i in indices:
            g = groups.get(i)
            if g is None:
                continue
            reps = [{g.basis[k]: v for k, v in sorted(vec.items())} for vec in g.representatives]
            table[(i, deg)] = (g.dimension, reps)
    meta = {"window": f"arity<={sc.window.max_arity}, degree<={sc.window.max_degree}",
            "exact": "yes" if sc.exact else "approximation",
            "orientation": sc.kind}
    if sc.notes:
        meta["notes"] = sc.notes
    return HomologyReport(sc.name, table, meta)


def hkr_dims_oracle(vars, form_degree, poly_degree):
    """dim of the weight-poly_degree part of Omega^form_degree over k[x_1..x_vars]."""
    rest = poly_degree - form_degree
    if rest < 0 or form_degree < 0 or form_degree > vars:
        return 0
    monomials = math.comb(rest + vars - 1, vars - 1) if vars > 0 else int(rest == 0)
    return monomials * math.comb(vars, form_degree)


def chain_to_vector(basis, chain):
    index = {b: i for i, b in enumerate(basis)}
    vec = {}
    for k, c in chain.items():
        if k not in index:
            raise ComplexError(f"tensor {k} is not in the slice basis")
        vec[index[k]] = Fraction(c) if not isinstance(c, int) else c
    return vec


def homology_class(sc, index, degree, chain):
    """Coordinates of the class of a cycle in terms of the report's
    representatives (empty dict for a boundary)."""
    c = sc.slices[degree]
    groups = complex_homology(c)
    g = groups[index]
    vec = chain_to_vector(g.basis, chain)
    if c.outgoing(index).apply(vec):
        raise ComplexError("chain is not a cycle")
    return g.coordinates(vec)
