"""Hochschild cochains: evaluation, cup, circle, bracket, delta, braces.

A cochain is stored as a flat table of *pieces* ``{(args, r): coeff}``: the
elementary multilinear map sending the basis tuple ``args`` to the basis
element ``e_r`` and every other basis tuple to zero.  Each piece is
homogeneous, so every sign rule is applied piece by piece and inhomogeneous
cochains need no special treatment.  ``args`` never contains the unit
(normalized cochains on the quotient of A by the scalars), except inside the
multiplication cochain ``m``, which is not normalized.

Gradings: for a piece, ``deg = (degree of the linear map) + arity`` and
``|D| = deg - 1``; for elements ``|a| = deg a - 1``.  The running sums
``eta_j = |a_1| + ... + |a_j|`` drive all Koszul signs.
"""

import itertools

from .algebra import Bimodule, AlgElem, MixedAlgebraError
from .lincomb import axpy, add_term


class CochainError(ValueError):
    pass


def piece_deg(A, key):
    args, r = key
    return A.degrees[r] - sum(A.degrees[a] for a in args) + len(args)


def piece_weight(A, key):
    args, r = key
    return A.weights[r] - sum(A.weights[a] for a in args)


def _eta(A, args):
    return sum(A.degrees[a] - 1 for a in args)


def _sgn(e):
    return -1 if e & 1 else 1


class Cochain:
    """A finitely supported Hochschild cochain with values in a bimodule."""

    __slots__ = ("module", "entries", "_by_args")

    def __init__(self, module, entries=None):
        if not isinstance(module, Bimodule):
            module = Bimodule(module)
        self.module = module
        A = module.algebra
        clean = {}
        for key, c in (entries or {}).items():
            if c:
                clean[key] = c
        self.entries = clean
        self._by_args = None

    @property
    def algebra(self):
        return self.module.algebra

    @classmethod
    def from_table(cls, module, table):
        """Build from {args_tuple: {r: coeff}} (or AlgElem values)."""
        if not isinstance(module, Bimodule):
            module = Bimodule(module)
        A = module.algebra
        entries = {}
        for args, value in table.items():
            if isinstance(value, AlgElem):
                value = value.coeffs
            args = tuple(args)
            if any(a == A.unit for a in args):
                raise CochainError("cochain arguments must be non-unit basis elements")
            for r, c in value.items():
                add_term(entries, (args, r), c)
        return cls(module, entries)

    @classmethod
    def zero_cochain(cls, module, element):
        if not isinstance(module, Bimodule):
            module = Bimodule(module)
        coeffs = element.coeffs if isinstance(element, AlgElem) else element
        return cls(module, {((), r): c for r, c in coeffs.items()})

    def __repr__(self):
        A = self.algebra
        if not self.entries:
            return "Cochain(0)"
        parts = []
        for (args, r), c in sorted(self.entries.items()):
            parts.append("%s*[%s -> %s]" % (c, ",".join(A.labels[a] for a in args), A.labels[r]))
        return "Cochain(" + " + ".join(parts) + ")"

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __bool__(self):
        return bool(self.entries)

    def _same(self, other):
        if other.algebra is not self.algebra:
            raise MixedAlgebraError("cochains over different algebras")

    def __add__(self, other):
        self._same(other)
        return Cochain(self.module, axpy(dict(self.entries), other.entries))

    def __sub__(self, other):
        self._same(other)
        return Cochain(self.module, axpy(dict(self.entries), other.entries, -1))

    def __neg__(self):
        return Cochain(self.module, {k: -c for k, c in self.entries.items()})

    def __rmul__(self, scalar):
        return Cochain(self.module, {k: scalar * c for k, c in self.entries.items()})

    __mul__ = __rmul__

    def arities(self):
        return sorted({len(args) for args, _ in self.entries})

    def is_homogeneous(self):
        A = self.algebra
        return len({(len(k[0]), piece_deg(A, k)) for k in self.entries}) <= 1

    def deg(self):
        """deg D for a homogeneous nonzero cochain."""
        A = self.algebra
        degs = {piece_deg(A, k) for k in self.entries}
        if len(degs) != 1:
            raise CochainError("deg is only defined for homogeneous nonzero cochains")
        return degs.pop()

    def by_args(self):
        if self._by_args is None:
            table = {}
            for (args, r), c in self.entries.items():
                table.setdefault(args, {})[r] = c
            self._by_args = table
        return self._by_args

    def value(self, args):
        """Value on a basis tuple (dict)."""
        return dict(self.by_args().get(tuple(args), {}))

    def restricted(self, module=None):
        """Drop pieces whose arguments contain the unit (normalize)."""
        A = self.algebra
        return Cochain(module or self.module,
                       {k: c for k, c in self.entries.items() if A.unit not in k[0]})

    def with_module(self, module):
        return Cochain(module, self.entries)


# -- evaluation ------------------------------------------------------------

def eval_cochain(D, args):
    """Multilinear evaluation on element arguments (AlgElem or dicts)."""
    A = D.algebra
    vecs = []
    for a in args:
        if isinstance(a, AlgElem):
            if a.algebra is not A:
                raise MixedAlgebraError("argument from another algebra")
            a = a.coeffs
        vecs.append(a)
    check_arity(D, len(vecs))
    out = {}
    table = D.by_args()
    for combo in itertools.product(*[sorted(v.items()) for v in vecs]):
        key = tuple(i for i, _ in combo)
        if any(i == A.unit for i in key):
            continue
        val = table.get(key)
        if not val:
            continue
        c = 1
        for _, x in combo:
            c *= x
        axpy(out, val, c)
    return AlgElem(A, out)


def check_arity(D, n):
    if D.entries and n not in D.arities():
        raise CochainError(f"cochain has arities {D.arities()}, got {n} arguments")


# -- cup, brace, circle, bracket ------------------------------------------

def cup_pieces(A, D, E):
    """(D u E)(a_1..a_{d+e}) = (-1)^{deg E * eta_d} D(a_1..a_d) E(a_{d+1}..)."""
    out = {}
    for (t, r), c in D.items():
        eta = _eta(A, t)
        for (s, u), e in E.items():
            sign = _sgn(piece_deg(A, (s, u)) * eta)
            prod = A.mul_basis(r, u)
            if not prod:
                continue
            args = t + s
            for w, x in prod.items():
                add_term(out, (args, w), sign * c * e * x)
    return out


def cup(D, E):
    A = D.algebra
    if E.algebra is not A:
        raise MixedAlgebraError("cochains over different algebras")
    if not (D.module.right.is_identity() and E.module.left.is_identity()) and \
            not _twists_compose(D.module, E.module):
        raise CochainError("incompatible twists for the cup product")
    module = Bimodule(A, D.module.left, E.module.right)
    return Cochain(module, cup_pieces(A, D.entries, E.entries))


def _twists_compose(M, N):
    return M.right.images == N.left.images


def _brace_piece(A, p0, c0, subs, out, scale=1):
    """Add c0 * prod(c_p) * sign * p0{p_1..p_m} into out for pieces subs."""
    t0, r0 = p0
    m = len(subs)
    n0 = len(t0)
    if m > n0:
        return
    sub_degs = [piece_deg(A, p) - 1 for p, _ in subs]
    for slots in itertools.combinations(range(n0), m):
        ok = True
        for k, s in enumerate(slots):
            if t0[s] != subs[k][0][1]:
                ok = False
                break
        if not ok:
            continue
        args = []
        sign_exp = 0
        coeff = c0 * scale
        prev = 0
        eta = 0
        for k, s in enumerate(slots):
            for a in t0[prev:s]:
                args.append(a)
                eta += A.degrees[a] - 1
            sign_exp += eta * sub_degs[k]
            (tp, _), cp = subs[k]
            coeff *= cp
            for a in tp:
                args.append(a)
                eta += A.degrees[a] - 1
            prev = s + 1
        args.extend(t0[prev:])
        add_term(out, (tuple(args), r0), _sgn(sign_exp) * coeff)


def brace_pieces(A, D0, Ds, scale=1):
    out = {}
    lists = [sorted(D.items()) for D in Ds]
    for p0, c0 in D0.items():
        if len(Ds) > len(p0[0]):
            continue
        for subs in itertools.product(*lists):
            _brace_piece(A, p0, c0, subs, out, scale)
    return out


def brace(D0, Ds):
    """D0{D1,...,Dm}: ordered, non-overlapping insertions with Koszul signs."""
    A = D0.algebra
    for D in Ds:
        if D.algebra is not A:
            raise MixedAlgebraError("cochains over different algebras")
    if D0.entries and len(Ds) > max(D0.arities()):
        raise CochainError(f"cannot insert {len(Ds)} cochains into arity {max(D0.arities())}")
    if not Ds:
        return Cochain(D0.module, dict(D0.entries))
    return Cochain(D0.module, brace_pieces(A, D0.entries, [D.entries for D in Ds]))


def circle(D, E):
    A = D.algebra
    return Cochain(D.module, brace_pieces(A, D.entries, [E.entries]))


def bracket_pieces(A, D, E):
    out = brace_pieces(A, D, [E])
    for p, c in D.items():
        dp = piece_deg(A, p) - 1
        for q, e in E.items():
            dq = piece_deg(A, q) - 1
            axpy(out, brace_pieces(A, {q: e}, [{p: c}]), -_sgn(dp * dq))
    return out


def bracket(D, E):
    """Returns (D o E, [D, E]) with [D,E] = D o E - (-1)^{|D||E|} E o D."""
    if not (D.module.untwisted and E.module.untwisted):
        raise CochainError("circle and bracket are defined for untwisted cochains only")
    A = D.algebra
    if E.algebra is not A:
        raise MixedAlgebraError("cochains over different algebras")
    return circle(D, E), Cochain(D.module, bracket_pieces(A, D.entries, E.entries))


def mult_cochain(A):
    """m(a1, a2) = (-1)^{deg a1} a1 a2 on all basis pairs (not normalized)."""
    entries = {}
    for i in range(A.dim):
        for j in range(A.dim):
            for k, c in A.mul_basis(i, j).items():
                entries[((i, j), k)] = _sgn(A.degrees[i]) * c
    return Cochain(Bimodule(A), entries)


# -- delta -----------------------------------------------------------------

def delta_pieces(M, D):
    """Expanded Hochschild differential on C^*(A, M), M a twisted bimodule."""
    A = M.algebra
    out = {}
    nonunit = A.nonunit
    for (t, r), c in D.items():
        dD = piece_deg(A, (t, r)) - 1
        d = len(t)
        # (-1)^{|a1||D| + |a1| + 1} a1 . D(a2..)
        for a in nonunit:
            prod = M.act_left(a, {r: 1})
            if not prod:
                continue
            ea = A.degrees[a] - 1
            sign = _sgn(ea * dD + ea + 1)
            args = (a,) + t
            for w, x in prod.items():
                add_term(out, (args, w), sign * c * x)
        # sum_j (-1)^{|D| + eta_j} D(.., a_j a_{j+1}, ..)
        for j in range(d):
            for u, v, x in A.factorizations(t[j]):
                args = t[:j] + (u, v) + t[j + 1:]
                eta = _eta(A, args[:j + 1])
                add_term(out, (args, r), _sgn(dD + eta) * c * x)
        # (-1)^{|D| + eta_d + 1} D(a1..ad) . a_{d+1}
        eta_d = _eta(A, t)
        for a in nonunit:
            prod = M.act_right({r: 1}, a)
            if not prod:
                continue
            sign = _sgn(dD + eta_d + 1)
            args = t + (a,)
            for w, x in prod.items():
                add_term(out, (args, w), sign * c * x)
    return out


def hoch_delta(D):
    return Cochain(D.module, delta_pieces(D.module, D.entries))


def delta_via_bracket(D):
    """[m, D] restricted to normalized arguments (untwisted only)."""
    A = D.algebra
    m = mult_cochain(A)
    return Cochain(D.module, bracket_pieces(A, m.entries, D.entries)).restricted()


def partial_pieces(A, D):
    """[d, D] for a dga (A, d): d seen as a 1-cochain with |d| = 1."""
    out = {}
    for (t, r), c in D.items():
        dD = piece_deg(A, (t, r)) - 1
        for w, x in A.d(r).items():
            add_term(out, (t, w), c * x)
        # - (-1)^{|D|} D o d
        for j in range(len(t)):
            for b in A.nonunit:
                x = A.d(b).get(t[j])
                if not x:
                    continue
                args = t[:j] + (b,) + t[j + 1:]
                eta = _eta(A, args[:j])
                add_term(out, (args, r), -_sgn(dD) * _sgn(eta) * c * x)
    return out


def partial_cochain(D):
    """The action dD = [d, D] of the algebra differential on cochains."""
    return Cochain(D.module, partial_pieces(D.algebra, D.entries))


# -- twisting actions ------------------------------------------------------

def act_twist_pieces(A, phi, D, side):
    out = {}
    if side == "left":
        for (t, r), c in D.items():
            for w, x in phi.images[r].items():
                add_term(out, (t, w), c * x)
        return out
    if side != "right":
        raise ValueError("side must be 'left' or 'right'")
    # (D phi)(s) = D(phi s_1, ..., phi s_d): piece (t, r) contributes to every
    # s with phi(s_i) having a t_i component.
    for (t, r), c in D.items():
        choices = []
        for a in t:
            pre = [(s, x) for s, x in phi.preimages(a) if s != A.unit]
            choices.append(pre)
        for combo in itertools.product(*choices):
            coeff = c
            for _, x in combo:
                coeff *= x
            add_term(out, (tuple(s for s, _ in combo), r), coeff)
    return out


# -- brace composition and the lift to cochains of E* ------------------------

def _layouts(k, l):
    """Ways to distribute F_1..F_l (in order) around and into E_1..E_k.

    Each layout is a list of items ``("F", q)`` (inserted directly) or
    ``("E", p, qs)`` (E_p with F_q, q in qs, inserted into it).
    """
    def rec(p, q):
        if p == k and q == l:
            yield []
            return
        if q < l:
            for rest in rec(p, q + 1):
                yield [("F", q)] + rest
        if p < k:
            for j in range(q, l + 1):
                for rest in rec(p + 1, j):
                    yield [("E", p, tuple(range(q, j)))] + rest
    yield from rec(0, 0)


def _brace_or_self(A, D, subs):
    return brace_pieces(A, D, subs) if subs else dict(D)


def brace_composition_pieces(A, D, Es, Fs):
    """Expanded form of (D{E_1..E_k}){F_1..F_l} as a sum of single braces.

    The sign of a term is (-1)^{sum_p |E_p| * (sum of |F_q| over all F_q
    that precede the contents of E_p)}; the F_q placed inside an earlier E
    count as preceding.
    """
    out = {}
    for e_pieces in itertools.product(*[sorted(E.items()) for E in Es]):
        for f_pieces in itertools.product(*[sorted(F.items()) for F in Fs]):
            coeff = 1
            for _, c in e_pieces + f_pieces:
                coeff *= c
            sE = [piece_deg(A, p) - 1 for p, _ in e_pieces]
            sF = [piece_deg(A, p) - 1 for p, _ in f_pieces]
            for layout in _layouts(len(Es), len(Fs)):
                subs = []
                exp = 0
                before = 0
                for item in layout:
                    if item[0] == "F":
                        subs.append({f_pieces[item[1]][0]: 1})
                        before += sF[item[1]]
                        continue
                    _, p, qs = item
                    exp += sE[p] * before
                    before += sum(sF[q] for q in qs)
                    subs.append(_brace_or_self(A, {e_pieces[p][0]: 1},
                                               [{f_pieces[q][0]: 1} for q in qs]))
                axpy(out, _brace_or_self(A, D, subs), _sgn(exp) * coeff)
    return out


def brace_composition(D, Es, Fs):
    """Right-hand side of the composition rule for braces; equals
    ``brace(brace(D, Es), Fs)``."""
    return Cochain(D.module, brace_composition_pieces(D.algebra, D.entries,
                                                      [E.entries for E in Es],
                                                      [F.entries for F in Fs]))


class LiftedCochain:
    """D^(k): the k-cochain (F_1..F_k) -> D{F_1..F_k} on the algebra E*_A.

    As a cochain of E*_A it has the same ``deg`` as D.
    """

    def __init__(self, D, k):
        if k < 0:
            raise CochainError("k must be nonnegative")
        if D.entries and k > max(D.arities()):
            raise CochainError(f"k = {k} exceeds the arity of D")
        self.D = D
        self.k = k

    def __repr__(self):
        return f"LiftedCochain({self.D!r}, k={self.k})"

    def __call__(self, *Fs):
        if len(Fs) != self.k:
            raise CochainError(f"D^({self.k}) takes {self.k} arguments, got {len(Fs)}")
        for F in Fs:
            if F.algebra is not self.D.algebra:
                raise MixedAlgebraError("cochains over different algebras")
        if not Fs:
            return Cochain(self.D.module, dict(self.D.entries))
        return brace(self.D, list(Fs))


def lift_to_endo(D, k):
    return LiftedCochain(D, k)


def _homog_shift(A, pieces):
    degs = {piece_deg(A, p) - 1 for p in pieces}
    if len(degs) > 1:
        raise CochainError("expected a homogeneous cochain")
    return degs.pop() if degs else 0


def lifted_cup(D, E, Fs):
    """(sum_i D^(i) u E^(k-i))(F_1..F_k), the cup being the one of cochains
    on E*_A: (-1)^{deg E * (|F_1|+..+|F_i|)} D{F_1..F_i} u E{F_i+1..F_k}."""
    A = D.algebra
    degE = _homog_shift(A, E.entries) + 1
    shifts = [_homog_shift(A, F.entries) for F in Fs]
    out = {}
    for i in range(len(Fs) + 1):
        left = _brace_or_self(A, D.entries, [F.entries for F in Fs[:i]])
        right = _brace_or_self(A, E.entries, [F.entries for F in Fs[i:]])
        axpy(out, cup_pieces(A, left, right), _sgn(degE * sum(shifts[:i])))
    return Cochain(Bimodule(A), out)


def lifted_differential(D, Fs):
    """((delta + d) sum_k D^(k))(F_1..F_k) computed on E*_A, where delta is
    the Hochschild differential of E*_A (product: cup) and d = [delta_A, .]
    comes from the differential of the dga E*_A."""
    A = D.algebra
    M = Bimodule(A)
    sX = _homog_shift(A, D.entries)
    Fs = [F.entries for F in Fs]
    shifts = [_homog_shift(A, F) for F in Fs]
    k = len(Fs)
    out = {}
    if k:
        s1 = shifts[0]
        axpy(out, cup_pieces(A, Fs[0], _brace_or_self(A, D.entries, Fs[1:])),
             _sgn(s1 * sX + s1 + 1))
        for j in range(k - 1):
            prod = cup_pieces(A, Fs[j], Fs[j + 1])
            axpy(out, _brace_or_self(A, D.entries, Fs[:j] + [prod] + Fs[j + 2:]),
                 _sgn(sX + sum(shifts[:j + 1])))
        axpy(out, cup_pieces(A, _brace_or_self(A, D.entries, Fs[:k - 1]), Fs[k - 1]),
             _sgn(sX + sum(shifts[:k - 1]) + 1))
    axpy(out, delta_pieces(M, _brace_or_self(A, D.entries, Fs)))
    for j in range(k):
        axpy(out, _brace_or_self(A, D.entries, Fs[:j] + [delta_pieces(M, Fs[j])] + Fs[j + 1:]),
             -_sgn(sX + sum(shifts[:j])))
    return Cochain(M, out)
