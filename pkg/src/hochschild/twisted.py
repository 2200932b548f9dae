"""Twisted coefficients: cochains in {}_a E_b = C^*(A, {}_a A_b), the two
automorphism actions, the sandwich bimodule structure, the twisted pairings
and the k[x] dilation example.

Chains of the Hom complex C_*(E*, {}_a E_b) are ordinary chain dicts for an
:class:`EndoContext` over ``Bimodule(A, a, b)``.
"""

import itertools
from fractions import Fraction

from .algebra import Bimodule, MixedAlgebraError, identity_automorphism
from .chains import (AlgebraContext, EndoContext, Evaluation, _sgn, bullet_chain,
                     chain_degree, double_brace_pieces, total_differential)
from .cochains import Cochain, act_twist_pieces, cup_pieces, delta_pieces
from .families import dilation, polynomial
from .lincomb import axpy, normalize
from .linalg import SparseMatrix, kernel_basis


class TwistError(ValueError):
    pass


def same_twist(phi, psi):
    return phi.algebra is psi.algebra and phi.images == psi.images


def act_twist(side, phi, D):
    """``left``: (phi D)(a..) = phi(D(a..)); ``right``: (D phi)(a..) = D(phi a_1, ..).

    For D in E*_A both land in {}_phi E_phi and commute with delta.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    A = D.algebra
    if phi.algebra is not A:
        raise MixedAlgebraError("automorphism over a different algebra")
    if not D.module.untwisted:
        raise TwistError("the automorphism actions are defined on untwisted cochains")
    return Cochain(Bimodule(A, phi, phi), act_twist_pieces(A, phi, D.entries, side))


def sandwich(D, M, E):
    """D.M.E = (D alpha) u M u (beta E) for M in {}_a E_b and D, E in E*_A."""
    A = M.algebra
    for X in (D, E):
        if X.algebra is not A:
            raise MixedAlgebraError("cochains over different algebras")
        if not X.module.untwisted:
            raise TwistError("outer factors of the sandwich must be untwisted")
    alpha, beta = M.module.left, M.module.right
    left = act_twist_pieces(A, alpha, D.entries, "right")
    right = act_twist_pieces(A, beta, E.entries, "left")
    return Cochain(M.module, cup_pieces(A, cup_pieces(A, left, M.entries), right))


def double_brace_cyclic(Dm, cyc, marked, alpha, beta):
    """Dm{{A_q, .., A_n, A_0, A_1, .., A_i0}} with ``cyc[marked]`` the module
    slot A_0: arguments and insertions before A_0 are read through alpha,
    those after it through beta."""
    if not cyc or not 0 <= marked < len(cyc):
        raise TwistError("exactly one marked slot is needed")
    A = Dm.algebra
    out = {}
    lists = [sorted(C.entries.items()) for C in cyc]
    for combo in itertools.product(*[sorted(Dm.entries.items())], *lists):
        (p, c0), rest = combo[0], combo[1:]
        coeff = c0
        for _, c in rest:
            coeff *= c
        pieces = [k for k, _ in rest]
        val = double_brace_pieces(A, p, pieces[:marked], pieces[marked],
                                  pieces[marked + 1:], alpha, beta)
        for k, v in val.items():
            out[k] = out.get(k, 0) + coeff * v
    out = {k: v for k, v in out.items() if v}
    return Cochain(Bimodule(A, alpha, beta), out)


# -- twisted pairings -------------------------------------------------------

def twisted_bullet_chain(a, x, a_module, x_module):
    """a . x for a in C_*(A, A_alpha) and x in C_*(E*, {}_alpha E_beta); the
    result is a chain of C_*(A, A_beta).  Returns (chain, result_module)."""
    A = a_module.algebra
    if x_module.algebra is not A:
        raise MixedAlgebraError("chains over different algebras")
    if not a_module.left.is_identity():
        raise TwistError("the left factor must have coefficients in A_alpha")
    if not same_twist(a_module.right, x_module.left):
        raise TwistError("twist mismatch: A_alpha needs a right factor over (alpha, beta)")
    ev = Evaluation(AlgebraContext(a_module))
    out_module = Bimodule(A, identity_automorphism(A), x_module.right)
    return bullet_chain(ev, a, x), out_module


def twisted_bullet_hom(x, y, x_module, y_module):
    """x . y for x over (alpha, beta) and y over (beta, gamma); the result is
    a chain of C_*(E*, {}_alpha E_gamma).  Returns (chain, result_module)."""
    A = x_module.algebra
    if y_module.algebra is not A:
        raise MixedAlgebraError("chains over different algebras")
    if not same_twist(x_module.right, y_module.left):
        raise TwistError("twist mismatch: middle automorphisms differ")
    ev = Evaluation(EndoContext(x_module))
    return bullet_chain(ev, x, y), Bimodule(A, x_module.left, y_module.right)


def twisted_chain_map_residual(a, x, a_module, x_module):
    """b(a.x) - (ba).x - (-1)^{deg a} a.((b+delta)x) for the chain version."""
    prod, out_module = twisted_bullet_chain(a, x, a_module, x_module)
    cin = AlgebraContext(a_module)
    cout = AlgebraContext(out_module)
    cx = EndoContext(x_module)
    out = total_differential(cout, prod)
    axpy(out, twisted_bullet_chain(total_differential(cin, a), x, a_module, x_module)[0], -1)
    dx = total_differential(cx, x)
    for key, c in a.items():
        axpy(out, twisted_bullet_chain({key: c}, dx, a_module, x_module)[0],
             -_sgn(chain_degree(cin, key)))
    return out


def twisted_hom_residual(x, y, x_module, y_module):
    """The same identity for the Hom-complex pairing (b + delta on all three)."""
    prod, out_module = twisted_bullet_hom(x, y, x_module, y_module)
    cx, cy, co = EndoContext(x_module), EndoContext(y_module), EndoContext(out_module)
    out = total_differential(co, prod)
    axpy(out, twisted_bullet_hom(total_differential(cx, x), y, x_module, y_module)[0], -1)
    dy = total_differential(cy, y)
    for key, c in x.items():
        axpy(out, twisted_bullet_hom({key: c}, dy, x_module, y_module)[0],
             -_sgn(chain_degree(cx, key)))
    return out


# -- the k[x] dilation example -----------------------------------------------

class DilationData:
    """Twisted 1-cocycle D_ab on k[x] and the Hom-complex cycle built from it."""

    def __init__(self, algebra, alpha, beta, cocycle, coefficients, cycle, printed_cycle, module):
        self.algebra = algebra
        self.alpha = alpha
        self.beta = beta
        self.cocycle = cocycle
        self.coefficients = coefficients
        self.cycle = cycle
        self.printed_cycle = printed_cycle
        self.module = module

    def __repr__(self):
        return f"DilationData(alpha={self.alpha}, beta={self.beta}, c={self.coefficients})"


def closed_form_coefficient(alpha, beta, n):
    """c_n = (alpha^n - beta^n) / (alpha - beta)."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return normalize((alpha ** n - beta ** n) / (alpha - beta))


def cycle_coefficient(alpha, beta, form="closed"):
    """Coefficient k of the unit in (D_ab, x) + k * 1.

    ``closed`` is (1-beta)/(alpha-beta), the value for which the element is a
    (b+delta)-cycle with the sign conventions used here; ``printed`` is the
    opposite value (beta-1)/(alpha-beta), kept for comparison.
    """
    k = (Fraction(beta) - 1) / (Fraction(alpha) - Fraction(beta))
    if form == "printed":
        return normalize(k)
    if form == "closed":
        return normalize(-k)
    raise ValueError("form must be 'closed' or 'printed'")


def _weight_minus_one_cocycle(A, module, max_degree):
    """Solve delta D = 0 for 1-cochains D(x^n) = c_n x^{n-1}, n <= max_degree,
    where the cocycle equation is imposed on pairs (x^p, x^q), p + q <= max_degree."""
    cols = list(range(1, max_degree + 1))
    pieces = [((n,), n - 1) for n in cols]
    rows = {}
    row_keys = []
    entries = {}
    for j, piece in enumerate(pieces):
        for key, c in delta_pieces(module, {piece: 1}).items():
            args, _ = key
            if sum(A.weights[a] for a in args) > max_degree:
                continue
            if key not in rows:
                rows[key] = len(row_keys)
                row_keys.append(key)
            entries[(rows[key], j)] = c
    m = SparseMatrix(max(len(row_keys), 1), len(pieces), entries)
    return pieces, kernel_basis(m)


def dilation_generators(alpha, beta, max_degree=8, algebra=None):
    """D_ab solving the twisted cocycle condition on the window, normalized by
    D(x) = 1, and the Hom-complex element (D_ab, x) + k * 1 for both values
    of k in :func:`cycle_coefficient`; ``cycle`` is the closed one."""
    alpha, beta = normalize(Fraction(alpha)), normalize(Fraction(beta))
    if alpha == beta:
        raise TwistError("dilation parameters must differ")
    if alpha == 0 or beta == 0:
        raise TwistError("dilation parameters must be nonzero")
    if max_degree < 2:
        raise TwistError("window too small to determine the cocycle")
    A = algebra or polynomial(1, max_degree)
    if A.window is not None and A.window < max_degree:
        raise TwistError("algebra window smaller than the requested degree")
    a_phi, b_phi = dilation(A, alpha), dilation(A, beta)
    module = Bimodule(A, a_phi, b_phi)
    pieces, basis = _weight_minus_one_cocycle(A, module, max_degree)
    if len(basis) != 1:
        raise TwistError(f"expected a one-dimensional space of cocycles, found {len(basis)}")
    vec = basis[0]
    first = vec.get(0)
    if not first:
        raise TwistError("cocycle vanishes on x; window too small")
    coeffs = {n: normalize(Fraction(vec.get(j, 0)) / first) for j, n in
              enumerate(range(1, max_degree + 1))}
    D = Cochain(module, {pieces[n - 1]: c for n, c in coeffs.items() if c})
    x = A.index("x")
    unit_piece = ((), A.unit)

    def element(k):
        out = {(piece, ((), x)): c for piece, c in D.entries.items()}
        if k:
            out[(unit_piece,)] = k
        return out

    return DilationData(A, alpha, beta, D, coeffs,
                        element(cycle_coefficient(alpha, beta, "closed")),
                        element(cycle_coefficient(alpha, beta, "printed")), module)


def window_interior(A, chain, max_args_weight):
    """Restrict a Hom-complex chain to keys whose total argument weight is at
    most ``max_args_weight`` (b and delta never lower this weight)."""
    out = {}
    for key, c in chain.items():
        w = sum(A.weights[a] for piece in key for a in piece[0])
        if w <= max_args_weight:
            out[key] = c
    return out


# -- composition rules for the dilation example ---------------------------------

def h0_coordinate(A, module, chain):
    """Coordinate of a 0-chain (or the 0-part of a chain) of C_*(A, module)
    in H_0 at weight 0, after checking that its positive-weight parts are
    boundaries.  For dilations beta != 1 the class of (f) is f(0) * 1_beta."""
    from .homology import Window, assemble_chain_complex, homology_class
    zero = {k: c for k, c in chain.items() if len(k) == 1}
    if any(len(k) != 1 for k in chain):
        raise TwistError("expected a chain of arity zero")
    top = max([A.weights[k[0]] for k in zero] + [1])
    sc = assemble_chain_complex(A, module, Window(1, top))
    total = 0
    for w in range(top + 1):
        part = {k: c for k, c in zero.items() if A.weights[k[0]] == w}
        coords = homology_class(sc, 0, w, part) if part else {}
        if w == 0:
            total = coords.get(0, 0)
        elif coords:
            raise TwistError(f"class in positive weight {w}")
    return normalize(Fraction(total))


def _twist_modules(A, alpha, beta):
    ident = identity_automorphism(A)
    a = dilation(A, alpha) if alpha != 1 else ident
    b = dilation(A, beta) if beta != 1 else ident
    return a, b


def unit_chain(A):
    return {(A.unit,): 1}


def unit_action(A, alpha, x, x_module):
    """1_alpha . x as a multiple of 1_beta in H_0(A, A_beta)."""
    a, _ = _twist_modules(A, alpha, 1)
    prod, out_module = twisted_bullet_chain(unit_chain(A), x, Bimodule(A, identity_automorphism(A), a),
                                            x_module)
    return h0_coordinate(A, out_module, prod)


def cocycle_tensor(d):
    """The 0-tensor (D_ab) of the Hom complex."""
    return {(p,): c for p, c in d.cocycle.entries.items()}


def one_form_action(omega, d):
    """omega . (D_1a) for a chain omega of C_1(A, A) (a 1-form f dx is the
    chain (f, x)); returns the H_0(A, A_a) coordinate."""
    A = d.algebra
    if d.alpha != 1:
        raise TwistError("the one-form action uses D_(1 a)")
    prod, out_module = twisted_bullet_chain(omega, cocycle_tensor(d), Bimodule(A), d.module)
    return h0_coordinate(A, out_module, prod)


def contraction_at_zero(A, omega):
    """(i_{d/dx} omega)(0) for omega = sum c (f, x): the constant term of f."""
    x = A.index("x")
    total = 0
    for key, c in omega.items():
        if len(key) == 2 and key[1] == x and key[0] == A.unit:
            total += c
    return normalize(Fraction(total))


def cycle_residual(d, which="cycle", interior=None):
    """(b + delta) of the chosen element, restricted to the window interior."""
    chain = getattr(d, which)
    interior = d.algebra.window if interior is None else interior
    return window_interior(d.algebra, total_differential(EndoContext(d.module), chain), interior)
