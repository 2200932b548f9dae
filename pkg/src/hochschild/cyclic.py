"""Periodic cyclic chains: the b + B (+ d) differential on a window, the third
bullet part, the operators I_D and L_D, and the Rinehart residual.

A periodic element is stored by its components, i.e. as an ordinary chain
dict of mixed arities, together with a window (max arity, max weight).  The
window is only a bookkeeping device: every operator that would produce a
component outside it raises :class:`WindowOverflow` instead of dropping it.
"""

import itertools

from .chains import (AlgebraContext, ChainError, EndoContext, Evaluation, _etas,
                     _sgn, boundary_b, bullet_chain, chain_degree, connes_B,
                     extend_partial, lie_L_D)
from .cochains import delta_pieces, partial_pieces, piece_deg
from .lincomb import add_term, axpy


class WindowOverflow(ChainError):
    pass


class PeriodicElement:
    """An element of the periodic cyclic complex restricted to a window."""

    def __init__(self, ctx, chain, max_arity, max_weight=None, parity=None):
        self.ctx = ctx
        self.chain = {k: c for k, c in chain.items() if c}
        self.max_arity = max_arity
        self.max_weight = max_weight
        parities = {chain_degree(ctx, k) % 2 for k in self.chain}
        if len(parities) > 1:
            raise ChainError("components of mixed parity")
        if parity is None:
            parity = parities.pop() if parities else 0
        elif parities and parities != {parity % 2}:
            raise ChainError("components do not have the declared parity")
        self.parity = parity % 2
        check_window(ctx, self.chain, max_arity, max_weight)

    def __repr__(self):
        return (f"PeriodicElement({len(self.chain)} terms, parity={self.parity}, "
                f"window=({self.max_arity}, {self.max_weight}))")

    def __eq__(self, other):
        return isinstance(other, PeriodicElement) and self.chain == other.chain

    def __bool__(self):
        return bool(self.chain)

    def components(self):
        out = {}
        for k, c in self.chain.items():
            out.setdefault(len(k) - 1, {})[k] = c
        return out

    def with_chain(self, chain, parity):
        return PeriodicElement(self.ctx, chain, self.max_arity, self.max_weight, parity)


def _key_weight(ctx, key):
    if ctx.kind != "algebra":
        return None
    w = ctx.algebra.weights
    return sum(w[k] for k in key)


def check_window(ctx, chain, max_arity, max_weight=None):
    for key in chain:
        if len(key) - 1 > max_arity:
            raise WindowOverflow(f"component of arity {len(key) - 1} exceeds max arity {max_arity}")
        if max_weight is not None:
            w = _key_weight(ctx, key)
            if w is not None and w > max_weight:
                raise WindowOverflow(f"component of weight {w} exceeds max weight {max_weight}")


def periodic_d(ctx, chain):
    """(b + B + d) on a plain chain dict (no window checks)."""
    out = boundary_b(ctx, chain)
    axpy(out, connes_B(ctx, chain))
    axpy(out, extend_partial(ctx, chain))
    return out


def periodic_differential(p):
    """b + B + d on a windowed periodic element; flips parity."""
    return p.with_chain(periodic_d(p.ctx, p.chain), p.parity + 1)


# -- the third bullet part ---------------------------------------------------

def _insert_all(ev, seq, Ds, start, parts, starts, emit):
    if not Ds:
        emit(parts + [{r: 1} for r in seq[start:]], starts)
        return
    D = Ds[0]
    for i in range(start, len(seq) + 1):
        for k in ev.counts(D, len(seq) - i):
            val = ev.ev(D, seq[i:i + k])
            if not val:
                continue
            _insert_all(ev, seq, Ds[1:], i + k,
                        parts + [{r: 1} for r in seq[start:i]] + [val], starts + [i], emit)


def bullet3(ev, a, x, out=None):
    """(a_0..a_n) .3 (D_0..D_m).

    Sum over the cyclic rotations (D_p..D_m, D_0..D_{p-1}) of the right factor
    and the rotations (a_j..a_n, a_0..a_{j-1}) of the left one, of all ordered
    insertions of the rotated cochains into the rotated tail behind a new unit
    slot, keeping only the terms in which D_0 sits strictly after a_0 (for a
    zero-cochain D_0: in a gap after a_0).  The sign is
    ``deg a + S_<p S_>=p + (eta_{n+1}-eta_j) eta_j + sum_r |E_r| sigma_r``
    with ``S_<p = sum_{r<p} |D_r|``, ``S_>=p`` the rest and ``sigma_r`` the
    sum of |c| over the slots from the first argument of the r-th inserted
    cochain E_r to the end.
    """
    ctx = ev.ctx
    if not ctx.untwisted:
        raise ChainError("the periodic pairing needs an untwisted coefficient module")
    unit = ctx.unit
    if out is None:
        out = {}
    for akey, ac in a.items():
        n = len(akey) - 1
        etas = _etas(ctx, akey)
        tot = etas[n + 1]
        dega = chain_degree(ctx, akey)
        for xkey, xc in x.items():
            m = len(xkey) - 1
            s = [ev.ddeg(D) - 1 for D in xkey]
            for p in range(m + 1):
                rot = xkey[p:] + xkey[:p]
                s_rot = s[p:] + s[:p]
                pos_d0 = (m + 1 - p) % (m + 1)
                e_p = dega + sum(s[:p]) * sum(s[p:])
                for j in range(n + 1):
                    c = akey[j:] + akey[:j]
                    if unit in c:
                        continue
                    pos_a0 = (n + 1 - j) % (n + 1)
                    sc = [ctx.deg(r) - 1 for r in c]
                    suffix = list(itertools.accumulate(reversed(sc)))[::-1] + [0]
                    e_j = e_p + (tot - etas[j]) * etas[j]

                    def emit(parts, starts, e_j=e_j, s_rot=s_rot, suffix=suffix,
                             pos_a0=pos_a0, pos_d0=pos_d0):
                        if starts[pos_d0] <= pos_a0:
                            return
                        e = e_j + sum(sr * suffix[st] for sr, st in zip(s_rot, starts))
                        _put_unit_head(out, unit, parts, _sgn(e) * ac * xc)

                    _insert_all(ev, c, list(rot), 0, [], [], emit)
    return out


def _put_unit_head(out, unit, parts, coeff):
    factors = []
    for t in parts:
        items = sorted((k, v) for k, v in t.items() if k != unit)
        if not items:
            return
        factors.append(items)
    for combo in itertools.product(*factors):
        c = coeff
        for _, v in combo:
            c *= v
        add_term(out, (unit,) + tuple(k for k, _ in combo), c)


def periodic_bullet(ev, a, x):
    """The full pairing .1 + .2 + .3 of periodic chains of A (or of E*) with
    periodic chains of E*."""
    out = bullet_chain(ev, a, x)
    bullet3(ev, a, x, out)
    return out


def bullet3_periodic(a, x, ev=None):
    """Third bullet part on a windowed periodic element ``a``; ``x`` is a
    chain of E* ({(D_0, .., D_m): coeff})."""
    ev = ev or Evaluation(a.ctx)
    chain = bullet3(ev, a.chain, x)
    parity = _pairing_parity(a, x, ev)
    return a.with_chain(chain, parity)


def _pairing_parity(a, x, ev):
    xdegs = {(sum(ev.ddeg(D) for D in k) + len(k) - 1) % 2 for k in x}
    if len(xdegs) > 1:
        raise ChainError("right factor of mixed parity")
    return a.parity + (xdegs.pop() if xdegs else 0)


# -- I_D, L_D and the Rinehart formula ----------------------------------------

def I_D(ctx, D, a, ev=None):
    """I_D(a) = (-1)^{deg D deg a} (a . D) with the full periodic pairing."""
    ev = ev or Evaluation(ctx)
    out = {}
    for piece, c in D.items():
        dD = piece_deg(ctx.algebra, piece)
        for akey, ac in a.items():
            part = periodic_bullet(ev, {akey: ac}, {(piece,): c})
            axpy(out, part, _sgn(dD * chain_degree(ctx, akey)))
    return out


def _homogeneous_deg(A, D):
    degs = {piece_deg(A, p) for p in D}
    if len(degs) > 1:
        raise ChainError("I_D needs a homogeneous cochain")
    return degs.pop() if degs else 0


def rinehart_residual(D, a):
    """([B + b, I_D] - I_{delta D} - L_D)(a) for a cochain D (pieces dict)
    and a periodic element a over an untwisted algebra.  For a dga, b + B
    becomes b + B + d and delta D becomes delta D + dD."""
    ctx = a.ctx
    A = ctx.algebra
    if ctx.kind != "algebra" or not ctx.untwisted:
        raise ChainError("the Rinehart residual is computed for C_*(A, A)")
    dD = _homogeneous_deg(A, D)
    ev = Evaluation(ctx)
    out = periodic_d(ctx, I_D(ctx, D, a.chain, ev))
    axpy(out, I_D(ctx, D, periodic_d(ctx, a.chain), ev), -_sgn(dD))
    dD_cochain = delta_pieces(ctx.module, D)
    if A.differential is not None:
        axpy(dD_cochain, partial_pieces(A, D))
    axpy(out, I_D(ctx, dD_cochain, a.chain, ev), -1)
    axpy(out, lie_L_D(ctx, D, a.chain), -1)
    return a.with_chain(out, a.parity + dD)


def periodic_chain_map_residual(ev, a, x):
    """(b+B)(a . x) - ((b+B) a) . x - (-1)^{deg a} a . ((b+B+d) x) on terms."""
    ctx = ev.ctx
    xctx = EndoContext(ctx.module)
    dx = periodic_d(xctx, x)
    out = periodic_d(ctx, periodic_bullet(ev, a, x))
    axpy(out, periodic_bullet(ev, periodic_d(ctx, a), x), -1)
    for akey, ac in a.items():
        axpy(out, periodic_bullet(ev, {akey: ac}, dx), -_sgn(chain_degree(ctx, akey)))
    return out


# -- Hood-Jones product ------------------------------------------------------

def zero_cochain_chain(A, a):
    """View a chain of A as a chain of E*_A made of zero-cochains."""
    return {tuple(((), k) for k in key): c for key, c in a.items()}


def is_zero_cochain_chain(chain):
    return all(not p[0] for key in chain for p in key)


def hood_jones_product(a, b, algebra_ctx=None):
    """Restriction of the E*-level periodic pairing to zero-cochain tensors.

    ``a`` and ``b`` are chains of A; returns ``(product, closed)`` where the
    product is a chain of E*_A and ``closed`` says whether it consists of
    zero-cochains only (always the case for commutative A).
    """
    ctx = algebra_ctx
    A = ctx.algebra
    ectx = EndoContext(A)
    ev = Evaluation(ectx)
    prod = periodic_bullet(ev, zero_cochain_chain(A, a), zero_cochain_chain(A, b))
    return prod, is_zero_cochain_chain(prod)


def to_algebra_chain(chain):
    """Inverse of :func:`zero_cochain_chain` on zero-cochain tensors."""
    out = {}
    for key, c in chain.items():
        if not is_zero_cochain_chain({key: c}):
            raise ChainError("chain has slots of positive arity")
        add_term(out, tuple(p[1] for p in key), c)
    return out
