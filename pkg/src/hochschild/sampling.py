"""Seeded random elements: chains, cochains and chains of E*.

Coefficients are drawn from {-3, .., 3} without 0 and supports have at most
``max_support`` terms, so exact arithmetic stays cheap while every sign is
exercised.  Cochain arguments are often copied from a reference chain so that
evaluations do not vanish trivially.
"""

import random

from .cochains import piece_deg

COEFFS = (-3, -2, -1, 1, 2, 3)


class Sampler:
    def __init__(self, seed, max_support=4, max_weight=None):
        self.rng = random.Random(seed)
        self.max_support = max_support
        self.max_weight = max_weight

    def coeff(self):
        return self.rng.choice(COEFFS)

    def _pool(self, A, nonunit):
        pool = A.nonunit if nonunit else range(A.dim)
        if self.max_weight is not None:
            pool = [k for k in pool if A.weights[k] <= self.max_weight]
        return list(pool)

    def basis(self, A, nonunit=False):
        return self.rng.choice(self._pool(A, nonunit))

    def chain_key(self, A, n):
        return (self.basis(A),) + tuple(self.basis(A, True) for _ in range(n))

    def chain(self, A, max_arity, arity=None, support=None):
        """Random nonzero chain of C_*(A, M) (keys are basis tuples)."""
        support = support or self.rng.randint(1, self.max_support)
        while True:
            out = {}
            for _ in range(support):
                n = arity if arity is not None else self.rng.randint(0, max_arity)
                key = self.chain_key(A, n)
                out[key] = out.get(key, 0) + self.coeff()
            out = {k: c for k, c in out.items() if c}
            if out:
                return out

    def piece(self, A, max_arity, unit_ok=True, hint=None):
        """Elementary cochain (args, r); with a hint chain key the arguments
        are usually a cyclic segment of it."""
        rng = self.rng
        for _ in range(100):
            d = rng.randint(0, max_arity)
            if hint and rng.random() < 0.8:
                start = rng.randrange(len(hint))
                args = tuple((hint + hint)[start:start + d])
                if A.unit in args or len(args) < d:
                    continue
            else:
                args = tuple(self.basis(A, True) for _ in range(d))
            r = self.basis(A)
            if not unit_ok and (args, r) == ((), A.unit):
                continue
            return (args, r)
        return ((), A.unit) if unit_ok else ((), self.basis(A, True))

    def cochain(self, A, arity, support=None, hint=None):
        """Homogeneous cochain (dict of pieces) of the given arity: every piece
        shares the deg of the first one."""
        support = support or self.rng.randint(1, self.max_support)
        while True:
            first = self.piece_of_arity(A, arity, hint)
            deg = piece_deg(A, first)
            out = {first: self.coeff()}
            for _ in range(4 * support):
                if len(out) >= support:
                    break
                p = self.piece_of_arity(A, arity, hint)
                if piece_deg(A, p) == deg:
                    out[p] = out.get(p, 0) + self.coeff()
            out = {k: c for k, c in out.items() if c}
            if out:
                return out

    def piece_of_arity(self, A, d, hint=None):
        rng = self.rng
        if hint and len(hint) >= d and rng.random() < 0.7:
            start = rng.randrange(len(hint))
            args = tuple((hint + hint)[start:start + d])
            if A.unit not in args:
                return (args, self.basis(A))
        return (tuple(self.basis(A, True) for _ in range(d)), self.basis(A))

    def endo_key(self, A, n, max_slot_arity, hint=None):
        head = self.piece(A, max_slot_arity, True, hint)
        return (head,) + tuple(self.piece(A, max_slot_arity, False, hint) for _ in range(n))

    def endo_chain(self, A, max_arity, max_slot_arity=2, hint=None, support=None):
        """Random chain of C_*(E*, E*): keys are tuples of cochain pieces."""
        support = support or self.rng.randint(1, min(2, self.max_support))
        while True:
            out = {}
            for _ in range(support):
                key = self.endo_key(A, self.rng.randint(0, max_arity), max_slot_arity, hint)
                out[key] = out.get(key, 0) + self.coeff()
            out = {k: c for k, c in out.items() if c}
            if out:
                return out
