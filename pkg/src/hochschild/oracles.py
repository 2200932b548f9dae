"""Independent reference implementations used to cross-check the engine."""

import itertools

from .lincomb import add_term


def shuffle_product(A, a, b):
    """Shuffle product of Hochschild chains of a commutative ungraded algebra:
    (a_0, a_1..a_p) x (b_0, b_1..b_q) = sum over (p, q)-shuffles s of
    sign(s) (a_0 b_0, s(a_1..a_p, b_1..b_q)).

    Written from scratch on purpose: it shares no code with the bullet pairing.
    """
    if any(A.degrees):
        raise ValueError("the shuffle oracle is for ungraded algebras")
    out = {}
    for akey, ac in a.items():
        for bkey, bc in b.items():
            p, q = len(akey) - 1, len(bkey) - 1
            head = A.mul_basis(akey[0], bkey[0])
            if not head:
                continue
            for positions in itertools.combinations(range(p + q), p):
                tail = [None] * (p + q)
                pos = set(positions)
                ai = iter(akey[1:])
                bi = iter(bkey[1:])
                for i in range(p + q):
                    tail[i] = next(ai) if i in pos else next(bi)
                if A.unit in tail:
                    continue
                # sign of the permutation: pairs (b before a)
                inversions = 0
                seen_b = 0
                for i in range(p + q):
                    if i in pos:
                        inversions += seen_b
                    else:
                        seen_b += 1
                sign = -1 if inversions % 2 else 1
                for h, c in head.items():
                    add_term(out, (h,) + tuple(tail), sign * ac * bc * c)
    return out
