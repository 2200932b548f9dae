"""Built-in algebra families and the dilation automorphisms of k[x]."""

from fractions import Fraction
import itertools

from .algebra import Algebra, Automorphism


def _monomials(nvars, max_degree):
    mons = []
    for total in range(max_degree + 1):
        for exps in itertools.product(range(total + 1), repeat=nvars):
            if sum(exps) == total:
                mons.append(exps)
    # lexicographic inside each total degree, highest first exponent first
    mons.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return mons


def _mono_label(exps, names):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def polynomial(nvars=1, max_degree=6, names=None, name=None):
    """k[x_1..x_v] with weight(x_i) = 1 and Koszul degree 0, presented up to
    weight ``max_degree`` (the window)."""
    if names is None:
        names = ["x"] if nvars == 1 else (["x", "y", "z", "w"][:nvars] if nvars <= 4
                                           else [f"x{i}" for i in range(1, nvars + 1)])
    mons = _monomials(nvars, max_degree)
    index = {m: i for i, m in enumerate(mons)}
    products = {}
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                products[(i, j)] = {index[c]: 1}
    labels = [_mono_label(m, names) for m in mons]
    weights = [sum(m) for m in mons]
    alg = Algebra(name or "k[%s]" % ",".join(names), labels, [0] * len(mons), 0, products,
                  weights=weights, window=max_degree, validate=False)
    alg.exponents = mons
    return alg


def truncated_polynomial(n, name=None, var="x"):
    """k[x]/(x^n), ungraded, weight(x) = 1 (a genuine finite-dimensional algebra)."""
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    products = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    return Algebra(name or f"k[{var}]/({var}^{n})", labels, [0] * n, 0, products,
                   weights=list(range(n)), validate=False)


def dual_numbers():
    """k[eps]/(eps^2), ungraded, weight(eps) = 1."""
    return truncated_polynomial(2, name="k[eps]", var="eps")


def ground_field():
    return Algebra("k", ["1"], [0], 0, {}, validate=False)


def exterior(n, name=None):
    """Exterior algebra on n odd generators (Koszul degree 1, weight 1)."""
    subsets = []
    for size in range(n + 1):
        subsets.extend(itertools.combinations(range(n), size))
    index = {s: i for i, s in enumerate(subsets)}
    products = {}
    for i, s in enumerate(subsets):
        for j, t in enumerate(subsets):
            if set(s) & set(t):
                continue
            merged = s + t
            # sign of the sorting permutation
            inv = sum(1 for a in range(len(merged)) for b in range(a + 1, len(merged))
                      if merged[a] > merged[b])
            products[(i, j)] = {index[tuple(sorted(merged))]: (-1) ** inv}
    labels = ["1" if not s else "^".join(f"e{k + 1}" for k in s) for s in subsets]
    degrees = [len(s) for s in subsets]
    return Algebra(name or f"Lambda({n})", labels, degrees, 0, products,
                   weights=degrees, validate=False)


def matrix_algebra(n=2):
    """Ungraded n x n matrices over k, basis E_ij (unit = identity is not a
    basis vector in the E_ij basis, so we use {1} + E_ij for (i,j) != (n,n))."""
    # basis: identity I, and E_ij except E_nn; E_nn = I - sum_{i<n} E_ii
    pairs = [(i, j) for i in range(n) for j in range(n) if (i, j) != (n - 1, n - 1)]
    labels = ["1"] + [f"E{i + 1}{j + 1}" for i, j in pairs]
    idx = {p: k + 1 for k, p in enumerate(pairs)}

    def as_vec(i, j):
        if (i, j) != (n - 1, n - 1):
            return {idx[(i, j)]: 1}
        vec = {0: 1}
        for k in range(n - 1):
            vec[idx[(k, k)]] = -1
        return vec

    def mat_of(key):
        if key == 0:
            return {(k, k): 1 for k in range(n)}
        return {pairs[key - 1]: 1}

    products = {}
    for a in range(len(labels)):
        for b in range(len(labels)):
            ma, mb = mat_of(a), mat_of(b)
            prod = {}
            for (i, j), x in ma.items():
                for (k, l), y in mb.items():
                    if j == k:
                        prod[(i, l)] = prod.get((i, l), 0) + x * y
            vec = {}
            for (i, l), c in prod.items():
                for key, v in as_vec(i, l).items():
                    vec[key] = vec.get(key, 0) + c * v
            vec = {k: v for k, v in vec.items() if v}
            if vec:
                products[(a, b)] = vec
    return Algebra(f"M{n}(k)", labels, [0] * len(labels), 0, products, validate=False)


def free_truncated(gens=(("x", 1), ("y", 0)), max_length=2, name=None):
    """Free associative algebra on graded generators modulo words longer than
    ``max_length``; noncommutative, with mixed Koszul parities."""
    words = [()]
    for length in range(1, max_length + 1):
        words.extend(itertools.product(range(len(gens)), repeat=length))
    index = {w: i for i, w in enumerate(words)}
    products = {}
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            w = u + v
            if w in index:
                products[(i, j)] = {index[w]: 1}
    labels = ["1" if not w else "".join(gens[g][0] for g in w) for w in words]
    degrees = [sum(gens[g][1] for g in w) for w in words]
    weights = [len(w) for w in words]
    return Algebra(name or "k<%s>/(len>%d)" % (",".join(g for g, _ in gens), max_length),
                   labels, degrees, 0, products, weights=weights, validate=False)


def koszul_dga():
    """Lambda(eta) (x) k[eps]/(eps^2), deg eta = 1, deg eps = 2, d(eta) = eps."""
    labels = ["1", "eta", "eps", "eta*eps"]
    products = {
        (1, 2): {3: 1}, (2, 1): {3: 1},
    }
    return Algebra("k[eta,eps]/(eta^2,eps^2), d(eta)=eps", labels, [0, 1, 2, 3], 0, products,
                   weights=[0, 1, 1, 2], differential={1: {2: 1}}, validate=False)


def dilation(alg, alpha, name=None):
    """x_i -> alpha x_i on a polynomial family (alpha a nonzero rational)."""
    alpha = Fraction(alpha)
    if alpha == 0:
        raise ValueError("dilation parameter must be nonzero")
    images = {}
    for i, w in enumerate(alg.weights):
        c = alpha ** w
        images[i] = {i: c.numerator if c.denominator == 1 else c}
    return Automorphism(alg, images, name=name or f"dil({alpha})", validate=False)


BUILTIN = {
    "kx": lambda: polynomial(1, 12),
    "kxy": lambda: polynomial(2, 8),
    "keps": dual_numbers,
    "kx3": lambda: truncated_polynomial(3),
    "k": ground_field,
    "ext2": lambda: exterior(2),
    "m2": lambda: matrix_algebra(2),
    "free2": free_truncated,
    "kdga": koszul_dga,
}
