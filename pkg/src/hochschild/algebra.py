"""Finite-basis graded associative unital algebras, automorphisms and twisted bimodules.

Every basis element carries two integers:

``degree``
    the Koszul degree; it is the only grading that enters sign rules.
``weight``
    an auxiliary internal grading (polynomial degree for ``k[x]``) used to
    cut infinite complexes into finite slices.  It never enters a sign.

Infinite graded algebras such as ``k[x]`` are presented through a *window*:
the quotient by all basis elements of weight above ``window``.  That quotient
is an honest associative algebra, and its (co)chain complexes agree with those
of the infinite algebra in every weight up to the window, so computations are
exact there.  Nothing is truncated silently: callers ask ``Algebra.window`` and
the homology engine refuses weights beyond it.
"""

from fractions import Fraction
import itertools

from .lincomb import axpy, add_term, as_rational


class AlgebraError(ValueError):
    pass


class SpecParseError(AlgebraError):
    pass


class AssociativityError(AlgebraError):
    def __init__(self, triple, message):
        super().__init__(message)
        self.triple = triple


class UnitError(AlgebraError):
    pass


class DegreeError(AlgebraError):
    pass


class MixedAlgebraError(AlgebraError):
    pass


class Algebra:
    """Graded associative algebra given by structure constants on a finite basis.

    ``products`` maps ``(i, j)`` to a dict ``{k: coeff}``; missing pairs are
    zero.  Products with the unit may be omitted and are then filled in;
    if they are given they must be neutral (checked by :meth:`validate`).
    """

    def __init__(self, name, labels, degrees, unit, products, weights=None,
                 window=None, differential=None, fill_unit=True, validate=True):
        self.name = name
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self.weights = tuple(int(w) for w in (weights if weights is not None
                                              else [0] * len(self.labels)))
        if len(set(self.labels)) != len(self.labels):
            raise SpecParseError("duplicate basis labels")
        if not (len(self.labels) == len(self.degrees) == len(self.weights)):
            raise SpecParseError("basis, degree and weight lists differ in length")
        self.unit = unit
        self.window = window
        table = {}
        for (i, j), value in products.items():
            clean = {k: c for k, c in value.items() if c}
            if clean:
                table[(i, j)] = clean
        if fill_unit:
            for i in range(len(self.labels)):
                table.setdefault((unit, i), {i: 1})
                table.setdefault((i, unit), {i: 1})
        self._table = table
        self.differential = None
        if differential:
            self.differential = {i: {k: c for k, c in v.items() if c}
                                 for i, v in differential.items()}
        self._index = {label: i for i, label in enumerate(self.labels)}
        self.nonunit = tuple(i for i in range(len(self.labels)) if i != unit)
        self._factor = None
        if validate:
            self.validate()

    # -- basic access -----------------------------------------------------

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={len(self.labels)})"

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise SpecParseError(f"unknown basis label {label!r}") from None

    def degree(self, i):
        return self.degrees[i]

    def weight(self, i):
        return self.weights[i]

    def is_unit(self, i):
        return i == self.unit

    def mul_basis(self, i, j):
        return self._table.get((i, j), {})

    def mul(self, x, y):
        """Product of two element dicts."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self._table.get((i, j))
                if prod:
                    axpy(out, prod, a * b)
        return out

    def d(self, i):
        """The algebra differential on a basis element (empty if none)."""
        if self.differential is None:
            return {}
        return self.differential.get(i, {})

    def factorizations(self, k):
        """All (u, v, c) with u, v non-unit and c = coefficient of e_k in e_u e_v."""
        if self._factor is None:
            fac = {}
            for u in self.nonunit:
                for v in self.nonunit:
                    for w, c in self.mul_basis(u, v).items():
                        fac.setdefault(w, []).append((u, v, c))
            self._factor = fac
        return self._factor.get(k, ())

    def basis_of_weight(self, w, nonunit=True):
        pool = self.nonunit if nonunit else range(self.dim)
        return [i for i in pool if self.weights[i] == w]

    def element(self, coeffs):
        return AlgElem(self, coeffs)

    def basis_element(self, label):
        return AlgElem(self, {self.index(label): 1})

    def one(self):
        return AlgElem(self, {self.unit: 1})

    # -- validation -------------------------------------------------------

    def validate(self):
        n = self.dim
        if not 0 <= self.unit < n:
            raise UnitError("unit index out of range")
        for (i, j), value in self._table.items():
            for k in value:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise DegreeError(
                        f"degree mismatch: {self.labels[i]}*{self.labels[j]} has "
                        f"component {self.labels[k]}")
                if self.weights[k] != self.weights[i] + self.weights[j]:
                    raise DegreeError(
                        f"weight mismatch: {self.labels[i]}*{self.labels[j]} has "
                        f"component {self.labels[k]}")
        for i in range(n):
            if self.mul_basis(self.unit, i) != {i: 1} or self.mul_basis(i, self.unit) != {i: 1}:
                raise UnitError(
                    f"unit {self.labels[self.unit]!r} is not neutral on {self.labels[i]!r}")
        if self.degrees[self.unit] != 0 or self.weights[self.unit] != 0:
            raise DegreeError("the unit must have degree and weight 0")
        for i, j, k in itertools.product(range(n), repeat=3):
            left = self.mul(self.mul_basis(i, j), {k: 1})
            right = self.mul({i: 1}, self.mul_basis(j, k))
            if left != right:
                triple = (self.labels[i], self.labels[j], self.labels[k])
                raise AssociativityError(
                    triple, "associativity fails on (%s, %s, %s)" % triple)
        if self.differential is not None:
            self._validate_differential()

    def _validate_differential(self):
        n = self.dim
        for i, img in self.differential.items():
            for k in img:
                if self.degrees[k] != self.degrees[i] + 1 or self.weights[k] != self.weights[i]:
                    raise DegreeError(f"differential of {self.labels[i]!r} is not homogeneous of degree +1")
        if self.d(self.unit):
            raise AlgebraError("differential must kill the unit")
        for i in range(n):
            dd = {}
            for k, c in self.d(i).items():
                axpy(dd, self.d(k), c)
            if dd:
                raise AlgebraError(f"differential does not square to zero on {self.labels[i]!r}")
        for i in range(n):
            for j in range(n):
                lhs = {}
                for k, c in self.mul_basis(i, j).items():
                    axpy(lhs, self.d(k), c)
                rhs = self.mul(self.d(i), {j: 1})
                axpy(rhs, self.mul({i: 1}, self.d(j)), (-1) ** self.degrees[i])
                if lhs != rhs:
                    raise AlgebraError(
                        f"differential is not a derivation on ({self.labels[i]}, {self.labels[j]})")

    def is_commutative(self):
        """Ungraded commutativity of the structure constants."""
        return all(self.mul_basis(i, j) == self.mul_basis(j, i)
                   for i in range(self.dim) for j in range(self.dim))

    def is_graded_commutative(self):
        for i in range(self.dim):
            for j in range(self.dim):
                sign = (-1) ** (self.degrees[i] * self.degrees[j])
                if self.mul_basis(i, j) != {k: sign * c for k, c in self.mul_basis(j, i).items()}:
                    return False
        return True


class AlgElem:
    """An element of a given algebra: finitely supported basis-index -> rational."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    def _check(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise MixedAlgebraError("operands belong to different algebras")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgElem(self.algebra, axpy(dict(self.coeffs), other.coeffs))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgElem(self.algebra, axpy(dict(self.coeffs), other.coeffs, -1))

    def __neg__(self):
        return AlgElem(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.algebra, {k: other * c for k, c in self.coeffs.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return format_element(self.algebra, self.coeffs)


def format_element(algebra, coeffs):
    if not coeffs:
        return "0"
    parts = []
    for k in sorted(coeffs):
        parts.append(f"{coeffs[k]}*{algebra.labels[k]}")
    return " + ".join(parts)


def multiply(a, b):
    """Bare product of two elements of the same algebra (no Koszul sign)."""
    if a.algebra is not b.algebra:
        raise MixedAlgebraError("operands belong to different algebras")
    return AlgElem(a.algebra, a.algebra.mul(a.coeffs, b.coeffs))


class Automorphism:
    """A degree-preserving algebra automorphism given on basis elements."""

    def __init__(self, algebra, images, name="phi", validate=True):
        self.algebra = algebra
        self.name = name
        n = algebra.dim
        self.images = {}
        for i in range(n):
            img = images.get(i, {i: 1}) if isinstance(images, dict) else images[i]
            self.images[i] = {k: c for k, c in img.items() if c}
        self._preimages = None
        if validate:
            self.validate()

    def __repr__(self):
        return f"Automorphism({self.name!r} on {self.algebra.name!r})"

    def is_identity(self):
        return all(img == {i: 1} for i, img in self.images.items())

    def apply(self, x):
        out = {}
        for i, c in x.items():
            axpy(out, self.images[i], c)
        return out

    def apply_basis(self, i):
        return self.images[i]

    def preimages(self, k):
        """Pairs (i, c): basis elements i whose image has coefficient c at k."""
        if self._preimages is None:
            pre = {}
            for i, img in self.images.items():
                for kk, c in img.items():
                    pre.setdefault(kk, []).append((i, c))
            self._preimages = pre
        return self._preimages.get(k, ())

    def validate(self):
        A = self.algebra
        for i, img in self.images.items():
            for k in img:
                if A.degrees[k] != A.degrees[i] or A.weights[k] != A.weights[i]:
                    raise DegreeError(f"{self.name} does not preserve degrees on {A.labels[i]!r}")
        if self.images[A.unit] != {A.unit: 1}:
            raise AlgebraError(f"{self.name} does not fix the unit")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.apply(A.mul_basis(i, j))
                rhs = A.mul(self.images[i], self.images[j])
                if lhs != rhs:
                    raise AlgebraError(
                        f"{self.name} is not multiplicative on ({A.labels[i]}, {A.labels[j]})")
        from .linalg import SparseMatrix, sparse_rank
        entries = {(k, i): c for i, img in self.images.items() for k, c in img.items()}
        if sparse_rank(SparseMatrix(A.dim, A.dim, entries)) != A.dim:
            raise AlgebraError(f"{self.name} is not invertible")

    def compose(self, other, name=None):
        """self after other."""
        images = {i: self.apply(other.images[i]) for i in range(self.algebra.dim)}
        return Automorphism(self.algebra, images, name or f"{self.name}{other.name}",
                            validate=False)


def identity_automorphism(algebra):
    return Automorphism(algebra, {}, name="id", validate=False)


def apply_automorphism(phi, a):
    if a.algebra is not phi.algebra:
        raise MixedAlgebraError("automorphism and element belong to different algebras")
    return AlgElem(a.algebra, phi.apply(a.coeffs))


class Bimodule:
    """The bimodule {}_alpha A_beta: A with a.m.b = alpha(a) m beta(b)."""

    def __init__(self, algebra, left=None, right=None):
        self.algebra = algebra
        self.left = left if left is not None else identity_automorphism(algebra)
        self.right = right if right is not None else identity_automorphism(algebra)
        for phi in (self.left, self.right):
            if phi.algebra is not algebra:
                raise MixedAlgebraError("twist defined over a different algebra")

    def __repr__(self):
        return f"Bimodule({self.algebra.name!r}, {self.left.name}, {self.right.name})"

    @property
    def untwisted(self):
        return self.left.is_identity() and self.right.is_identity()

    def act_left(self, a, m):
        """a . m for basis index a and element dict m."""
        return self.algebra.mul(self.left.images[a], m)

    def act_right(self, m, b):
        """m . b for element dict m and basis index b."""
        return self.algebra.mul(m, self.right.images[b])


def twisted_action(M, a, m, b):
    """alpha(a) m beta(b) in the bimodule M."""
    for x in (a, m, b):
        if x.algebra is not M.algebra:
            raise MixedAlgebraError("element not over the bimodule's algebra")
    A = M.algebra
    out = A.mul(A.mul(M.left.apply(a.coeffs), m.coeffs), M.right.apply(b.coeffs))
    return AlgElem(A, out)


# -- spec files ------------------------------------------------------------

_TOP_FIELDS = {"name", "basis", "unit", "products", "automorphisms", "window", "differential"}


def _check_fields(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SpecParseError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise SpecParseError(f"{where}: unknown field(s) {sorted(extra)}")


def _parse_combination(alg_index, terms, where):
    if not isinstance(terms, list):
        raise SpecParseError(f"{where}: expected a list of {{label, coeff}}")
    out = {}
    for t in terms:
        _check_fields(t, {"label", "coeff"}, where)
        if "label" not in t or "coeff" not in t:
            raise SpecParseError(f"{where}: term needs label and coeff")
        if t["label"] not in alg_index:
            raise SpecParseError(f"{where}: unknown label {t['label']!r}")
        try:
            c = as_rational(t["coeff"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"{where}: bad coefficient {t['coeff']!r}") from exc
        add_term(out, alg_index[t["label"]], c)
    return out


def load_algebra(text):
    """Parse and validate an algebra spec document (JSON syntax).

    Returns ``(algebra, automorphisms)`` where automorphisms is a dict by name.
    """
    import json
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"not valid JSON: {exc}") from exc
    _check_fields(doc, _TOP_FIELDS, "spec")
    for field in ("name", "basis", "unit", "products"):
        if field not in doc:
            raise SpecParseError(f"spec: missing field {field!r}")
    labels, degrees, weights = [], [], []
    for entry in doc["basis"]:
        _check_fields(entry, {"label", "degree", "weight"}, "basis")
        if "label" not in entry or "degree" not in entry:
            raise SpecParseError("basis: entries need label and degree")
        if not isinstance(entry["degree"], int) or not isinstance(entry.get("weight", 0), int):
            raise SpecParseError("basis: degree and weight must be integers")
        labels.append(str(entry["label"]))
        degrees.append(entry["degree"])
        weights.append(entry.get("weight", 0))
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != len(labels):
        raise SpecParseError("basis: duplicate labels")
    if doc["unit"] not in index:
        raise SpecParseError(f"unit {doc['unit']!r} is not a basis label")
    products = {}
    for p in doc["products"]:
        _check_fields(p, {"left", "right", "result"}, "products")
        try:
            i, j = index[p["left"]], index[p["right"]]
        except KeyError as exc:
            raise SpecParseError(f"products: unknown label {exc}") from None
        if (i, j) in products:
            raise SpecParseError(f"products: duplicate entry {p['left']}*{p['right']}")
        products[(i, j)] = _parse_combination(index, p.get("result", []), "products")
    window = None
    if "window" in doc:
        _check_fields(doc["window"], {"maxDegree"}, "window")
        window = doc["window"].get("maxDegree")
        if not isinstance(window, int) or window < 0:
            raise SpecParseError("window.maxDegree must be a non-negative integer")
    differential = None
    if "differential" in doc:
        differential = {}
        for entry in doc["differential"]:
            _check_fields(entry, {"label", "value"}, "differential")
            differential[index[entry["label"]]] = _parse_combination(index, entry["value"], "differential")
    alg = Algebra(doc["name"], labels, degrees, index[doc["unit"]], products,
                  weights=weights, window=window, differential=differential,
                  fill_unit=False)
    autos = {}
    for a in doc.get("automorphisms", []):
        _check_fields(a, {"name", "images"}, "automorphisms")
        images = {}
        for img in a["images"]:
            _check_fields(img, {"label", "value"}, "automorphisms.images")
            images[index[img["label"]]] = _parse_combination(index, img["value"], "automorphisms")
        autos[a["name"]] = Automorphism(alg, images, name=a["name"])
    return alg, autos


def dump_algebra(alg, automorphisms=()):
    """Serialize to the spec-file schema (deterministic key order)."""
    import json
    from .lincomb import fmt_coeff

    def comb(vec):
        return [{"label": alg.labels[k], "coeff": fmt_coeff(c)} for k, c in sorted(vec.items())]

    doc = {
        "name": alg.name,
        "basis": [{"label": l, "degree": d, "weight": w}
                  for l, d, w in zip(alg.labels, alg.degrees, alg.weights)],
        "unit": alg.labels[alg.unit],
        "products": [{"left": alg.labels[i], "right": alg.labels[j], "result": comb(v)}
                     for (i, j), v in sorted(alg._table.items())],
    }
    if alg.differential:
        doc["differential"] = [{"label": alg.labels[i], "value": comb(v)}
                               for i, v in sorted(alg.differential.items()) if v]
    if automorphisms:
        doc["automorphisms"] = [
            {"name": phi.name,
             "images": [{"label": alg.labels[i], "value": comb(img)}
                        for i, img in sorted(phi.images.items())]}
            for phi in automorphisms]
    if alg.window is not None:
        doc["window"] = {"maxDegree": alg.window}
    return json.dumps(doc, indent=1)
