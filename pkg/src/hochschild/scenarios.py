"""Named end-to-end scenarios for ``hochschild reproduce``.

A scenario returns a report with two parts: ``values`` (everything computed,
in a JSON-friendly deterministic form) and ``checks`` (named expectations,
each with the expected and the actual value).  The run passes when every
check holds and, if frozen data exist for the same parameters, the values
equal the frozen ones exactly.
"""

import inspect
import itertools
import json
import os
from fractions import Fraction

from .algebra import Bimodule, identity_automorphism
from .chains import AlgebraContext, EndoContext, Evaluation, bullet_chain
from .cochains import delta_pieces
from .cyclic import zero_cochain_chain
from .families import dilation, dual_numbers, polynomial
from .chains import total_differential
from .homology import (HomBoundaries, Window, assemble_chain_complex, assemble_hom_complex,
                       hkr_dims_oracle, homology_table)
from .lincomb import axpy, fmt_coeff
from .linalg import complex_homology
from .oracles import shuffle_product
from .sampling import Sampler
from .twisted import (closed_form_coefficient, cocycle_tensor, contraction_at_zero,
                      cycle_coefficient, cycle_residual, dilation_generators,
                      one_form_action, twisted_bullet_hom, unit_action, window_interior)

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
EXPECTED_FILE = os.path.join(DATA_DIR, "expected.json")


class ScenarioError(ValueError):
    pass


def _q(x):
    return fmt_coeff(Fraction(x))


def _check(name, expected, actual):
    return {"name": name, "expected": expected, "actual": actual, "ok": expected == actual}


# -- kx-dilation -----------------------------------------------------------------

def kx_dilation(alpha=2, beta=3, gamma=5, max_degree=8):
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    if len({alpha, beta, gamma}) < 3:
        raise ScenarioError("alpha, beta and gamma must be pairwise distinct")
    if 1 in (alpha, beta, gamma) or 0 in (alpha, beta, gamma):
        raise ScenarioError("dilation parameters must differ from 0 and 1")
    A = polynomial(1, max_degree)
    d = dilation_generators(alpha, beta, max_degree, algebra=A)
    checks = []
    values = {"alpha": _q(alpha), "beta": _q(beta), "gamma": _q(gamma),
              "max_degree": max_degree}

    coeffs = [_q(d.coefficients[n]) for n in range(1, max_degree + 1)]
    closed = [_q(closed_form_coefficient(alpha, beta, n)) for n in range(1, max_degree + 1)]
    values["cocycle_coefficients"] = coeffs
    checks.append(_check("D_ab(x^n) = c_n x^(n-1) with c_n = (a^n - b^n)/(a - b)", closed, coeffs))
    dD = window_interior(A, {(p,): c for p, c in delta_pieces(d.module, d.cocycle.entries).items()},
                         max_degree)
    checks.append(_check("delta D_ab = 0 on the window", True, not dD))

    printed = cycle_residual(d, "printed_cycle")
    fixed = cycle_residual(d, "cycle")
    values["printed_cycle"] = {"coefficient": _q(cycle_coefficient(alpha, beta, "printed")),
                               "residual_terms": len(printed)}
    values["closed_cycle"] = {"coefficient": _q(cycle_coefficient(alpha, beta, "closed")),
                              "residual_terms": len(fixed)}
    checks.append(_check("(D_ab, x) + ((b-1)/(a-b)) 1 is (b+delta)-closed", True, not printed))
    checks.append(_check("(D_ab, x) + ((1-b)/(a-b)) 1 is (b+delta)-closed", True, not fixed))

    act = unit_action(A, alpha, d.cycle, d.module)
    values["unit_action_on_cycle"] = _q(act)
    checks.append(_check("1_a . (cycle_ab) is a nonzero multiple of 1_b", True, act != 0))

    d_a1 = dilation_generators(alpha, 1, max_degree, algebra=A)
    act1 = unit_action(A, alpha, cocycle_tensor(d_a1), d_a1.module)
    values["unit_action_on_D_a1"] = _q(act1)
    checks.append(_check("1_a . D_(a 1) = 0", "0", _q(act1)))

    d_1a = dilation_generators(1, alpha, max_degree, algebra=A)
    forms = _sample_one_forms(A, max_degree)
    rows = []
    for omega in forms:
        got = one_form_action(omega, d_1a)
        rows.append({"omega": _form_text(A, omega), "action": _q(got),
                     "contraction": _q(contraction_at_zero(A, omega))})
    values["one_form_action"] = rows
    # the generator of H^1(1, a) is fixed up to a scalar; with D(x) = 1 the
    # action is minus the contraction, so -D_(1 a) is the generator that
    # matches i_(d/dx) omega at 0 exactly
    checks.append(_check("omega . (-D_(1 a)) = (i_(d/dx) omega)(0)",
                         [r["contraction"] for r in rows],
                         [_q(-Fraction(r["action"])) for r in rows]))

    d_bg = dilation_generators(beta, gamma, max_degree, algebra=A)
    d_ag = dilation_generators(alpha, gamma, max_degree, algebra=A)
    comp, comp_module = twisted_bullet_hom(d.cycle, d_bg.cycle, d.module, d_bg.module)
    comp_res = window_interior(A, _total(comp_module, comp), max_degree - 2)
    lhs = unit_action(A, alpha, comp, comp_module)
    rhs = unit_action(A, alpha, d_ag.cycle, d_ag.module)
    values["composition"] = {"unit_action_on_product": _q(lhs), "unit_action_on_e_ag": _q(rhs)}
    checks.append(_check("e_ab . e_bg is (b+delta)-closed on the window interior", True, not comp_res))
    checks.append(_check("e_ab . e_bg and e_ag act on 1_a by nonzero multiples of 1_g",
                         True, lhs != 0 and rhs != 0))
    return {"scenario": "kx-dilation", "values": values, "checks": checks}


def _total(module, chain):
    return total_differential(EndoContext(module), chain)


def _sample_one_forms(A, max_degree):
    x = A.index("x")
    out = []
    top = min(max_degree - 1, 3)
    for n in range(top + 1):
        out.append({(A.index("1") if n == 0 else A.index("x" if n == 1 else f"x^{n}"), x): 1})
    out.append({(A.unit, x): 3, (A.index("x^2"), x): -2})
    return out


def _form_text(A, omega):
    terms = []
    for (f, _), c in sorted(omega.items()):
        terms.append(f"{_q(c)}*{A.labels[f]} dx")
    return " + ".join(terms)


# -- hkr-affine --------------------------------------------------------------

def hkr_affine(vars=1, max_degree=None, max_arity=None):
    if vars < 1:
        raise ScenarioError("vars must be at least 1")
    if max_degree is None:
        max_degree = 6 if vars == 1 else 4
    max_arity = max_arity or max_degree
    A = polynomial(vars, max_degree)
    report = homology_table(assemble_chain_complex(A, None, Window(max_arity, max_degree)))
    table = []
    mismatches = []
    for (i, w), (dim, _) in sorted(report.table.items()):
        oracle = hkr_dims_oracle(vars, i, w)
        table.append([i, w, dim])
        if dim != oracle:
            mismatches.append([i, w, dim, oracle])
    values = {"vars": vars, "max_degree": max_degree, "max_arity": max_arity, "table": table}
    checks = [_check("HH dims equal the Kahler-form count at every (form, weight)", [], mismatches)]
    return {"scenario": "hkr-affine", "values": values, "checks": checks}


# -- shuffle-oracle ------------------------------------------------------------

def shuffle_oracle(seed=3, samples=100, max_arity=3, max_weight=4):
    A = polynomial(1, 12)
    ev = Evaluation(AlgebraContext(A))
    s = Sampler(f"shuffle:{seed}", max_weight=max_weight)
    mismatches = 0
    nonzero = 0
    digest = 0
    for _ in range(samples):
        a = s.chain(A, max_arity)
        b = s.chain(A, max_arity)
        got = bullet_chain(ev, a, zero_cochain_chain(A, b))
        want = shuffle_product(A, a, b)
        nonzero += bool(want)
        mismatches += got != want
        digest += sum(abs(c) for c in want.values())
    values = {"seed": seed, "samples": samples, "nonzero": nonzero, "coefficient_mass": digest}
    checks = [_check("bullet with zero-cochain factors equals the shuffle product", 0, mismatches)]
    return {"scenario": "shuffle-oracle", "values": values, "checks": checks}


# -- keps-tower ----------------------------------------------------------------

def keps_tower(max_arity=6, seed=0, samples=200):
    A = dual_numbers()
    report = homology_table(assemble_chain_complex(A, None, Window(max_arity, max_arity + 1)))
    dims = report.by_index()
    tower = [dims.get(i, 0) for i in range(max_arity + 1)]
    expected = [2] + [1] * max_arity
    assoc = hom_associativity(A, seed=seed, samples=samples)
    values = {"max_arity": max_arity, "hh_dims": tower, "associativity": assoc}
    checks = [
        _check("HH_n(k[eps]) dims are 2, 1, 1, ...", expected, tower),
        _check("product on Hom-complex classes is associative up to boundaries",
               0, assoc["not_boundary"]),
    ]
    return {"scenario": "keps-tower", "values": values, "checks": checks}


def _endo_grading(A, key):
    from .cochains import piece_weight
    return (sum(len(p[0]) for p in key) - (len(key) - 1), sum(piece_weight(A, p) for p in key))


def hom_classes(A, max_arity=2, totals=(-1, 0, 1), map_weights=(-1, 0, 1)):
    """Representative cycles of the classes of the Hom complex of A,
    restricted to at most ``max_arity`` tail slots."""
    M = Bimodule(A)
    out = []
    for J in map_weights:
        c = assemble_hom_complex(M, max_arity, list(totals), J)
        groups = complex_homology(c)
        for T in totals:
            g = groups[T]
            for vec in g.representatives:
                out.append(((T, J), {g.basis[k]: v for k, v in sorted(vec.items())}))
    return out


class BoundaryOracle:
    """Decides membership in the boundaries of the Hom complex, looking in
    the subcomplexes with a bounded number of tail slots."""

    def __init__(self, A):
        self.A = A
        self.M = Bimodule(A)
        self.cache = {}

    def is_boundary(self, chain):
        if not chain:
            return True
        grades = {_endo_grading(self.A, k) for k in chain}
        if len(grades) != 1:
            raise ScenarioError("associator is not homogeneous")
        T, J = grades.pop()
        if total_differential(EndoContext(self.M), chain):
            raise ScenarioError("associator is not a cycle")
        n = max(len(k) - 1 for k in chain)
        for N in (n, n + 1):
            key = (N, T, J)
            if key not in self.cache:
                self.cache[key] = HomBoundaries(self.M, N, T, J)
            if self.cache[key].contains(chain):
                return True
        return False


def hom_associativity(A, seed=0, samples=60, max_arity=2):
    """(x.y).z - x.(y.z) for sampled triples of Hom-complex classes."""
    classes = hom_classes(A, max_arity)
    ev = Evaluation(EndoContext(Bimodule(A)))
    oracle = BoundaryOracle(A)
    s = Sampler(f"assoc:{seed}")
    triples = list(itertools.product(range(len(classes)), repeat=3))
    s.rng.shuffle(triples)
    triples = triples[:samples]
    nonzero_products = nonzero_assoc = bad = 0
    for i, j, k in triples:
        x, y, z = classes[i][1], classes[j][1], classes[k][1]
        left = bullet_chain(ev, bullet_chain(ev, x, y), z)
        right = bullet_chain(ev, x, bullet_chain(ev, y, z))
        nonzero_products += bool(left or right)
        diff = dict(left)
        axpy(diff, right, -1)
        nonzero_assoc += bool(diff)
        if not oracle.is_boundary(diff):
            bad += 1
    return {"classes": len(classes), "triples": len(triples), "nonzero_products": nonzero_products,
            "nonzero_associators": nonzero_assoc, "not_boundary": bad}


# -- running and frozen data -------------------------------------------------------

SCENARIOS = {
    "kx-dilation": kx_dilation,
    "hkr-affine": hkr_affine,
    "shuffle-oracle": shuffle_oracle,
    "keps-tower": keps_tower,
}


def resolved_params(name, params):
    """params with every default filled in, so equal runs share one key."""
    try:
        bound = inspect.signature(SCENARIOS[name]).bind(**params)
    except TypeError as exc:
        raise ScenarioError(f"bad parameters for {name}: {exc}") from None
    bound.apply_defaults()
    return dict(bound.arguments)


def scenario_key(name, params):
    full = resolved_params(name, params)
    return name + "".join(f" {k}={full[k]}" for k in sorted(full))


def load_expected(path=EXPECTED_FILE):
    if not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _normalize_json(obj):
    return json.loads(json.dumps(obj, sort_keys=True))


def values_diff(expected, actual, prefix=""):
    """Lines describing where two JSON values differ."""
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for k in sorted(set(expected) | set(actual)):
            out.extend(values_diff(expected.get(k), actual.get(k), f"{prefix}.{k}" if prefix else k))
        return out
    if expected != actual:
        return [f"{prefix}: expected {json.dumps(expected)}, got {json.dumps(actual)}"]
    return []


def run_scenario(name, params, expected=None):
    """Returns (report, frozen_status, diff_lines)."""
    if name not in SCENARIOS:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    key = scenario_key(name, params)
    report = _normalize_json(SCENARIOS[name](**params))
    frozen = (expected if expected is not None else load_expected()).get(key)
    if frozen is None:
        return report, "none", []
    diff = values_diff(frozen, report["values"])
    return report, ("match" if not diff else "mismatch"), diff


def format_report(report, frozen_status, diff):
    lines = [f"scenario {report['scenario']}"]
    for c in report["checks"]:
        status = "PASS" if c["ok"] else "FAIL"
        lines.append(f"{status}  {c['name']}")
        if not c["ok"]:
            lines.append(f"      expected {json.dumps(c['expected'])}")
            lines.append(f"      actual   {json.dumps(c['actual'])}")
    lines.append(f"frozen data: {frozen_status}")
    lines.extend(f"      {d}" for d in diff)
    lines.append("values: " + json.dumps(report["values"], sort_keys=True))
    return "\n".join(lines) + "\n"


def freeze(entries, path=EXPECTED_FILE):
    """Write the values of the given (name, params) runs as frozen data."""
    data = load_expected(path)
    for name, params in entries:
        report = _normalize_json(SCENARIOS[name](**params))
        data[scenario_key(name, params)] = report["values"]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
