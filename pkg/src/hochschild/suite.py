"""The randomized identity suite behind ``hochschild check``.

Each identity draws its own inputs from a sampler seeded by
``(seed, identity name)``, so adding or reordering identities never changes
the inputs of the others.  A result records how many samples were drawn, how
many gave a nonzero left-hand side (so trivially vanishing runs are visible)
and the smallest failing input, if any.
"""

from .algebra import Bimodule, identity_automorphism
from .chains import (AlgebraContext, ChainError, Evaluation, boundary_b, bullet_chain,
                     cartan_residual, chain_map_residual, connes_B, lie_L_D, total_differential)
from .cochains import (brace_composition_pieces, brace_pieces, bracket_pieces, cup_pieces,
                       delta_pieces, piece_deg, Cochain, lifted_cup, lifted_differential)
from .cyclic import PeriodicElement, periodic_bullet, rinehart_residual, periodic_chain_map_residual
from .lincomb import axpy
from .sampling import Sampler
from .twisted import (twisted_bullet_chain, twisted_bullet_hom, twisted_hom_residual,
                      twisted_chain_map_residual)


class IdentityResult:
    def __init__(self, name, samples, nonzero, witness):
        self.name = name
        self.samples = samples
        self.nonzero = nonzero
        self.witness = witness

    @property
    def passed(self):
        return self.witness is None

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}  (samples={self.samples}, nonzero={self.nonzero})"
        if self.witness is not None:
            text += f"\n      witness: {self.witness}"
        return text


def _sgn(e):
    return -1 if e % 2 else 1


def _diff(lhs, rhs):
    out = dict(lhs)
    axpy(out, rhs, -1)
    return out


def _size(obj):
    return len(repr(obj))


class SuiteConfig:
    def __init__(self, seed=0, samples=50, max_arity=3, max_degree=None, twists=None):
        if samples < 1:
            raise ValueError("samples must be at least 1")
        if max_arity < 1:
            raise ValueError("max arity must be at least 1")
        self.seed = seed
        self.samples = samples
        self.max_arity = max_arity
        self.max_degree = max_degree
        self.twists = twists


def _twists(A, cfg):
    """(alpha, beta, gamma) for the twisted identities; identity twists when
    no automorphisms are available."""
    autos = list(cfg.twists or [])
    if not autos:
        ident = identity_automorphism(A)
        return ident, ident, ident
    while len(autos) < 3:
        autos.append(autos[len(autos) % len(autos)])
    return autos[0], autos[1], autos[2]


def _modules(A, cfg):
    al, be, ga = _twists(A, cfg)
    ident = identity_automorphism(A)
    return al, be, ga, ident


# -- individual identities ------------------------------------------------------
#
# Each returns (residual, lhs_nonzero, witness_description).

def _delta_squared(s, A, cfg):
    al, be, _, _ = _modules(A, cfg)
    M = s.rng.choice([Bimodule(A), Bimodule(A, al, be)])
    D = s.cochain(A, s.rng.randint(0, cfg.max_arity))
    once = delta_pieces(M, D)
    return delta_pieces(M, once), bool(once), ("D", D, M)


def _b_squared(s, A, cfg):
    al, be, _, _ = _modules(A, cfg)
    M = s.rng.choice([Bimodule(A), Bimodule(A, al, be)])
    ctx = AlgebraContext(M)
    a = s.chain(A, cfg.max_arity)
    once = total_differential(ctx, a)
    return total_differential(ctx, once), bool(once), ("a", a, M)


def _B_squared(s, A, cfg):
    ctx = AlgebraContext(A)
    a = s.chain(A, cfg.max_arity)
    once = connes_B(ctx, a)
    return connes_B(ctx, once), bool(once), ("a", a)


def _bB(s, A, cfg):
    ctx = AlgebraContext(A)
    a = s.chain(A, cfg.max_arity)
    lhs = boundary_b(ctx, connes_B(ctx, a))
    other = connes_B(ctx, boundary_b(ctx, a))
    out = dict(lhs)
    axpy(out, other)
    return out, bool(lhs or other), ("a", a)


def _two_cochains(s, A, cfg):
    top = min(cfg.max_arity, 2)
    D = s.cochain(A, s.rng.randint(0, top))
    E = s.cochain(A, s.rng.randint(0, top))
    return D, E


def _leibniz_cup(s, A, cfg):
    M = Bimodule(A)
    D, E = _two_cochains(s, A, cfg)
    degD = piece_deg(A, next(iter(D)))
    lhs = delta_pieces(M, cup_pieces(A, D, E))
    rhs = cup_pieces(A, delta_pieces(M, D), E)
    axpy(rhs, cup_pieces(A, D, delta_pieces(M, E)), _sgn(degD))
    return _diff(lhs, rhs), bool(lhs), ("D", D, "E", E)


def _leibniz_bracket(s, A, cfg):
    M = Bimodule(A)
    D, E = _two_cochains(s, A, cfg)
    sD = piece_deg(A, next(iter(D))) - 1
    lhs = delta_pieces(M, bracket_pieces(A, D, E))
    rhs = bracket_pieces(A, delta_pieces(M, D), E)
    axpy(rhs, bracket_pieces(A, D, delta_pieces(M, E)), _sgn(sD))
    return _diff(lhs, rhs), bool(lhs), ("D", D, "E", E)


def _brace_comp(s, A, cfg):
    top = min(cfg.max_arity, 2)
    D = s.cochain(A, s.rng.randint(1, top), support=2)
    d = len(next(iter(D))[0])
    Es = [s.cochain(A, s.rng.randint(0, top), support=2) for _ in range(s.rng.randint(0, d))]
    arity = len(next(iter(D))[0]) + sum(len(next(iter(E))[0]) for E in Es) - len(Es)
    Fs = [s.cochain(A, s.rng.randint(0, top), support=2)
          for _ in range(s.rng.randint(0, min(arity, 2)))]
    inner = brace_pieces(A, D, Es) if Es else dict(D)
    lhs = brace_pieces(A, inner, Fs) if Fs else inner
    rhs = brace_composition_pieces(A, D, Es, Fs)
    return _diff(lhs, rhs), bool(lhs), ("D", D, "E", Es, "F", Fs)


def _lift_morphism(s, A, cfg):
    M = Bimodule(A)
    D, E = _two_cochains(s, A, cfg)
    Fs = []
    for _ in range(s.rng.randint(0, 3)):
        F = s.cochain(A, s.rng.randint(0, 1), support=2)
        F = {p: c for p, c in F.items() if p != ((), A.unit)}
        if F:
            Fs.append(F)
    FC = [Cochain(M, F) for F in Fs]
    DC, EC = Cochain(M, D), Cochain(M, E)
    DE = cup_pieces(A, D, E)
    lhs1 = brace_pieces(A, DE, Fs) if Fs else DE
    out = _diff(lhs1, lifted_cup(DC, EC, FC).entries)
    dD = delta_pieces(M, D)
    lhs2 = brace_pieces(A, dD, Fs) if Fs else dD
    axpy(out, _diff(lhs2, lifted_differential(DC, FC).entries))
    return out, bool(lhs1 or lhs2), ("D", D, "E", E, "F", Fs)


def _bullet_chain_map(s, A, cfg):
    ctx = AlgebraContext(A)
    ev = Evaluation(ctx)
    a = s.chain(A, cfg.max_arity, support=2)
    hint = next(iter(a))
    x = s.endo_chain(A, min(cfg.max_arity, 2), hint=hint)
    return chain_map_residual(ev, a, x), bool(bullet_chain(ev, a, x)), ("a", a, "x", x)


def _periodic_chain_map(s, A, cfg):
    ctx = AlgebraContext(A)
    ev = Evaluation(ctx)
    a = s.chain(A, cfg.max_arity, support=1)
    hint = next(iter(a))
    x = s.endo_chain(A, min(cfg.max_arity, 2), hint=hint, support=1)
    return periodic_chain_map_residual(ev, a, x), bool(periodic_bullet(ev, a, x)), ("a", a, "x", x)


def _twisted_chain_map(s, A, cfg):
    al, be, ga, ident = _modules(A, cfg)
    if s.rng.random() < 0.5:
        a_mod = Bimodule(A, ident, al)
        x_mod = Bimodule(A, al, be)
        a = s.chain(A, cfg.max_arity, support=2)
        x = s.endo_chain(A, min(cfg.max_arity, 2), hint=next(iter(a)))
        res = twisted_chain_map_residual(a, x, a_mod, x_mod)
        lhs = twisted_bullet_chain(a, x, a_mod, x_mod)[0]
        return res, bool(lhs), ("a", a, "x", x, "twists", (al.name, be.name))
    x_mod = Bimodule(A, al, be)
    y_mod = Bimodule(A, be, ga)
    x = s.endo_chain(A, 1, max_slot_arity=1, support=1)
    y = s.endo_chain(A, 1, max_slot_arity=1, support=1)
    res = twisted_hom_residual(x, y, x_mod, y_mod)
    lhs = twisted_bullet_hom(x, y, x_mod, y_mod)[0]
    return res, bool(lhs), ("x", x, "y", y, "twists", (al.name, be.name, ga.name))


def _cartan(s, A, cfg):
    ctx = AlgebraContext(A)
    a = s.chain(A, cfg.max_arity, support=2)
    D = s.cochain(A, s.rng.randint(0, min(cfg.max_arity, 3)), support=2, hint=next(iter(a)))
    return cartan_residual(ctx, D, a), bool(lie_L_D(ctx, D, a)), ("D", D, "a", a)


def _rinehart(s, A, cfg):
    ctx = AlgebraContext(A)
    a = s.chain(A, cfg.max_arity, support=1)
    D = s.cochain(A, s.rng.randint(0, 2), support=1, hint=next(iter(a)))
    arity = max(len(k) for k in a) + 4
    res = rinehart_residual(D, PeriodicElement(ctx, a, arity))
    return res.chain, bool(lie_L_D(ctx, D, a)), ("D", D, "a", a)


IDENTITIES = [
    ("delta^2 = 0", _delta_squared),
    ("b^2 = 0", _b_squared),
    ("B^2 = 0", _B_squared),
    ("bB + Bb = 0", _bB),
    ("Leibniz rule for the cup product", _leibniz_cup),
    ("Leibniz rule for the bracket", _leibniz_bracket),
    ("brace composition", _brace_comp),
    ("lift to cochains of E* is a dga morphism", _lift_morphism),
    ("bullet pairing is a chain map", _bullet_chain_map),
    ("periodic bullet pairing is a chain map", _periodic_chain_map),
    ("twisted bullet pairings are chain maps", _twisted_chain_map),
    ("[b, L_D] = -L_(delta D)", _cartan),
    ("Rinehart homotopy formula", _rinehart),
]


def run_identity(name, fn, A, cfg):
    s = Sampler(f"{cfg.seed}:{name}", max_weight=cfg.max_degree)
    nonzero = 0
    witness = None
    for _ in range(cfg.samples):
        try:
            res, nz, desc = fn(s, A, cfg)
        except ChainError as exc:
            # e.g. a residual whose components have mixed parity
            res, nz, desc = {"error": str(exc)}, True, "sample raised"
        nonzero += bool(nz)
        if res:
            text = f"{desc} -> residual {dict(sorted(res.items(), key=repr)[:4])}"
            if witness is None or _size(text) < _size(witness):
                witness = text
    return IdentityResult(name, cfg.samples, nonzero, witness)


def run_suite(A, cfg, only=None):
    results = []
    for name, fn in IDENTITIES:
        if only is not None and name not in only:
            continue
        results.append(run_identity(name, fn, A, cfg))
    return results
