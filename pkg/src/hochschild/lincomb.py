"""Sparse linear combinations: plain dicts mapping a hashable key to a rational.

Coefficients are ``int`` or ``fractions.Fraction``; zero coefficients are
never stored.  These helpers are the innermost loop of every operation in the
package, so they mutate in place and avoid allocation where possible.
"""

from fractions import Fraction


def axpy(target, source, scale=1):
    """target += scale * source (in place); returns target."""
    if not scale:
        return target
    for key, value in source.items():
        new = target.get(key, 0) + scale * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)
    return target


def add_term(target, key, value):
    if not value:
        return target
    new = target.get(key, 0) + value
    if new:
        target[key] = new
    else:
        target.pop(key, None)
    return target


def scaled(source, scale):
    if not scale:
        return {}
    return {key: scale * value for key, value in source.items()}


def combine(*pairs):
    """Return sum(c * v for c, v in pairs)."""
    out = {}
    for scale, vec in pairs:
        axpy(out, vec, scale)
    return out


def normalize(coeff):
    """Canonical exact form: ints stay ints, integral fractions become ints."""
    if isinstance(coeff, Fraction) and coeff.denominator == 1:
        return coeff.numerator
    return coeff


def as_rational(value):
    """Parse "p/q", "p", an int or a Fraction into an exact rational."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return normalize(value)
    if isinstance(value, str):
        return normalize(Fraction(value.strip()))
    raise TypeError(f"not an exact rational: {value!r}")


def fmt_coeff(coeff):
    return str(normalize(Fraction(coeff)))
