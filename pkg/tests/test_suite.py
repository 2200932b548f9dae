import pytest

import hochschild.chains as chains
from hochschild.families import (dilation, dual_numbers, exterior, free_truncated, matrix_algebra,
                                 polynomial, truncated_polynomial)
from hochschild.suite import IDENTITIES, SuiteConfig, run_identity, run_suite


def _config(A, **kw):
    twists = None
    if {"x", "eps"} & set(A.labels):
        twists = [dilation(A, 2), dilation(A, 3), dilation(A, 5)]
    return SuiteConfig(twists=twists, **kw)


@pytest.mark.parametrize("make", [dual_numbers, lambda: truncated_polynomial(3),
                                  lambda: exterior(2), lambda: matrix_algebra(2), free_truncated,
                                  lambda: polynomial(1, 6)])
def test_all_identities_pass(make):
    A = make()
    results = run_suite(A, _config(A, seed=1, samples=20, max_arity=3))
    assert len(results) == len(IDENTITIES) == 13
    for r in results:
        assert r.passed, r.line()


def test_identities_are_not_vacuous():
    A = exterior(2)
    results = run_suite(A, SuiteConfig(seed=2, samples=30, max_arity=3))
    for r in results:
        assert r.nonzero > 0, r.name


def test_only_filter_and_line():
    A = dual_numbers()
    results = run_suite(A, SuiteConfig(samples=5), only={"b^2 = 0"})
    assert [r.name for r in results] == ["b^2 = 0"]
    assert results[0].line().startswith("PASS  b^2 = 0  (samples=5, nonzero=")


def test_inputs_depend_only_on_seed_and_name():
    A = truncated_polynomial(3)
    cfg = SuiteConfig(seed=4, samples=10)
    full = {r.name: r.nonzero for r in run_suite(A, cfg)}
    one = run_suite(A, cfg, only={"Leibniz rule for the bracket"})[0]
    assert full["Leibniz rule for the bracket"] == one.nonzero


def test_bad_config():
    with pytest.raises(ValueError):
        SuiteConfig(samples=0)
    with pytest.raises(ValueError):
        SuiteConfig(max_arity=0)


# -- mutation checks: a wrong sign convention must be caught ----------------------

def _by_name(name):
    return dict(IDENTITIES)[name]


@pytest.mark.parametrize("factor", ["shifted", "none"])
def test_wrong_bullet_convention_is_detected(monkeypatch, factor):
    monkeypatch.setattr(chains.DEFAULT_CONVENTION, "wrap_factor", factor)
    results = run_suite(matrix_algebra(2), SuiteConfig(seed=0, samples=60))
    failed = {r.name for r in results if not r.passed}
    assert {"bullet pairing is a chain map", "periodic bullet pairing is a chain map"} <= failed
    assert "b^2 = 0" not in failed
    for r in results:
        if not r.passed:
            assert "witness:" in r.line()


def test_wrong_wrap_sign_is_detected(monkeypatch):
    original = chains.boundary_b

    def printed(ctx, chain, wrap="koszul"):
        return original(ctx, chain, "printed")

    monkeypatch.setattr(chains, "boundary_b", printed)
    A = exterior(2)
    r = run_identity("b^2 = 0", _by_name("b^2 = 0"), A, SuiteConfig(seed=0, samples=60))
    assert not r.passed
