"""Smoke test for the pyumbral extension module.

Build and install it first, e.g.

    maturin develop -m crates/python/Cargo.toml

then run ``python python/smoke_test.py`` (or ``pytest python/``).
"""

from fractions import Fraction

import pyumbral as pu


def test_sequences():
    assert [pu.derangement(n) for n in range(7)] == [1, 0, 1, 2, 9, 44, 265]
    assert pu.factorial(10) == 3628800
    assert pu.binomial(30, 15) == 155117520
    assert pu.binomial(5, 7) == 0
    assert pu.derangement(40) > 2**64


def test_polynomials():
    p = pu.IntPoly([1, 1])
    assert (p * p).coeffs == [1, 2, 1]
    assert (p + pu.IntPoly([-1, -1])).degree == -1
    assert str(pu.binomial_power(-1, 3)) == "-1 + 3*x - 3*x^2 + x^3"
    assert pu.derangement_poly(3).coeffs == [2, 3, 0, 1]
    assert pu.derangement_poly(3)(1) == 6
    assert pu.derangement_poly_eval(2, Fraction(1, 2)) == Fraction(5, 4)


def test_umbra():
    assert pu.umbral_eval(pu.IntPoly([0, 0, 0, 0, 0, 1])) == 44
    assert pu.umbral_eval(pu.IntPoly([1, 2, 1])) == 2
    shifted = pu.substitute_shift(pu.IntPoly([0, 0, 1]), 1)
    assert shifted.coeffs == [1, 2, 1]


def test_xi():
    assert pu.xi(2) == Fraction(5, 2)
    assert pu.xi2(3) == Fraction(53, 9)
    for n in range(1, 40):
        assert pu.xi2(n) - pu.xi(n) == n
        assert pu.xi2_scaled(n) == pu.xi2_closed_scaled(n) == pu.xi2_via_derangement_scaled(n)
    try:
        pu.xi(0)
    except ValueError:
        pass
    else:
        raise AssertionError("xi(0) must raise")


def test_verify_and_replay():
    for name in ["eq22", "eq23", "eq24", "umbral"]:
        assert all(pu.verify(name, n).passed for n in range(0, 12))
    for name in ["conjecture", "rewrites", "chain"]:
        assert all(pu.verify(name, n) for n in range(1, 12))
    bad = pu.verify("eq23", 3, inject_fault=3)
    assert not bad.passed and bad.witnesses
    assert '"identity":"EQ23"' in bad.to_json()
    lines = pu.replay_proof(10)
    assert len(lines) == 6
    assert len({value for _, value in lines}) == 1
    assert lines[0][1] == pu.xi2_scaled(10)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok  {name}")
    print("pyumbral smoke test passed")
