import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley_dirac.clifford import (
    NOT_CERTIFIED,
    PIN_PLUS,
    Multivector,
    Signature,
    SignatureMismatch,
    SingularElement,
    blade_product,
    embed,
    geometric_product,
    grade_project,
    integer_power,
    inverse,
    involution,
    kelvin_inverse,
    parse,
    pseudoscalar,
    quadratic_square,
    random_multivector,
    render,
    split_signature,
    try_inverse,
    versor_check,
)

CL11 = split_signature(1)
CL22 = split_signature(2)
E1 = Multivector.generator(CL11, 1)
E2 = Multivector.generator(CL11, 2)


def naive_blade_product(sig, a_mask, b_mask):
    """Permutation oracle: reduce the concatenated generator sequence by
    explicit adjacent swaps and metric contractions."""
    seq = []
    for mask in (a_mask, b_mask):
        for i in range(sig.generators):
            if mask >> i & 1:
                seq.append(i + 1)
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(seq) - 1:
            if seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                sign = -sign
                changed = True
            elif seq[i] == seq[i + 1]:
                sign *= sig.generator_square(seq[i])
                del seq[i : i + 2]
                changed = True
            else:
                i += 1
    mask = 0
    for i in seq:
        mask |= 1 << (i - 1)
    return mask, sign


@pytest.mark.parametrize("sig", [CL11, CL22, Signature(2, 1), Signature(0, 3)])
def test_blade_product_matches_permutation_oracle(sig):
    for a in range(sig.blade_count):
        for b in range(sig.blade_count):
            assert blade_product(sig, a, b) == naive_blade_product(sig, a, b)


def test_blade_product_oracle_cl33_sample():
    sig = split_signature(3)
    rng = random.Random(5)
    for _ in range(500):
        a = rng.randrange(sig.blade_count)
        b = rng.randrange(sig.blade_count)
        assert blade_product(sig, a, b) == naive_blade_product(sig, a, b)


def test_generator_relations():
    assert E1 * E1 == -1
    assert E2 * E2 == 1
    assert Multivector.generator(CL22, 3) * Multivector.generator(CL22, 1) == -(
        Multivector.generator(CL22, 1) * Multivector.generator(CL22, 3)
    )


def test_identity_element():
    rng = random.Random(0)
    one = Multivector.one(CL22)
    for _ in range(20):
        a = random_multivector(rng, CL22)
        assert one * a == a
        assert a * one == a


def test_signature_mismatch_raises():
    with pytest.raises(SignatureMismatch):
        geometric_product(E1, Multivector.generator(CL22, 1))


def test_grade_project_examples():
    a = 3 + 2 * E1
    assert grade_project(a, 0) == 3
    e12 = E1 * E2
    assert grade_project(e12, 2) == e12
    assert grade_project(E1, 2).is_zero()
    with pytest.raises(ValueError):
        grade_project(a, 5)


def test_grade_partition():
    rng = random.Random(1)
    for _ in range(50):
        a = random_multivector(rng, CL22)
        total = Multivector.zero(CL22)
        for r in range(CL22.generators + 1):
            part = grade_project(a, r)
            assert all(bin(m).count("1") == r for m in part.support())
            total = total + part
        assert total == a


def test_involution_examples():
    assert involution(E1, "main") == -E1
    assert involution(E2, "main") == E2
    # reversion(e1 e2) = e2 e1 = -e1 e2, by the product oracle
    assert involution(E1 * E2, "reversion") == E2 * E1
    w = E1 + 2 * E2  # v + u with v = e1-part, u = e2-part
    assert involution(w, "conjugation") == -E1 + 2 * E2
    assert involution(w, "main") == involution(w, "conjugation")
    assert involution(w, "reversion") == w
    with pytest.raises(ValueError):
        involution(w, "grade")


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_involution_laws_random(n, seed):
    sig = split_signature(n)
    rng = random.Random(seed)
    a = random_multivector(rng, sig)
    b = random_multivector(rng, sig)
    ab = a * b
    assert ab.main_involution() == a.main_involution() * b.main_involution()
    assert ab.reversion() == b.reversion() * a.reversion()
    assert ab.conjugation() == b.conjugation() * a.conjugation()
    for kind in ("main", "reversion", "conjugation"):
        assert involution(involution(a, kind), kind) == a


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_associativity_random(n, seed):
    sig = split_signature(n)
    rng = random.Random(seed)
    a = random_multivector(rng, sig)
    b = random_multivector(rng, sig)
    c = random_multivector(rng, sig)
    assert (a * b) * c == a * (b * c)


def test_quadratic_square():
    assert quadratic_square(E2) == 1
    assert quadratic_square(E1 + 2 * E2) == 3
    assert quadratic_square(E1 + E2) == 0
    with pytest.raises(ValueError):
        quadratic_square(1 + E1)


def test_kelvin_inverse():
    w = E1 + 2 * E2
    assert kelvin_inverse(w) == w / 3
    assert w * kelvin_inverse(w) == 1
    assert kelvin_inverse(E2) == E2
    with pytest.raises(SingularElement):
        kelvin_inverse(E1 + E2)


def test_kelvin_inverse_random_nonnull():
    rng = random.Random(2)
    sig = split_signature(2)
    count = 0
    while count < 50:
        w = grade_project(random_multivector(rng, sig), 1)
        if quadratic_square(w) == 0:
            continue
        assert w * kelvin_inverse(w) == 1
        count += 1


def test_try_inverse_examples():
    e = E1 * E2
    assert e * e == 1
    a = 1 + 3 * e
    expected = (1 - 3 * e) * Fraction(-1, 8)
    assert try_inverse(a) == expected
    assert a * try_inverse(a) == 1
    assert try_inverse(1 + e) is None
    assert (1 + e) * (1 - e) == Multivector.zero(CL11)
    assert try_inverse(Multivector.scalar(CL11, Fraction(7, 3))) == Fraction(3, 7)
    assert try_inverse(Multivector.zero(CL11)) is None
    with pytest.raises(SingularElement):
        inverse(1 + e)


def test_try_inverse_dense_random():
    rng = random.Random(4)
    sig = split_signature(2)
    invertible = 0
    for _ in range(40):
        a = random_multivector(rng, sig, max_blades=5)
        ia = try_inverse(a)
        if ia is not None:
            assert a * ia == 1
            assert ia * a == 1
            invertible += 1
    assert invertible >= 20


def test_integer_power():
    phi = Multivector(CL11, {0: Fraction(5, 4), 0b11: Fraction(3, 4)})
    assert integer_power(phi, 0) == 1
    assert integer_power(phi, -1) == Multivector(
        CL11, {0: Fraction(5, 4), 0b11: Fraction(-3, 4)}
    )
    assert integer_power(phi, 2) == Multivector(
        CL11, {0: Fraction(17, 8), 0b11: Fraction(15, 8)}
    )
    assert integer_power(phi, 3) == phi * phi * phi
    assert integer_power(phi, -2) == inverse(phi) * inverse(phi)
    with pytest.raises(SingularElement):
        integer_power(1 + E1 * E2, -1)


def test_pseudoscalar():
    gamma = pseudoscalar(1)
    assert gamma == E2 * E1
    assert gamma == -(E1 * E2)
    assert gamma * gamma == 1
    gamma2 = pseudoscalar(2)
    assert gamma2 * gamma2 == 1
    even = Multivector.generator(CL22, 1) * Multivector.generator(CL22, 3)
    assert gamma2 * even == even * gamma2


def test_versor_check():
    assert versor_check(E2) == (PIN_PLUS, True)
    assert versor_check(E1) == (PIN_PLUS, False)
    assert versor_check(Multivector.scalar(CL11, 2)).membership == NOT_CERTIFIED
    assert versor_check(Multivector.one(CL11)) == (PIN_PLUS, True)


def test_embedding():
    small = Signature(1, 1)
    big = split_signature(2)
    e1 = Multivector.generator(small, 1)
    e2 = Multivector.generator(small, 2)
    assert embed(e1, big) == Multivector.generator(big, 1)
    assert embed(e2, big) == Multivector.generator(big, 3)
    # embedding is a homomorphism on a sample
    rng = random.Random(9)
    for _ in range(20):
        a = random_multivector(rng, small)
        b = random_multivector(rng, small)
        assert embed(a * b, big) == embed(a, big) * embed(b, big)
    with pytest.raises(SignatureMismatch):
        embed(Multivector.generator(big, 1), small)


def test_render_examples():
    m = Multivector(CL22, {0: Fraction(5, 4), 0b101: Fraction(3, 4)})
    assert render(m) == "5/4 + 3/4*e1e3"
    assert render(Multivector.zero(CL11)) == "0"
    assert render(-E1) == "-e1"
    assert render(E1 - E2) == "e1 - e2"
    assert render(Multivector.scalar(CL11, Fraction(-2, 7))) == "-2/7"


def test_parse_examples():
    m = Multivector(CL22, {0: Fraction(5, 4), 0b101: Fraction(3, 4)})
    assert parse("5/4 + 3/4*e1e3", CL22) == m
    assert parse("-e1 + 2", CL22) == 2 - Multivector.generator(CL22, 1)
    assert parse("0", CL11).is_zero()
    with pytest.raises(ValueError):
        parse("e3e1", CL22)  # not ascending
    with pytest.raises(ValueError):
        parse("5/4 +", CL22)
    with pytest.raises(ValueError):
        parse("e9", CL22)


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_render_parse_roundtrip(n, seed):
    sig = split_signature(n)
    rng = random.Random(seed)
    a = random_multivector(rng, sig)
    assert parse(render(a), sig) == a


def test_plane_fast_path_agrees_with_dense_solve():
    # elements supported on {1, B} invert in closed form; the dense
    # solver must produce the identical inverse
    from cayley_dirac.clifford import _dense_inverse

    rng = random.Random(31)
    sig = split_signature(2)
    checked = 0
    while checked < 40:
        mask = rng.randrange(1, sig.blade_count)
        a = Multivector(
            sig,
            {0: Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
             mask: Fraction(rng.randint(-6, 6), rng.randint(1, 4))},
        )
        if a.is_zero():
            continue
        fast = try_inverse(a)
        dense = _dense_inverse(a)
        assert fast == dense
        checked += 1
