import pytest
from hypothesis import given, settings, strategies as st

from linspec.cremona import (
    CremonaStepCapError,
    apply_raw,
    cr_cohomology,
    cr_divisor,
    cremona_apply,
    cremona_c,
    cremona_reduce,
    is_valid_move,
)
from linspec.lattice import LinearSystemSpec, PicardClass


def S(n, d, m=""):
    return LinearSystemSpec.parse(n, d, m)


def test_examples():
    assert cremona_apply(S(2, 2, "1^3"), (1, 2, 3)) == S(2, 1, "0^3")
    assert cremona_apply(S(3, 4, "2^9"), (1, 2, 3, 4)) == S(3, 4, "2^9")
    assert cremona_apply(S(2, 1, "0^3"), (1, 2, 3)) == S(2, 2, "1^3")
    assert cremona_c(S(3, 4, "2^9"), (1, 2, 3, 4)) == 0


def test_negative_results():
    d, mults, c = apply_raw(S(2, 1, "2,2,2"), (1, 2, 3))
    assert (d, mults, c) == (-4, (-3, -3, -3), -5)
    assert not is_valid_move(S(2, 1, "2,2,2"), (1, 2, 3))
    with pytest.raises(ValueError):
        cremona_apply(S(2, 1, "2,2,2"), (1, 2, 3))
    with pytest.raises(ValueError, match="n\\+1"):
        apply_raw(S(2, 1, "2,2,2"), (1, 2))


def test_reduce():
    assert cremona_reduce(S(3, 4, "2^9")) == (S(3, 4, "2^9"), [])
    final, moves = cremona_reduce(S(2, 2, "1^3,0^2"))
    assert final == S(2, 1, "0^5") and len(moves) == 1 and moves[0].c == -1
    final, moves = cremona_reduce(S(2, 6, "3^3,2,1"))
    assert cremona_c(final, sorted(final.order[:3])) >= 0 or final.d + cremona_c(final, sorted(final.order[:3])) < 0
    assert moves[0].to_json() == {"base": [1, 2, 3], "c": -3}
    with pytest.raises(CremonaStepCapError):
        cremona_reduce(S(2, 20, "9^3,8^3"), max_steps=1)


def test_cr_divisor():
    assert cr_divisor(2) == PicardClass(2, {(1,): -1, (2,): -1, (3,): -1})
    c3 = cr_divisor(3)
    assert c3.degree == 3 and c3.coefficient((1,)) == -2 and c3.coefficient((1, 2)) == -1
    assert len(c3.exc) == 4 + 6
    c4 = cr_divisor(4)
    assert (c4.coefficient((2,)), c4.coefficient((2, 5)), c4.coefficient((1, 2, 3))) == (-3, -2, -1)
    with pytest.raises(ValueError):
        cr_divisor(1)


def test_cr_cohomology():
    assert cr_cohomology(3, 2) == (10, 0, 0, 0)
    assert cr_cohomology(3, -2) == (0, 0, 0, 0)
    assert cr_cohomology(2, -4) == (0, 0, 3)
    for n in (2, 3, 4):
        for b in range(1, n + 1):
            assert cr_cohomology(n, -b) == (0,) * (n + 1)


moves = st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, 12), st.lists(st.integers(0, 12), min_size=n + 1, max_size=n + 4)))


@settings(max_examples=300, deadline=None)
@given(moves, st.randoms(use_true_random=False))
def test_involution_and_b_shift(data, rnd):
    # n+1 multiplicities gain c and n copies of the degree gain c, so b moves by c
    n, d, m = data
    spec = LinearSystemSpec(n, d, tuple(m))
    base = tuple(sorted(rnd.sample(range(1, spec.s + 1), n + 1)))
    d1, m1, c = apply_raw(spec, base)
    assert sum(m1) - n * d1 == spec.b + c
    # the second move is taken on the raw image, signs and all
    c2 = (n - 1) * d1 - sum(m1[i - 1] for i in base)
    assert c2 == -c
    assert d1 + c2 == d and tuple(x + c2 if i in base else x for i, x in enumerate(m1, 1)) == spec.mults
