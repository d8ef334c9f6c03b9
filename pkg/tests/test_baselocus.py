import itertools

from hypothesis import given, settings, strategies as st

from linspec.baselocus import base_locus, check_conditions, cycle_family, strict_transform, tilde
from linspec.cremona import cr_divisor
from linspec.lattice import LinearSystemSpec, PicardClass


def S(n, d, m=""):
    return LinearSystemSpec.parse(n, d, m)


def test_base_locus_examples():
    t = base_locus(S(4, 10, "6^7"))
    assert len(t.of_dimension(0)) == 7 and set(t.of_dimension(0).values()) == {6}
    assert len(t.of_dimension(1)) == 21 and set(t.of_dimension(1).values()) == {2}
    assert len(t.entries) == 28 and t.rbar == 1
    t = base_locus(S(3, 4, "2^9"))
    assert len(t.entries) == 9 and t.rbar == 1
    assert base_locus(S(3, 3, "5,3")).entries[(1, 2)] == 5
    assert base_locus(S(2, 2)).rbar == -1
    doc = base_locus(S(4, 10, "6^7")).to_json()
    assert doc["b"] == 2 and {"I": [1, 2], "k": 2} in doc["entries"]


def test_transform_toric_examples():
    cls = tilde(S(2, 1, "2^3"))
    assert cls == -4 * cr_divisor(2)
    assert cls == PicardClass(-8, {(1,): 4, (2,): 4, (3,): 4})
    for n in (2, 3, 4):
        assert tilde(LinearSystemSpec(n, 3, (3,) * n + (0,))) == PicardClass(0, {})
    assert strict_transform(S(3, 5, "1,1"), 1) == PicardClass.from_spec(S(3, 5, "1,1"))


def test_hyperplane_expansion_identity():
    # on n+1 points with b >= n-1, or m <= d and b >= 1, the top transform is -b Cr_n(H)
    for n in (2, 3, 4):
        for d in range(1, 5):
            for m in itertools.combinations_with_replacement(range(d + 2), n + 1):
                spec = LinearSystemSpec(n, d, m)
                if spec.b >= n - 1 or (max(m) <= d and spec.b >= 1):
                    assert tilde(spec) == -spec.b * cr_divisor(n)
                elif max(m) <= d and spec.b == 0:
                    assert tilde(spec) == PicardClass(0, {})


specs = st.integers(2, 4).flatmap(lambda n: st.integers(1, 7).flatmap(
    lambda d: st.lists(st.integers(0, d), max_size=8).map(lambda m: LinearSystemSpec(n, d, tuple(m)))))


@settings(max_examples=150, deadline=None)
@given(specs)
def test_levels_differ_by_entries(spec):
    loci = base_locus(spec)
    for r in range(1, spec.n - 1):
        diff = strict_transform(spec, r) - strict_transform(spec, r - 1)
        want = {I: -k for I, k in loci.of_dimension(r).items()}
        assert diff == PicardClass(0, want)


@settings(max_examples=150, deadline=None)
@given(specs)
def test_subsets_of_nonneg_cycles_are_nonneg(spec):
    for I in cycle_family(spec):
        for size in range(1, len(I)):
            for J in itertools.combinations(I, size):
                assert spec.K(J) >= 0


def test_conditions():
    for m in ("3,2,1", "4^3", "2,2"):
        assert check_conditions(S(2, 4, m)).holds_III
    rep = check_conditions(S(2, 4, "4,3,3,0"))
    assert rep.holds_I is False
    # s = n+2 with b = 2: complementary pairs of lines both in the base locus
    rep = check_conditions(S(2, 3, "3,3,1,1"))
    assert not rep.holds_III
    assert ((1, 2), (3, 4)) in rep.witnesses["III"] or any(set(a) | set(b) == {1, 2, 3, 4}
                                                          for a, b in rep.witnesses["III"])
    rep = check_conditions(S(3, 4, "2,2,0"), family=[(1, 3)])
    assert not rep.holds_II and ((1,), (1, 3)) in rep.witnesses["II"]
    assert "III" in check_conditions(S(2, 3, "3,3,1,1")).to_json()["witnesses"]
