"""Regime classification and cohomology tables of the strict transforms ``D_(r)``.

Level ``r`` of a table is the vector ``(h^0, ..., h^n)`` of ``D_(r)``; level
``-1`` is ``D`` itself, which coincides with level 0.  Inside the regimes
where vanishing is known the entries are closed-form binomial sums.  Outside
them only ``h^0`` and ``h^{r+1}`` can be written, as affine expressions in
the unknown ``h^rho`` of the top strict transform.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .dimension import contributing_terms, ldim, ldim_upto, l_tail
from .lattice import LinearSystemSpec, PicardClass, all_subsets, binom, subsets_with_K_at_least


class Regime(str, Enum):
    EFFECTIVE_S_LE_N2 = "EFFECTIVE_S_LE_N2"
    EFFECTIVE_BOUNDED = "EFFECTIVE_BOUNDED"
    TORIC = "TORIC"
    NONEFF_N2 = "NONEFF_N2"
    NONEFF_GE_N3 = "NONEFF_GE_N3"
    OUTSIDE = "OUTSIDE"


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class RegimeTag:
    regime: Regime
    effective: Optional[bool]
    s_d: int
    s: int
    b: int

    @property
    def guaranteed(self) -> bool:
        return self.regime is not Regime.OUTSIDE

    def to_json(self) -> dict:
        return {"tag": self.regime.value, "effective": self.effective, "s_d": self.s_d, "s": self.s, "b": self.b}


def _known_noneffective(spec: LinearSystemSpec) -> bool:
    # n+2 points with positive b already cut out nothing
    top = spec.sorted_mults[: min(spec.s, spec.n + 2)]
    return any(m > spec.d for m in spec.mults) or sum(top) - spec.n * spec.d >= 1


def classify_regime(spec: LinearSystemSpec) -> RegimeTag:
    """Place ``spec`` (after dropping multiplicity-zero points) in a regime."""
    st = spec.stripped()
    n, d, s, b = st.n, st.d, st.s, st.b
    s_d = sum(1 for m in st.mults if m == d)
    top = max(st.mults, default=0)

    def tag(regime, effective):
        return RegimeTag(regime, effective, s_d, s, b)

    if s <= n + 1:
        if top <= d + 1:
            return tag(Regime.TORIC, b <= 0 and top <= d)
        return tag(Regime.OUTSIDE, False)
    if s == n + 2:
        if top <= d and b <= 0:
            return tag(Regime.EFFECTIVE_S_LE_N2, True)
        if top <= d + 1 and (b == 1 or (b <= 0 and top == d + 1)):
            return tag(Regime.NONEFF_N2, False)
        return tag(Regime.OUTSIDE, False)
    if top <= d and b <= min(n - s_d, s - n - 2):
        return tag(Regime.EFFECTIVE_BOUNDED, ldim(st) > 0)
    if top <= d + 1 and b <= s - n - 2 and _known_noneffective(st):
        return tag(Regime.NONEFF_GE_N3, False)
    return tag(Regime.OUTSIDE, False if _known_noneffective(st) else None)


@dataclass(frozen=True)
class Symbolic:
    """``const + sum(coeffs[rho] * h^rho(D~))`` with the ``h^rho(D~)`` unknown."""

    const: int
    coeffs: tuple = ()

    def to_json(self) -> dict:
        return {"const": self.const, "h_tilde": {str(rho): c for rho, c in self.coeffs}}

    def __str__(self) -> str:
        out = str(self.const)
        for rho, c in self.coeffs:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out += f" {sign} {mag}h^{rho}(D~)"
        return out


Entry = Union[int, Symbolic, None]


@dataclass
class CohomologyTable:
    spec: LinearSystemSpec
    regime: RegimeTag
    levels: dict = field(default_factory=dict)
    chi_tilde: Optional[int] = None

    @property
    def guaranteed(self) -> bool:
        return self.regime.guaranteed

    @property
    def h0(self) -> Entry:
        return self.levels[-1][0]

    def row(self, r: int) -> list:
        return self.levels[r]

    def chi(self, r: int) -> int:
        if not self.guaranteed:
            raise NotApplicable("Euler characteristic of an unguaranteed table is not known")
        return sum((-1) ** i * h for i, h in enumerate(self.levels[r]))

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, Symbolic) else x

        out = {
            "regime": self.regime.to_json(),
            "guaranteed": self.guaranteed,
            "levels": [{"r": r, "h": [enc(x) for x in self.levels[r]]} for r in sorted(self.levels)],
        }
        if self.chi_tilde is not None:
            out["chi_tilde"] = self.chi_tilde
        return out


def restricted_tail(spec: LinearSystemSpec, r: int) -> int:
    """``l_tail`` truncated to cycles of dimension ``<= n - 1``."""
    top = spec.n - 1
    if r > top:
        return 0
    return (-1) ** (r + 1) * sum(t.value for t in contributing_terms(spec, min_r=r, max_r=top))


def guaranteed_row(spec: LinearSystemSpec, r: int) -> list[int]:
    n = spec.n
    r = max(r, 0)
    row = [0] * (n + 1)
    row[0] = ldim(spec)
    row[r + 1] = l_tail(spec, r + 1)
    return row


def symbolic_row(spec: LinearSystemSpec, r: int) -> list:
    n = spec.n
    r = max(r, 0)
    h0 = Symbolic(ldim_upto(spec, n - 1), tuple((rho, (-1) ** (rho + 1)) for rho in range(1, n + 1)))
    row: list = [None] * (n + 1)
    row[0] = h0
    if r == n - 1:
        for rho in range(1, n + 1):
            row[rho] = Symbolic(0, ((rho, 1),))
    else:
        row[r + 1] = Symbolic(restricted_tail(spec, r + 1),
                              tuple((rho, (-1) ** (rho - r - 1)) for rho in range(r + 2, n + 1)))
    return row


def cohomology_table(spec: LinearSystemSpec) -> CohomologyTable:
    tag = classify_regime(spec)
    st = spec.stripped()
    build = guaranteed_row if tag.guaranteed else symbolic_row
    levels = {r: build(st, r) for r in range(-1, st.n)}
    try:
        chi = chi_tilde(spec)
    except NotApplicable:
        chi = None
    return CohomologyTable(spec, tag, levels, chi)


def chi_tilde(spec: LinearSystemSpec) -> int:
    """Euler characteristic of ``D~`` in the three closed-form cases."""
    tag = classify_regime(spec)
    st = spec.stripped()
    n, s, b = st.n, st.s, st.b
    if tag.regime is Regime.TORIC:
        if tag.effective and b == 0:
            return 1
        if not tag.effective:
            return ldim(st) + (-1) ** n * binom(b - 1, n)
    elif tag.effective is False and tag.guaranteed:
        if (s == n + 2 and b <= 1) or (s >= n + 3 and b <= s - n - 2):
            return 0
    raise NotApplicable("corollary not applicable")


def reconstruct_h0(spec: LinearSystemSpec, table: CohomologyTable) -> int:
    """``h^0(D)`` from the top strict transform: ``l_{<=n-1} - sum_{rho>=1} (-1)^rho h^rho(D~)``."""
    st = spec.stripped()
    top = table.levels[st.n - 1]
    return ldim_upto(st, st.n - 1) - sum((-1) ** rho * top[rho] for rho in range(1, st.n + 1))


def recursion_check(spec: LinearSystemSpec, table: Optional[CohomologyTable] = None) -> tuple[bool, list]:
    """Check level-to-level consistency of a guaranteed table.

    Returns ``(ok, violations)``; each violation is a dict naming the level.
    """
    st = spec.stripped()
    table = table if table is not None else cohomology_table(spec)
    if not table.guaranteed:
        raise NotApplicable("recursion check needs a guaranteed regime")
    n = st.n
    bad = []
    L = table.levels
    if L[-1] != L[0]:
        bad.append({"r": -1, "reason": "level -1 differs from level 0"})
    for r in range(n):
        if L[r][0] != L[-1][0]:
            bad.append({"r": r, "reason": "h^0 changes between levels"})
    for r in range(n - 1):
        size = r + 2
        correction = sum(binom(n + st.K(I) - r - 2, n) for I in subsets_with_K_at_least(st, size, size)) \
            if size <= st.s else 0
        expected = L[r + 1][r + 1] - L[r + 1][r + 2] + correction
        if L[r][r + 1] != expected:
            bad.append({"r": r, "reason": f"h^{r + 1} is {L[r][r + 1]}, recursion gives {expected}"})
    return not bad, bad


def level_row_of_class(n: int, cls: PicardClass, r: int) -> list[int]:
    """Table row for a level-``r`` class written as ``dH - sum m_i E_i - sum c_I E_I``.

    Cycles of dimension below ``r`` must carry exactly ``-k_I``; the
    ``r``-dimensional ones may be twisted back by up to ``min(r, k_I)``.
    Anything else is not a strict transform covered by the tables.
    """
    if not 0 <= r <= n - 1:
        raise ValueError(f"r must lie in 0..{n - 1}")
    labels = sorted({i for key in cls.exc for i in key})
    s = max(labels, default=0)
    mults = tuple(-cls.coefficient((i,)) for i in range(1, s + 1))
    spec = LinearSystemSpec(n, cls.degree, mults)
    for key, coeff in cls.exc.items():
        if len(key) > r + 1:
            raise NotApplicable(f"E_{key} lies above level {r}")
    for size in range(2, r + 2):
        for I in all_subsets(s, size):
            k = max(spec.K(I), 0)
            c = cls.coefficient(I)
            if size < r + 1 and c != -k:
                raise NotApplicable(f"coefficient of E_{I} is {c}, expected {-k}")
            if size == r + 1 and not -k <= c <= -k + min(r, k):
                raise NotApplicable(f"twist on E_{I} outside 0..min(r, k)")
    table = cohomology_table(spec)
    if not table.guaranteed:
        raise NotApplicable("spec outside the guaranteed regimes")
    return list(table.levels[r])
