"""Linear base locus, blow-up conditions and strict-transform classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .lattice import LinearSystemSpec, MultiIndex, PicardClass, subsets_with_nonneg_K


@dataclass(frozen=True)
class BaseLocusTable:
    """Cycles ``L_I`` with ``k_I >= 1`` and ``|I| <= min(n, s)``."""

    entries: dict
    rbar: int
    b: int

    def of_dimension(self, r: int) -> dict:
        return {I: k for I, k in self.entries.items() if len(I) == r + 1}

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "rbar": self.rbar,
            "entries": [{"I": list(I), "k": k} for I, k in self.entries.items()],
        }


def cycle_family(spec: LinearSystemSpec) -> dict[MultiIndex, int]:
    """Every ``I`` with ``1 <= |I| <= min(n, s)`` and ``K_I >= 0``, mapped to ``K_I``."""
    top = min(spec.n, spec.s)
    return {I: spec.K(I) for I in subsets_with_nonneg_K(spec, top)}


def base_locus(spec: LinearSystemSpec) -> BaseLocusTable:
    family = cycle_family(spec)
    entries = {I: K for I, K in sorted(family.items(), key=lambda kv: (len(kv[0]), kv[0])) if K >= 1}
    rbar = max((len(I) - 1 for I in family), default=-1)
    return BaseLocusTable(entries, rbar, spec.b)


def strict_transform(spec: LinearSystemSpec, r: int, expand: bool = True) -> PicardClass:
    """Class of ``D_(r) = dH - sum k_I E_I`` over base cycles of dimension ``<= r``.

    For ``r = n - 1`` hyperplane divisors are rewritten through the lower
    exceptional divisors unless ``expand`` is false.
    """
    if not 0 <= r <= spec.n - 1:
        raise ValueError(f"r must lie in 0..{spec.n - 1}, got {r}")
    family = cycle_family(spec)
    exc = {(i,): -m for i, m in enumerate(spec.mults, start=1)}
    for I, K in family.items():
        if 2 <= len(I) <= r + 1 and K > 0:
            exc[I] = -K
    cls = PicardClass(spec.d, exc)
    if expand and r == spec.n - 1 and spec.n >= 2:
        cls = cls.expand_hyperplanes(spec.n, family=set(family))
    return cls


def tilde(spec: LinearSystemSpec) -> PicardClass:
    return strict_transform(spec, spec.n - 1)


@dataclass
class ConditionsReport:
    holds_I: bool
    holds_II: bool
    holds_III: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "holds_I": self.holds_I,
            "holds_II": self.holds_II,
            "holds_III": self.holds_III,
            "witnesses": {k: [[list(a), list(b)] for a, b in v] for k, v in self.witnesses.items()},
        }


def spans_meet_badly(n: int, I: MultiIndex, J: MultiIndex) -> bool:
    """True when the spans of general points ``I`` and ``J`` meet in more than the span of ``I & J``."""
    union = len(set(I) | set(J))
    return union >= n + 2 and len(I) + len(J) - 2 - n >= 0


def check_conditions(spec: LinearSystemSpec, family: Optional[Iterable[MultiIndex]] = None) -> ConditionsReport:
    """Evaluate the closure conditions on a cycle family.

    By default the family is ``{I : K_I >= 0}`` without the multiplicity-zero
    points.  Condition (III) is tested on the members actually in the base
    locus (``K_I >= 1``): two spans of general points meet properly unless
    together they involve ``n + 2`` or more points and have complementary
    dimensions that force an extra intersection.
    """
    if family is None:
        members = {I for I, K in cycle_family(spec).items() if not (len(I) == 1 and spec.m(I[0]) == 0)}
        loci = {I for I in members if spec.K(I) >= 1}
    else:
        members = {tuple(sorted(I)) for I in family}
        loci = {I for I in members if spec.K(I) >= 1}

    missing = [((j,), ()) for j in range(1, spec.s + 1) if (j,) not in members]

    not_closed = []
    for I in sorted(members, key=lambda t: (len(t), t)):
        for size in range(1, len(I)):
            for part in combinations(I, size):
                if part not in members:
                    not_closed.append((part, I))

    crossing = []
    ordered = sorted(loci, key=lambda t: (len(t), t))
    for a, I in enumerate(ordered):
        for J in ordered[a + 1:]:
            if spans_meet_badly(spec.n, I, J):
                crossing.append((I, J))

    witnesses = {}
    if missing:
        witnesses["I"] = missing
    if not_closed:
        witnesses["II"] = not_closed
    if crossing:
        witnesses["III"] = crossing
    return ConditionsReport(not missing, not not_closed, not crossing, witnesses)
