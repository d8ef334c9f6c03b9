"""Virtual, linear virtual and linear expected dimensions.

All counts are affine (vector-space dimensions), so the empty system has
dimension 0 and ``L_{n,d}()`` has dimension ``C(n+d, n)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from .lattice import LinearSystemSpec, MultiIndex, binom, subsets_with_K_at_least


class Term(NamedTuple):
    index: MultiIndex
    r: int
    k: int
    value: int


def k_value(spec: LinearSystemSpec, index: MultiIndex) -> tuple[int, int]:
    """``(K_I, k_I)`` with ``k_I = max(K_I, 0)``; the empty index gives ``(d, d)``."""
    index = tuple(index)
    for i in index:
        if not 1 <= i <= spec.s:
            raise ValueError(f"label {i} outside 1..{spec.s}")
    K = spec.K(index)
    return K, max(K, 0)


def vdim(spec: LinearSystemSpec) -> int:
    return binom(spec.n + spec.d, spec.n) - sum(binom(spec.n + m - 1, spec.n) for m in spec.mults)


def edim(spec: LinearSystemSpec) -> int:
    return max(vdim(spec), 0)


def cycle_term(n: int, k: int, r: int) -> int:
    """Unsigned contribution ``C(n + k - r - 1, n)`` of an ``r``-dimensional cycle."""
    return binom(n + k - r - 1, n)


def contributing_terms(spec: LinearSystemSpec, min_r: int = -1, max_r: Optional[int] = None) -> Iterator[Term]:
    """Non-zero signed terms of the linear virtual dimension, by cycle dimension.

    A cycle of dimension ``r`` contributes only when ``k >= r + 1``, i.e.
    ``K_I >= |I|``, which is what the enumeration asks for.
    """
    top = spec.s - 1 if max_r is None else min(max_r, spec.s - 1)
    ordered = spec.sorted_mults
    for r in range(max(min_r, -1), top + 1):
        size = r + 1
        if size and sum(ordered[:size]) - r * spec.d < size:
            continue
        for index in subsets_with_K_at_least(spec, size, size):
            k = spec.K(index)
            value = (-1) ** (r + 1) * cycle_term(spec.n, k, r)
            if value:
                yield Term(index, r, k, value)


def ldim(spec: LinearSystemSpec) -> int:
    return sum(t.value for t in contributing_terms(spec))


def ldim_upto(spec: LinearSystemSpec, max_r: int) -> int:
    """Partial linear virtual dimension over cycles of dimension ``<= max_r``."""
    return sum(t.value for t in contributing_terms(spec, max_r=max_r))


def l_tail(spec: LinearSystemSpec, r: int) -> int:
    """Alternating sum over cycles of dimension ``>= r``, signed ``(-1)^(rho - r)``.

    With this sign ``l_tail(spec, -1) == ldim(spec)`` and, in the unobstructed
    regimes, ``h^{r+1}(D_(r)) == l_tail(spec, r + 1)``.
    """
    if not -1 <= r <= spec.n:
        raise ValueError(f"r must lie in -1..{spec.n}, got {r}")
    sign = (-1) ** (r + 1)
    return sign * sum(t.value for t in contributing_terms(spec, min_r=r))


def lexpdim(spec: LinearSystemSpec, budget: int = 10_000) -> Optional[int]:
    """Linear expected dimension, or ``None`` when the containment search runs out of budget.

    The search walks component-wise smaller multiplicity vectors (same n, d)
    breadth-first by total decrement and returns 0 at the first one with
    negative linear virtual dimension.
    """
    base = ldim(spec)
    if base < 0:
        return 0
    start = tuple(sorted(spec.mults, reverse=True))
    seen = {start}
    queue = deque([start])
    visited = 0
    while queue:
        node = queue.popleft()
        visited += 1
        if visited > budget:
            return None
        if node != start and ldim(spec.with_mults(node)) < 0:
            return 0
        for pos, value in enumerate(node):
            if value == 0 or (pos + 1 < len(node) and node[pos + 1] == value):
                continue
            child = tuple(sorted(node[:pos] + (value - 1,) + node[pos + 1:], reverse=True))
            if child not in seen:
                seen.add(child)
                queue.append(child)
    return max(base, 0)


@dataclass
class DimensionReport:
    spec: LinearSystemSpec
    vdim: int
    edim: int
    ldim: int
    lexpdim: Optional[int]
    terms: list[Term] = field(default_factory=list)

    @property
    def b(self) -> int:
        return self.spec.b

    def to_json(self) -> dict:
        return {
            "n": self.spec.n,
            "d": self.spec.d,
            "mults": list(self.spec.mults),
            "vdim": self.vdim,
            "edim": self.edim,
            "ldim": self.ldim,
            "lexpdim": self.lexpdim,
            "b": self.b,
            "terms": [{"I": list(t.index), "r": t.r, "k": t.k, "term": t.value} for t in self.terms],
        }


def dimension_report(spec: LinearSystemSpec, budget: int = 10_000) -> DimensionReport:
    terms = list(contributing_terms(spec))
    total = sum(t.value for t in terms)
    return DimensionReport(spec, vdim(spec), edim(spec), total, lexpdim(spec, budget), terms)
