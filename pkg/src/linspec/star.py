"""Fat points on star configurations and their dimension formula.

A star configuration in ``P^n`` is the set of ``C(n+2, 2)`` points ``q_ij``
where all but two of ``n + 2`` general hyperplanes meet.  The system is
parameterised by data ``(d; m_1..m_{n+2})`` one dimension up: ``q_ij``
receives multiplicity ``k_ij = max(m_i + m_j - d, 0)``, and every subset
``I`` of the hyperplane labels contributes through ``k_I = max(sum_I m - (|I|-1) d, 0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, NamedTuple

from .cohomology import cohomology_table
from .lattice import LinearSystemSpec, binom, parse_mult_spec
from .oracle import OracleConfig, h0_interpolation, star_points


class StarSpecError(ValueError):
    pass


class StarTerm(NamedTuple):
    index: tuple
    r: int
    k: int
    value: int


@dataclass(frozen=True)
class StarSpec:
    n: int
    d: int
    parent_mults: tuple

    def __post_init__(self):
        object.__setattr__(self, "parent_mults", tuple(int(m) for m in self.parent_mults))
        n, d, m = self.n, self.d, self.parent_mults
        if n < 2:
            raise StarSpecError(f"star configurations need n >= 2, got {n}")
        if len(m) != n + 2:
            raise StarSpecError(f"need n+2={n + 2} parent multiplicities, got {len(m)}")
        if d < 0 or any(x < 0 for x in m):
            raise StarSpecError("degree and multiplicities must be non-negative")
        if any(x > d for x in m):
            raise StarSpecError(f"parent multiplicities must be <= d={d}")
        if sum(m) - (n + 1) * d > 0:
            raise StarSpecError(f"sum of parent multiplicities exceeds (n+1)d={(n + 1) * d}")

    @classmethod
    def parse(cls, n: int, d: int, text: str) -> "StarSpec":
        return cls(n, d, tuple(parse_mult_spec(text)))

    def k(self, index) -> int:
        m = self.parent_mults
        return max(sum(m[i - 1] for i in index) - (len(index) - 1) * self.d, 0)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(1, self.n + 3), 2))

    @property
    def point_mults(self) -> tuple[int, ...]:
        """``k_ij`` in the lexicographic order of the pairs ``(i, j)``."""
        return tuple(self.k(p) for p in self.pairs)

    def fat_points(self) -> LinearSystemSpec:
        return LinearSystemSpec(self.n, self.d, self.point_mults)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "parent_mults": list(self.parent_mults),
                "k": {f"{i},{j}": k for (i, j), k in zip(self.pairs, self.point_mults)}}


def star_terms(spec: StarSpec) -> Iterator[StarTerm]:
    """Non-zero signed terms ``(-1)^r C(n + k_I - r, n)`` over ``|I| = r + 1 >= 2``."""
    n = spec.n
    for size in range(2, n + 3):
        r = size - 1
        for I in combinations(range(1, n + 3), size):
            k = spec.k(I)
            value = (-1) ** r * binom(n + k - r, n)
            if value:
                yield StarTerm(I, r, k, value)


def star_h0_formula(spec: StarSpec) -> int:
    return binom(spec.n + spec.d, spec.n) + sum(t.value for t in star_terms(spec))


def star_cohomology(spec: StarSpec, r: int) -> list[int]:
    """``(h^0..h^n)`` of the level-``r`` strict transform, ``1 <= r <= n - 1``.

    Only ``h^0`` and ``h^{r+1}`` can be non-zero; the latter collects the
    subsets ``I`` with ``|I| >= r + 3``, i.e. cycles of dimension ``>= r + 1``
    inside the hyperplane.
    """
    n = spec.n
    if not 1 <= r <= n - 1:
        raise ValueError(f"r must lie in 1..{n - 1}, got {r}")
    row = [0] * (n + 1)
    row[0] = star_h0_formula(spec)
    row[r + 1] = sum((-1) ** t.r * abs(t.value) for t in star_terms(spec) if t.r >= r + 2)
    return row


def only_pair_terms(spec: StarSpec) -> bool:
    """True when every ``k_I`` with ``|I| >= 3`` vanishes, so only the points themselves obstruct."""
    n = spec.n
    return all(spec.k(I) == 0 for size in range(3, n + 3) for I in combinations(range(1, n + 3), size))


def parent_systems(spec: StarSpec) -> tuple[LinearSystemSpec, LinearSystemSpec]:
    """``L_{n+1,d}(m)`` and ``L_{n+1,d-1}(m)``, whose difference restricts to the star system."""
    m = spec.parent_mults
    return LinearSystemSpec(spec.n + 1, spec.d, m), LinearSystemSpec(spec.n + 1, max(spec.d - 1, 0), m)


def star_h0_parent(spec: StarSpec) -> int:
    """``h^0`` through the hyperplane restriction sequence one dimension up.

    Both parent systems sit in regimes with closed-form tables; the smaller
    one is empty when its table is not guaranteed (it then has ``b >= 2``
    on ``n + 2`` points).
    """
    big, small = parent_systems(spec)
    top = cohomology_table(big)
    if not top.guaranteed:
        raise StarSpecError(f"parent system {big.label()} outside the closed-form regimes")
    if spec.d == 0:
        return top.h0
    low = cohomology_table(small)
    return top.h0 - (low.h0 if low.guaranteed else 0)


def star_h0_oracle(spec: StarSpec, cfg: OracleConfig = OracleConfig()) -> int:
    """Interpolation ``h^0`` with ``k_ij`` imposed at freshly drawn star points ``q_ij``."""
    best = None
    for trial in range(cfg.trials):
        pts = star_points(spec.n, cfg, trial=trial)
        explicit = OracleConfig(prime=cfg.prime, trials=1, seed=cfg.seed, point_mode="explicit",
                                points=tuple(tuple(pts[p]) for p in spec.pairs), cap=cfg.cap)
        h0 = h0_interpolation(spec.fat_points(), explicit).h0
        best = h0 if best is None else min(best, h0)
    return best
