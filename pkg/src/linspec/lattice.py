"""Value types shared by every other module.

A linear system ``L_{n,d}(m_1, ..., m_s)`` is described by a
:class:`LinearSystemSpec`.  Points are labelled ``1..s`` everywhere in the
public surface; a multi-index is a strictly increasing tuple of labels.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping

MultiIndex = tuple[int, ...]

#: subset enumeration refuses to run past this many points
MAX_POINTS = 30


class EnumerationCapError(ValueError):
    """Raised when a computation would need to enumerate subsets of more than MAX_POINTS points."""


class MultSpecError(ValueError):
    pass


def binom(top: int, bottom: int) -> int:
    """C(top, bottom), zero whenever top < bottom (in particular for negative top)."""
    if bottom < 0:
        raise ValueError(f"bottom must be non-negative, got {bottom}")
    if top < bottom:
        return 0
    return math.comb(top, bottom)


_TOKEN = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_mult_spec(text: str) -> list[int]:
    """Expand the shorthand ``"6^7"`` / ``"3,1^2"`` into a multiplicity list."""
    if text is None or not str(text).strip():
        return []
    out: list[int] = []
    for token in str(text).split(","):
        match = _TOKEN.match(token)
        if match is None:
            raise MultSpecError(f"malformed multiplicity token {token.strip()!r}")
        value = int(match.group(1))
        count = int(match.group(2)) if match.group(2) is not None else 1
        if count < 1:
            raise MultSpecError(f"malformed multiplicity token {token.strip()!r}: repeat count must be >= 1")
        out.extend([value] * count)
    return out


def format_mults(mults) -> str:
    """Inverse of :func:`parse_mult_spec`, run-length encoding consecutive values."""
    parts = []
    i = 0
    mults = list(mults)
    while i < len(mults):
        j = i
        while j < len(mults) and mults[j] == mults[i]:
            j += 1
        parts.append(str(mults[i]) if j - i == 1 else f"{mults[i]}^{j - i}")
        i = j
    return ",".join(parts)


@dataclass(frozen=True)
class LinearSystemSpec:
    """Degree-``d`` hypersurfaces of ``P^n`` with multiplicity ``m_i`` at ``s`` general points."""

    n: int
    d: int
    mults: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if self.n < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.n}")
        if self.d < 0:
            raise ValueError(f"degree must be >= 0, got {self.d}")
        if any(m < 0 for m in self.mults):
            raise ValueError(f"multiplicities must be >= 0, got {self.mults}")

    @classmethod
    def parse(cls, n: int, d: int, text: str) -> "LinearSystemSpec":
        return cls(n, d, tuple(parse_mult_spec(text)))

    @property
    def s(self) -> int:
        return len(self.mults)

    @property
    def b(self) -> int:
        return sum(self.mults) - self.n * self.d

    @property
    def order(self) -> tuple[int, ...]:
        """Labels sorted by non-increasing multiplicity, ties by lowest label."""
        return tuple(sorted(range(1, self.s + 1), key=lambda i: (-self.mults[i - 1], i)))

    @property
    def sorted_mults(self) -> tuple[int, ...]:
        return tuple(sorted(self.mults, reverse=True))

    def m(self, label: int) -> int:
        return self.mults[label - 1]

    def K(self, index: MultiIndex) -> int:
        """Sum of multiplicities over ``index`` minus ``(|index| - 1) d``; ``d`` for the empty index."""
        return sum(self.mults[i - 1] for i in index) - (len(index) - 1) * self.d

    def stripped(self) -> "LinearSystemSpec":
        """Same system with multiplicity-zero points removed."""
        return LinearSystemSpec(self.n, self.d, tuple(m for m in self.mults if m > 0))

    def with_mults(self, mults) -> "LinearSystemSpec":
        return LinearSystemSpec(self.n, self.d, tuple(mults))

    def label(self) -> str:
        return f"L_{{{self.n},{self.d}}}({format_mults(self.mults)})"

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "mults": list(self.mults)}


def _check_cap(s: int) -> None:
    if s > MAX_POINTS:
        raise EnumerationCapError(f"subset enumeration capped at {MAX_POINTS} points, got s={s}")


def _sized_subsets(values: list[int], size: int, need: int) -> Iterator[tuple[int, ...]]:
    """Positions of ``size``-subsets of the non-increasing ``values`` whose sum is >= ``need``.

    Branches are cut as soon as the best possible completion falls short.
    """
    count = len(values)
    prefix = [0]
    for v in values:
        prefix.append(prefix[-1] + v)

    def best(start: int, k: int) -> int:
        return prefix[start + k] - prefix[start]

    chosen: list[int] = []

    def walk(start: int, acc: int) -> Iterator[tuple[int, ...]]:
        left = size - len(chosen)
        if left == 0:
            if acc >= need:
                yield tuple(chosen)
            return
        for pos in range(start, count - left + 1):
            if acc + best(pos, left) < need:
                # values are sorted, later starts are no better
                return
            chosen.append(pos)
            yield from walk(pos + 1, acc + values[pos])
            chosen.pop()

    yield from walk(0, 0)


def subsets_with_K_at_least(spec: LinearSystemSpec, size: int, threshold: int) -> Iterator[MultiIndex]:
    """All ``size``-subsets ``I`` with ``K_I >= threshold``, as sorted label tuples."""
    _check_cap(spec.s)
    if size < 0 or size > spec.s:
        return
    if size == 0:
        if spec.d >= threshold:
            yield ()
        return
    order = spec.order
    values = [spec.m(i) for i in order]
    need = threshold + (size - 1) * spec.d
    for positions in _sized_subsets(values, size, need):
        yield tuple(sorted(order[p] for p in positions))


def subsets_with_nonneg_K(spec: LinearSystemSpec, max_size: int) -> Iterator[MultiIndex]:
    """Non-empty subsets ``I`` with ``|I| <= max_size`` and ``K_I >= 0``.

    Sizes whose ``|I|`` largest multiplicities already give ``K < 0`` are
    skipped outright.  Singletons of multiplicity zero (``K = 0``) are
    yielded; callers building base-locus data drop them since ``k = 0``.
    """
    _check_cap(spec.s)
    if max_size > spec.s:
        raise ValueError(f"max_size {max_size} exceeds s={spec.s}")
    top = spec.sorted_mults
    for size in range(1, max_size + 1):
        if sum(top[:size]) - (size - 1) * spec.d < 0:
            continue
        yield from subsets_with_K_at_least(spec, size, 0)


def all_subsets(s: int, size: int) -> Iterator[MultiIndex]:
    return combinations(range(1, s + 1), size)


@dataclass(frozen=True)
class PicardClass:
    """``degree * H + sum(exc[I] * E_I)`` on an iterated blow-up.

    Coefficients are stored with their sign, so ``dH - m E_1`` has
    ``exc == {(1,): -m}``.  Zero coefficients are dropped on construction.
    """

    degree: int
    exc: Mapping[MultiIndex, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {tuple(sorted(k)): int(v) for k, v in dict(self.exc).items() if v != 0}
        for key in cleaned:
            if not key:
                raise ValueError("exceptional divisors need a non-empty index")
        object.__setattr__(self, "exc", dict(sorted(cleaned.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @classmethod
    def from_spec(cls, spec: LinearSystemSpec) -> "PicardClass":
        return cls(spec.d, {(i,): -m for i, m in enumerate(spec.mults, start=1)})

    def coefficient(self, index: MultiIndex) -> int:
        return self.exc.get(tuple(index), 0)

    def __add__(self, other: "PicardClass") -> "PicardClass":
        exc = dict(self.exc)
        for key, value in other.exc.items():
            exc[key] = exc.get(key, 0) + value
        return PicardClass(self.degree + other.degree, exc)

    def __neg__(self) -> "PicardClass":
        return PicardClass(-self.degree, {k: -v for k, v in self.exc.items()})

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + (-other)

    def __mul__(self, factor: int) -> "PicardClass":
        return PicardClass(self.degree * factor, {k: v * factor for k, v in self.exc.items()})

    __rmul__ = __mul__

    def __hash__(self):
        return hash((self.degree, tuple(self.exc.items())))

    def __eq__(self, other):
        if not isinstance(other, PicardClass):
            return NotImplemented
        return self.degree == other.degree and dict(self.exc) == dict(other.exc)

    def max_index_size(self) -> int:
        return max((len(k) for k in self.exc), default=0)

    def expand_hyperplanes(self, n: int, family=None) -> "PicardClass":
        """Rewrite every hyperplane divisor ``E_I`` (``|I| = n``) as ``H - sum E_J``.

        The sum runs over proper subsets ``J`` of ``I`` that are blown up:
        every singleton, plus members of ``family`` when one is given
        (otherwise every proper subset).
        """
        result = PicardClass(self.degree, {k: v for k, v in self.exc.items() if len(k) < n})
        for key, coeff in self.exc.items():
            if len(key) > n:
                raise ValueError(f"index {key} is longer than n={n}")
            if len(key) != n:
                continue
            sub = {}
            for size in range(1, n):
                for part in combinations(key, size):
                    if size == 1 or family is None or part in family:
                        sub[part] = -coeff
            result = result + PicardClass(coeff, sub)
        return result

    def to_json(self) -> dict:
        return {"H": self.degree, "E": [{"I": list(k), "coeff": v} for k, v in self.exc.items()]}

    def __str__(self) -> str:
        parts = [f"{self.degree}H"]
        for key, value in self.exc.items():
            name = "E_" + ",".join(map(str, key)) if len(key) > 1 else f"E_{key[0]}"
            sign = "+" if value > 0 else "-"
            mag = abs(value)
            parts.append(f"{sign} {'' if mag == 1 else mag}{name}")
        return " ".join(parts)
