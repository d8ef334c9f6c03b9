"""Standard Cremona action on point-blow-up classes and the divisor ``Cr_n(H)``."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .lattice import LinearSystemSpec, PicardClass, binom


class CremonaStepCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class CremonaMove:
    base_indices: tuple[int, ...]
    c: int

    def to_json(self) -> dict:
        return {"base": list(self.base_indices), "c": self.c}


def cremona_c(spec: LinearSystemSpec, base) -> int:
    return (spec.n - 1) * spec.d - sum(spec.m(i) for i in base)


def _check_base(spec: LinearSystemSpec, base) -> tuple[int, ...]:
    base = tuple(sorted(set(base)))
    if len(base) != spec.n + 1:
        raise ValueError(f"a Cremona move needs n+1={spec.n + 1} distinct base points, got {len(base)}")
    if any(not 1 <= i <= spec.s for i in base):
        raise ValueError(f"base labels must lie in 1..{spec.s}")
    return base


def apply_raw(spec: LinearSystemSpec, base) -> tuple[int, tuple[int, ...], int]:
    """``(d + c, new multiplicities, c)``; multiplicities may come out negative."""
    base = _check_base(spec, base)
    c = cremona_c(spec, base)
    mults = tuple(m + c if i in base else m for i, m in enumerate(spec.mults, start=1))
    return spec.d + c, mults, c


def cremona_apply(spec: LinearSystemSpec, base) -> LinearSystemSpec:
    """Image under the Cremona map based at ``base``.

    The result must have non-negative degree and multiplicities to be a
    :class:`LinearSystemSpec`; use :func:`apply_raw` when negative values are
    expected.
    """
    d, mults, _ = apply_raw(spec, base)
    return LinearSystemSpec(spec.n, d, mults)


def is_valid_move(spec: LinearSystemSpec, base) -> bool:
    d, mults, _ = apply_raw(spec, base)
    return d >= 0 and all(m >= 0 for m in mults)


def cremona_reduce(spec: LinearSystemSpec, max_steps: int = 1000) -> tuple[LinearSystemSpec, list[CremonaMove]]:
    """Apply moves on the ``n + 1`` largest multiplicities while ``c < 0``.

    Stops once ``c >= 0`` or when a move would make the degree negative (the
    system is then empty).  Negative multiplicities produced by a move are
    reset to zero: a negative multiplicity only adds a fixed exceptional
    component and does not change the space of sections.
    """
    if spec.s < spec.n + 1:
        raise ValueError(f"reduction needs at least n+1={spec.n + 1} points, got s={spec.s}")
    moves: list[CremonaMove] = []
    current = spec
    for _ in range(max_steps):
        base = tuple(sorted(current.order[: spec.n + 1]))
        c = cremona_c(current, base)
        if c >= 0 or current.d + c < 0:
            return current, moves
        d, mults, c = apply_raw(current, base)
        current = LinearSystemSpec(spec.n, d, tuple(max(m, 0) for m in mults))
        moves.append(CremonaMove(base, c))
    base = tuple(sorted(current.order[: spec.n + 1]))
    if cremona_c(current, base) < 0 and current.d + cremona_c(current, base) >= 0:
        raise CremonaStepCapError(f"no fixed point after {max_steps} moves")
    return current, moves


def cr_divisor(n: int) -> PicardClass:
    """``nH - sum (n - rho - 1) E_I`` over ``I`` in ``{1..n+1}`` with ``1 <= |I| <= n - 1``."""
    if n < 2:
        raise ValueError(f"Cr_n(H) needs n >= 2, got {n}")
    exc = {}
    for size in range(1, n):
        rho = size - 1
        for I in combinations(range(1, n + 2), size):
            exc[I] = -(n - rho - 1)
    return PicardClass(n, exc)


def cr_cohomology(n: int, a: int) -> tuple[int, ...]:
    """``h^i`` of ``a Cr_n(H)``, which coincide with ``h^i(P^n, O(a))``."""
    h = [0] * (n + 1)
    if a >= 0:
        h[0] = binom(n + a, n)
    elif a <= -n - 1:
        h[n] = binom(-a - 1, n)
    return tuple(h)
