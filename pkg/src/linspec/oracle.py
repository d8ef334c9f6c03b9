"""Ground-truth ``h^0`` from the rank of the fat-point interpolation matrix.

Columns are the degree-``d`` monomials in ``n + 1`` homogeneous variables.
A point ``p`` with multiplicity ``m`` contributes one row per Hasse
derivative of order ``< m`` in the affine chart where the first non-zero
coordinate of ``p`` is 1.  Working modulo a large prime can only lose rank,
so every trial over-estimates the generic ``h^0``; the minimum over trials
is reported.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np
from numba import njit

from .lattice import LinearSystemSpec, MultiIndex, binom
from .modp import (
    MERSENNE61,
    _matmul,
    check_prime,
    det_mod_p,
    mulmod,
    nullspace_mod_p,
    rank_mod_p,
)

DEFAULT_CAP = 20_000_000
POINT_MODES = ("general", "coordinate_pinned", "star", "explicit")


class OracleError(RuntimeError):
    pass


class OracleCapError(OracleError):
    """The interpolation matrix would exceed the configured entry cap."""


class DegenerateConfiguration(OracleError):
    pass


def default_cap() -> int:
    raw = os.environ.get("LINSPEC_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class OracleConfig:
    prime: int = MERSENNE61
    trials: int = 3
    seed: int = 0
    point_mode: str = "general"
    points: Optional[tuple] = None
    cap: int = field(default_factory=default_cap)

    def __post_init__(self):
        check_prime(self.prime)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.point_mode not in POINT_MODES:
            raise ValueError(f"point_mode must be one of {POINT_MODES}")
        if self.point_mode == "explicit" and self.points is None:
            raise ValueError("explicit point mode needs a point list")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *stream])


@dataclass
class OracleResult:
    h0: int
    cols: int
    rows: int
    rank: int
    per_trial_h0: list
    prime: int
    seed: int
    failure_bound: str = ""

    def to_json(self) -> dict:
        return {
            "h0": self.h0,
            "cols": self.cols,
            "rows": self.rows,
            "rank": self.rank,
            "per_trial_h0": list(self.per_trial_h0),
            "prime": self.prime,
            "seed": self.seed,
            "failure_bound": self.failure_bound,
        }


def monomials(n: int, d: int) -> np.ndarray:
    """Exponent vectors of the degree-``d`` monomials in ``n + 1`` variables."""
    out = []
    for combo in combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for v in combo:
            e[v] += 1
        out.append(e)
    if not out:
        out = [[0] * (n + 1)]
    return np.array(out, dtype=np.int64).reshape(-1, n + 1)


def derivative_orders(n: int, m: int) -> np.ndarray:
    """Multi-indices ``alpha`` in ``n`` variables with ``|alpha| < m``."""
    out = []
    for total in range(m):
        for combo in combinations_with_replacement(range(n), total):
            a = [0] * n
            for v in combo:
                a[v] += 1
            out.append(a)
    return np.array(out, dtype=np.int64).reshape(-1, n)


def condition_count(n: int, mults: Sequence[int]) -> int:
    return sum(binom(n + m - 1, n) for m in mults)


def _random_point(rng: np.random.Generator, n: int, p: int) -> list[int]:
    while True:
        pt = [int(x) for x in rng.integers(0, p, size=n + 1, dtype=np.uint64)]
        if any(pt):
            return pt


def normalize(point: Sequence[int], p: int) -> tuple[int, list[int]]:
    """``(pivot, coords)`` with the first non-zero coordinate scaled to 1."""
    coords = [int(x) % p for x in point]
    pivot = next((i for i, x in enumerate(coords) if x), None)
    if pivot is None:
        raise OracleError("the zero vector is not a projective point")
    inv = pow(coords[pivot], -1, p)
    return pivot, [x * inv % p for x in coords]


def pinned_points(n: int) -> list[list[int]]:
    """The ``n + 1`` coordinate points followed by the unit point."""
    pts = [[1 if j == i else 0 for j in range(n + 1)] for i in range(n + 1)]
    pts.append([1] * (n + 1))
    return pts


@njit(cache=True)
def _fill_conditions(out, row0, exps, alphas, tables, pivot, p):
    # tables[i, a, e] = C(e, a) * x_i^(e - a) for the point's i-th coordinate
    ncols = exps.shape[0]
    nvars = exps.shape[1]
    for r in range(alphas.shape[0]):
        for c in range(ncols):
            acc = np.uint64(1)
            slot = 0
            for i in range(nvars):
                if i == pivot:
                    continue
                a = alphas[r, slot]
                slot += 1
                e = exps[c, i]
                if a > e:
                    acc = np.uint64(0)
                    break
                acc = mulmod(acc, tables[i, a, e], p)
                if acc == np.uint64(0):
                    break
            out[row0 + r, c] = acc


def _hasse_tables(coords: Sequence[int], m: int, d: int, p: int) -> np.ndarray:
    nvars = len(coords)
    tables = np.zeros((nvars, max(m, 1), d + 1), dtype=np.uint64)
    for i, x in enumerate(coords):
        for a in range(m):
            for e in range(a, d + 1):
                tables[i, a, e] = comb(e, a) * pow(x, e - a, p) % p
    return tables


def interpolation_matrix(n: int, d: int, points: Sequence[Sequence[int]], mults: Sequence[int],
                         p: int = MERSENNE61, cap: Optional[int] = None) -> np.ndarray:
    """Condition matrix for ``points`` with ``mults``: rows are Hasse functionals, columns monomials."""
    cap = default_cap() if cap is None else cap
    exps = monomials(n, d)
    rows = condition_count(n, mults)
    if rows * len(exps) > cap or len(exps) > cap:
        raise OracleCapError(f"interpolation matrix {rows}x{len(exps)} exceeds cap {cap}")
    out = np.zeros((rows, len(exps)), dtype=np.uint64)
    row = 0
    for point, m in zip(points, mults):
        if m <= 0:
            continue
        pivot, coords = normalize(point, p)
        alphas = derivative_orders(n, m)
        _fill_conditions(out, row, exps, alphas, _hasse_tables(coords, m, d, p), pivot, np.uint64(p))
        row += alphas.shape[0]
    return out


def draw_points(spec: LinearSystemSpec, cfg: OracleConfig, trial: int = 0) -> list[list[int]]:
    n, p = spec.n, cfg.prime
    if cfg.point_mode == "explicit":
        if len(cfg.points) != spec.s:
            raise ValueError(f"{len(cfg.points)} explicit points for s={spec.s}")
        return [[int(x) % p for x in pt] for pt in cfg.points]
    if cfg.point_mode == "star":
        star = star_points(n, cfg, trial=trial)
        if len(star) != spec.s:
            raise ValueError(f"star mode needs s = C(n+2, 2) = {len(star)} multiplicities")
        return [star[key] for key in sorted(star)]
    rng = cfg.rng(trial)
    pts = []
    if cfg.point_mode == "coordinate_pinned":
        pts = pinned_points(n)[: spec.s]
    while len(pts) < spec.s:
        pts.append(_random_point(rng, n, p))
    return pts


def failure_bound_text(spec: LinearSystemSpec, cfg: OracleConfig) -> str:
    return (f"each trial overestimates h0 only if a non-zero minor of degree <= "
            f"{spec.d * min(condition_count(spec.n, spec.mults), binom(spec.n + spec.d, spec.n))} in the point coordinates vanishes: "
            f"probability <= that degree / {cfg.prime}")


def h0_interpolation(spec: LinearSystemSpec, cfg: OracleConfig = OracleConfig()) -> OracleResult:
    cols = binom(spec.n + spec.d, spec.n)
    rows = condition_count(spec.n, spec.mults)
    if rows * cols > cfg.cap:
        raise OracleCapError(f"interpolation matrix {rows}x{cols} exceeds cap {cfg.cap}")
    trials = 1 if cfg.point_mode == "explicit" else cfg.trials
    per_trial = []
    best_rank = 0
    for t in range(trials):
        pts = draw_points(spec, cfg, t)
        A = interpolation_matrix(spec.n, spec.d, pts, spec.mults, cfg.prime, cfg.cap)
        rank = rank_mod_p(A, cfg.prime)
        best_rank = max(best_rank, rank)
        per_trial.append(cols - rank)
    return OracleResult(cols - best_rank, cols, rows, best_rank, per_trial, cfg.prime, cfg.seed,
                        failure_bound_text(spec, cfg))


def section_basis(spec: LinearSystemSpec, cfg: OracleConfig, trial: int = 0) -> tuple[np.ndarray, list]:
    """Kernel basis (rows, monomial coefficients) of the interpolation matrix and the points used."""
    pts = draw_points(spec, cfg, trial)
    A = interpolation_matrix(spec.n, spec.d, pts, spec.mults, cfg.prime, cfg.cap)
    cols = binom(spec.n + spec.d, spec.n)
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.uint64), pts
    return nullspace_mod_p(A, cfg.prime), pts


@njit(cache=True)
def _monomial_series(exps, coord_series, p):
    ncols, nvars = exps.shape
    T = coord_series.shape[2]
    out = np.zeros((ncols, T), dtype=np.uint64)
    acc = np.zeros(T, dtype=np.uint64)
    nxt = np.zeros(T, dtype=np.uint64)
    for c in range(ncols):
        acc[:] = 0
        acc[0] = 1
        for i in range(nvars):
            e = exps[c, i]
            if e == 0:
                continue
            nxt[:] = 0
            for a in range(T):
                if acc[a] == 0:
                    continue
                for b in range(T - a):
                    s = coord_series[i, e, b]
                    if s != 0:
                        x = mulmod(acc[a], s, p)
                        y = nxt[a + b] + x
                        if y >= p:
                            y -= p
                        nxt[a + b] = y
            acc[:] = nxt
        out[c, :] = acc
    return out


def _line_series(q: Sequence[int], v: Sequence[int], d: int, T: int, p: int) -> np.ndarray:
    """``coord_series[i, e, t]``: coefficient of ``eps^t`` in ``(q_i + eps v_i)^e``."""
    out = np.zeros((len(q), d + 1, T), dtype=np.uint64)
    for i, (qi, vi) in enumerate(zip(q, v)):
        for e in range(d + 1):
            for t in range(min(e, T - 1) + 1):
                out[i, e, t] = comb(e, t) * pow(qi, e - t, p) * pow(vi, t, p) % p
    return out


@dataclass
class ContainmentProfile:
    index: MultiIndex
    orders: list
    multiplicity: int
    draws: int

    @property
    def constant(self) -> bool:
        return len(set(self.orders)) <= 1


def containment_profile(spec: LinearSystemSpec, index: MultiIndex, cfg: OracleConfig = OracleConfig(),
                        draws: int = 3) -> ContainmentProfile:
    """Generic vanishing order of the system along the span of the points in ``index``.

    Each draw takes a random point ``q`` of the span and a random direction
    ``v`` and expands every basis section along ``q + eps v``.
    """
    index = tuple(sorted(index))
    if not 1 <= len(index) <= spec.n:
        raise ValueError(f"|I| must lie in 1..{spec.n}")
    p = cfg.prime
    basis, pts = section_basis(spec, cfg)
    if basis.shape[0] == 0:
        raise OracleError(f"{spec.label()} is empty; containment is undefined")
    exps = monomials(spec.n, spec.d)
    T = spec.d + 1
    rng = cfg.rng(1 << 32, *index)
    orders = []
    for _ in range(draws):
        weights = [int(x) for x in rng.integers(1, p, size=len(index), dtype=np.uint64)]
        q = [sum(w * pts[i - 1][j] for w, i in zip(weights, index)) % p for j in range(spec.n + 1)]
        v = _random_point(rng, spec.n, p)
        series = _monomial_series(exps, _line_series(q, v, spec.d, T, p), np.uint64(p))
        values = _matmul(np.ascontiguousarray(basis), series, np.uint64(p))
        nonzero = np.nonzero(values.any(axis=0))[0]
        orders.append(int(nonzero[0]) if len(nonzero) else T)
    return ContainmentProfile(index, orders, min(orders), draws)


def containment_multiplicity(spec: LinearSystemSpec, index: MultiIndex, cfg: OracleConfig = OracleConfig(),
                             draws: int = 3) -> int:
    return containment_profile(spec, index, cfg, draws).multiplicity


def _kernel_point(rows: list[list[int]], p: int) -> list[int]:
    basis = nullspace_mod_p(np.array(rows, dtype=np.uint64), p)
    if basis.shape[0] != 1:
        raise DegenerateConfiguration("hyperplanes do not meet in a single point")
    return [int(x) for x in basis[0]]


def hyperplanes_meet_properly(planes: Sequence[Sequence[int]], n: int, p: int) -> bool:
    """No ``n + 1`` of the hyperplanes share a point (so any ``n`` meet in exactly one)."""
    for sub in combinations(range(len(planes)), n + 1):
        if det_mod_p([planes[i] for i in sub], p) == 0:
            return False
    return True


def star_points(n: int, cfg: OracleConfig = OracleConfig(), trial: int = 0,
                draw: Optional[Callable[[np.random.Generator], Sequence[Sequence[int]]]] = None,
                max_retries: int = 16) -> dict[tuple[int, int], list[int]]:
    """Points ``q_ij`` cut out by the ``n`` hyperplanes other than ``H_i`` and ``H_j``.

    ``draw`` overrides how the ``n + 2`` hyperplanes are sampled; degenerate
    draws are retried ``max_retries`` times before giving up.
    """
    if n < 2:
        raise ValueError("star configurations need n >= 2")
    p = cfg.prime
    rng = cfg.rng(2 << 32, trial)
    sample = draw or (lambda g: [_random_point(g, n, p) for _ in range(n + 2)])
    for _ in range(max_retries):
        planes = [[int(x) % p for x in h] for h in sample(rng)]
        if len(planes) != n + 2:
            raise ValueError(f"need n+2={n + 2} hyperplanes")
        if not hyperplanes_meet_properly(planes, n, p):
            continue
        points = {}
        for i, j in combinations(range(1, n + 3), 2):
            rows = [planes[l - 1] for l in range(1, n + 3) if l not in (i, j)]
            points[(i, j)] = _kernel_point(rows, p)
        return points
    raise DegenerateConfiguration(f"no properly meeting hyperplanes after {max_retries} draws")
