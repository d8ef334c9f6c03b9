"""Sweep parameter grids and compare closed-form tables with the oracle.

Every sampled spec is classified.  In a guaranteed regime the table ``h^0``
must equal the oracle exactly and any difference is a failure.  Outside
them the oracle value and its gap over the linear expected dimension are
appended to a JSON-lines findings file; those gaps point at obstructions
that are not linear spans.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Iterator, Optional

from .cohomology import classify_regime, cohomology_table
from .dimension import ldim, lexpdim
from .lattice import LinearSystemSpec, binom
from .modp import MERSENNE61
from .oracle import OracleCapError, OracleConfig, default_cap, h0_interpolation

REGIME_FILTERS = ("any", "guaranteed", "outside", "effective")


@dataclass
class ScanJob:
    n_range: tuple = (2, 4)
    d_range: tuple = (0, 8)
    s_range: tuple = (0, 8)
    policy: str = "random"
    count: int = 200
    regime: str = "any"
    seed: int = 0
    width: int = 1
    output: Optional[str] = None
    prime: int = MERSENNE61
    trials: int = 3
    cap: int = field(default_factory=default_cap)
    max_attempts: int = 1000

    def __post_init__(self):
        self.n_range = tuple(self.n_range)
        self.d_range = tuple(self.d_range)
        self.s_range = tuple(self.s_range)
        for name in ("n_range", "d_range", "s_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ValueError(f"{name} must be an increasing pair of non-negative integers")
        if self.n_range[0] < 1:
            raise ValueError("n must be >= 1")
        if self.policy not in ("random", "exhaustive"):
            raise ValueError("policy must be 'random' or 'exhaustive'")
        if self.regime not in REGIME_FILTERS:
            raise ValueError(f"regime filter must be one of {REGIME_FILTERS}")
        if self.width < 1 or self.count < 0:
            raise ValueError("width must be >= 1 and count >= 0")


def spec_seed(job_seed: int, spec: LinearSystemSpec) -> int:
    """Oracle seed owned by one spec, independent of scheduling."""
    key = f"{job_seed}:{spec.n}:{spec.d}:{','.join(map(str, spec.mults))}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


def _passes(spec: LinearSystemSpec, regime: str) -> bool:
    if regime == "any":
        return True
    tag = classify_regime(spec)
    if regime == "guaranteed":
        return tag.guaranteed
    if regime == "outside":
        return not tag.guaranteed
    return tag.guaranteed and bool(tag.effective)


def _fits(spec: LinearSystemSpec, cap: int) -> bool:
    rows = sum(binom(spec.n + m - 1, spec.n) for m in spec.mults)
    return rows * binom(spec.n + spec.d, spec.n) <= cap


def generate_specs(job: ScanJob) -> Iterator[LinearSystemSpec]:
    """The job's specs in a fixed order; multiplicities range over ``0..d+1``."""
    if job.policy == "exhaustive":
        emitted = 0
        for n in range(job.n_range[0], job.n_range[1] + 1):
            for d in range(job.d_range[0], job.d_range[1] + 1):
                for s in range(job.s_range[0], job.s_range[1] + 1):
                    for combo in combinations_with_replacement(range(d + 1, -1, -1), s):
                        spec = LinearSystemSpec(n, d, combo)
                        if _passes(spec, job.regime) and _fits(spec, job.cap):
                            yield spec
                            emitted += 1
                            if job.count and emitted >= job.count:
                                return
        return
    rng = random.Random(job.seed)
    seen = set()
    attempts = 0
    while len(seen) < job.count and attempts < job.count * job.max_attempts:
        attempts += 1
        n = rng.randint(*job.n_range)
        d = rng.randint(*job.d_range)
        s = rng.randint(*job.s_range)
        mults = tuple(sorted((rng.randint(0, d + 1) for _ in range(s)), reverse=True))
        spec = LinearSystemSpec(n, d, mults)
        if spec in seen or not _passes(spec, job.regime) or not _fits(spec, job.cap):
            continue
        seen.add(spec)
        yield spec


def evaluate(spec: LinearSystemSpec, job_seed: int, prime: int, trials: int, cap: int) -> dict:
    table = cohomology_table(spec)
    record = {
        "n": spec.n,
        "d": spec.d,
        "mults": list(spec.mults),
        "regime": table.regime.regime.value,
        "guaranteed": table.guaranteed,
        "ldim": ldim(spec),
    }
    cfg = OracleConfig(prime=prime, trials=trials, seed=spec_seed(job_seed, spec), cap=cap)
    try:
        h0 = h0_interpolation(spec, cfg).h0
    except OracleCapError:
        record["status"] = "skipped"
        return record
    record["oracle_h0"] = h0
    if table.guaranteed:
        record["table_h0"] = table.h0
        record["status"] = "ok" if h0 == table.h0 else "mismatch"
    else:
        expected = lexpdim(spec)
        if expected is None:
            expected = max(record["ldim"], 0)
        record["lexpdim"] = expected
        record["gap"] = h0 - expected
        record["status"] = "finding"
    return record


def _evaluate_packed(args):
    return evaluate(*args)


def _cursor_path(output: Path) -> Path:
    return output.with_name(output.name + ".cursor")


@dataclass
class ScanSummary:
    specs: int = 0
    guaranteed: int = 0
    matches: int = 0
    findings: int = 0
    skipped: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def add(self, record: dict) -> None:
        self.specs += 1
        status = record["status"]
        if status == "skipped":
            self.skipped += 1
            return
        if record["guaranteed"]:
            self.guaranteed += 1
            if status == "ok":
                self.matches += 1
            else:
                self.mismatches.append(record)
        else:
            self.findings += 1

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def run_scan(job: ScanJob, resume: bool = False) -> ScanSummary:
    """Run ``job``; findings go to ``job.output`` when set.

    With ``resume`` the cursor sidecar says how many specs were already
    processed, and the findings file is appended to.
    """
    specs = list(generate_specs(job))
    out_path = Path(job.output) if job.output else None
    summary = ScanSummary()
    start = 0
    if out_path is not None and resume and _cursor_path(out_path).exists():
        state = json.loads(_cursor_path(out_path).read_text())
        start = state["next"]
        summary = ScanSummary(**{k: v for k, v in state["summary"].items() if k != "ok"})
    elif out_path is not None:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text("")

    todo = [(spec, job.seed, job.prime, job.trials, job.cap) for spec in specs[start:]]
    if job.width == 1:
        results = map(_evaluate_packed, todo)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=job.width)
        results = pool.map(_evaluate_packed, todo, chunksize=4)
    try:
        handle = open(out_path, "a") if out_path is not None else None
        for offset, record in enumerate(results, start=start + 1):
            summary.add(record)
            if handle is not None and record["status"] == "finding":
                assert not record["guaranteed"], "guaranteed spec in findings"
                handle.write(json.dumps(record, sort_keys=True) + "\n")
                handle.flush()
            if out_path is not None:
                _write_cursor(out_path, offset, summary)
        if handle is not None:
            handle.close()
    finally:
        if pool is not None:
            pool.shutdown()
    return summary


def _write_cursor(out_path: Path, position: int, summary: ScanSummary) -> None:
    tmp = _cursor_path(out_path).with_suffix(".tmp")
    tmp.write_text(json.dumps({"next": position, "summary": summary.to_json()}, sort_keys=True))
    os.replace(tmp, _cursor_path(out_path))
