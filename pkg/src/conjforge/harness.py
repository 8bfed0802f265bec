"""Instance generation and experiment runs for the conjugator construction."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .exact import fmt, parse
from .liealg import ChevalleyBasis, chevalley_basis
from .reduce import ConjugacyResult, conjugate
from .rootsys import RootSystemKind, build_root_system, builtin_order
from .unipotent import CartanFactor, ConjugatorWord, NilFactor, UnipotentCoords, conj_word

log = logging.getLogger(__name__)

CSV_COLUMNS = ("kind", "rank", "seed", "trial", "status", "len_u", "len_v", "len_g", "bound", "ratio", "verified")


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "A"
    rank: int = 3
    trials: int = 100
    seed: int = 0
    coeff_bound: Fraction = Fraction(1)
    delta_min: Fraction = Fraction(1)
    scramble_len: int = 4
    max_den: int = 8
    cartan_scramble: bool = True   # also put a random diagonal factor (ratios >= 1) in the scramble word

    def __post_init__(self):
        object.__setattr__(self, "coeff_bound", Fraction(self.coeff_bound))
        object.__setattr__(self, "delta_min", Fraction(self.delta_min))
        RootSystemKind(self.family, self.rank)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.delta_min <= 0 or self.coeff_bound <= 0:
            raise ValueError("delta_min and coeff_bound must be positive")
        if self.scramble_len < 0 or self.max_den < 1:
            raise ValueError("scramble_len must be >= 0 and max_den >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def kind(self) -> RootSystemKind:
        return RootSystemKind(self.family, self.rank)

    def to_json(self) -> dict:
        d = asdict(self)
        d["coeff_bound"] = fmt(self.coeff_bound)
        d["delta_min"] = fmt(self.delta_min)
        return d

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        doc = dict(doc)
        if "kind" in doc:
            k = RootSystemKind.parse(doc.pop("kind")) if isinstance(doc["kind"], str) \
                else RootSystemKind.from_json(doc.pop("kind"))
            doc["family"], doc["rank"] = k.family, k.rank
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        for k in ("coeff_bound", "delta_min"):
            if k in doc:
                doc[k] = parse(doc[k])
        return cls(**doc)


def _rational(rng, bound: Fraction, max_den: int) -> Fraction:
    d = int(rng.integers(1, max_den + 1))
    top = math.floor(bound * d)
    return Fraction(int(rng.integers(-top, top + 1)), d)


def _min_simple(delta_min: Fraction, ns: Fraction, max_den: int) -> Fraction:
    """Smallest k/max_den with (k/max_den)^2 * ns >= delta_min^2."""
    k = max(1, math.floor(delta_min * max_den / math.sqrt(ns)) - 1)
    while Fraction(k, max_den) ** 2 * ns < delta_min ** 2:
        k += 1
    return Fraction(k, max_den)


def gen_instance(cfg: ExperimentConfig, trial: int, cb: Optional[ChevalleyBasis] = None
                 ) -> Tuple[UnipotentCoords, UnipotentCoords, ConjugatorWord]:
    """(u, v, w_true) with v = w_true u w_true^-1, reproducible from (seed, trial).

    Non-simple entries are k/d with d <= max_den and |k/d| <= coeff_bound.
    Simple entries are +-(lo + |k/d|), lo the least k/max_den meeting delta_min,
    so their denominators stay below max_den^2.
    """
    cb = cb or chevalley_basis(build_root_system(cfg.kind))
    rs = cb.rs
    rng = np.random.default_rng([cfg.seed, trial])
    coords: Dict = {}
    for r in rs.positives:
        if rs.is_simple(r):
            lo = _min_simple(cfg.delta_min, cb.norm_sq[r], cfg.max_den)
            mag = lo + abs(_rational(rng, cfg.coeff_bound, cfg.max_den))
            coords[r] = mag if rng.integers(2) else -mag
        else:
            coords[r] = _rational(rng, cfg.coeff_bound, cfg.max_den)
    factors = []
    for _ in range(cfg.scramble_len):
        mu = rs.positives[int(rng.integers(len(rs.positives)))]
        z = Fraction(0)
        while not z:
            z = _rational(rng, cfg.coeff_bound, cfg.max_den)
        factors.append(NilFactor({mu: z}))
    if cfg.cartan_scramble:
        ratios = tuple(1 + Fraction(int(rng.integers(0, cfg.max_den + 1)), cfg.max_den) for _ in range(rs.rank))
        factors.insert(int(rng.integers(len(factors) + 1)), CartanFactor(ratios))
    u = UnipotentCoords(coords)
    w = ConjugatorWord(tuple(factors))
    return u, conj_word(cb, u, w), w


class VerificationFailure(RuntimeError):
    def __init__(self, msg: str, dump_path: str):
        super().__init__(f"{msg} (reproducer written to {dump_path})")
        self.dump_path = dump_path


def _row(cfg: ExperimentConfig, trial: int, res: ConjugacyResult) -> dict:
    denom = res.len_u + res.len_v
    return {
        "kind": str(cfg.kind), "rank": cfg.rank, "seed": cfg.seed, "trial": trial,
        "status": res.status, "len_u": res.len_u, "len_v": res.len_v, "len_g": res.length_upper,
        "bound": res.linear_bound, "ratio": res.length_upper / denom if denom else 0.0,
        "verified": res.verified,
        # beyond the fixed CSV columns
        "bound_ratio": res.linear_bound / denom if denom else 0.0,
        "bound_holds": res.bound_ok, "ledger_holds": res.ledger_ok,
        "steps_ok": res.steps_ok,
        "delta": res.delta,
    }


def run_trial(cfg: ExperimentConfig, trial: int, dump_dir: str = ".") -> dict:
    cb = chevalley_basis(build_root_system(cfg.kind))
    order = builtin_order(cb.rs)
    u, v, w = gen_instance(cfg, trial, cb)
    res = conjugate(cb, order, u, v)
    if not res.verified:
        path = os.path.join(dump_dir, f"reproducer-{cfg.kind}-{cfg.seed}-{trial}.json")
        with open(path, "w") as fh:
            json.dump({"config": cfg.to_json(), "trial": trial, "u": u.to_json(cfg.kind),
                       "v": v.to_json(cfg.kind), "w_true": w.to_json(),
                       "result": res.to_json(cb.rs)}, fh, indent=1)
        raise VerificationFailure(f"trial {trial} of {cfg.kind}: {res.status} {res.reason}", path)
    return _row(cfg, trial, res)


def _worker(args):
    return run_trial(*args)


def max_workers() -> int:
    cap = os.environ.get("CONJFORGE_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


def run_experiment(cfg: ExperimentConfig, workers: Optional[int] = None, dump_dir: str = ".") -> Tuple[List[dict], dict]:
    """Rows sorted by trial, plus an aggregate summary."""
    workers = workers or max_workers()
    jobs = [(cfg, t, dump_dir) for t in range(cfg.trials)]
    if workers <= 1 or cfg.trials < 4:
        rows = [_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_worker, jobs, chunksize=max(1, cfg.trials // (4 * workers))))
    rows.sort(key=lambda r: r["trial"])
    return rows, aggregate(rows)


def aggregate(rows: List[dict]) -> dict:
    return {
        "trials": len(rows),
        "verified": sum(r["verified"] for r in rows),
        "verified_failures": sum(not r["verified"] for r in rows),
        "max_ratio": max((r["ratio"] for r in rows), default=0.0),
        "max_bound_ratio": max((r["bound_ratio"] for r in rows), default=0.0),
        "bound_violations": sum(not r["bound_holds"] for r in rows),
        "ledger_violations": sum(not r["ledger_holds"] for r in rows),
        "step_violations": sum(not r["steps_ok"] for r in rows),
    }


def rows_to_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
