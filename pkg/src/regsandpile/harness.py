"""Experiment orchestration, Monte Carlo comparison and persistence.

Every sample is a pure function of (spec, n, index): its seed is derived
from the base seed by a counter, so the record stream does not depend on the
worker count.  Records are written as JSON lines after a header line holding
the spec, which makes interrupted runs resumable.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing
import os
import statistics
import time
import warnings
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .abelian import AbelianGroupType, PGroupType, Partition, partitions, sur_count
from .graphs import Seed, adjacency, reduced_laplacian, sample_graph
from .laws import LawKind, law_prob, mckay_lyons_constant, moment_prediction
from .mixing import FiniteDistribution, class_gaps
from .padic import MatrixModel, cokernel_sylow, model_reference_law, sample_matrix
from .sandpile import graph_is_connected, log_torsion

KINDS = ("sylow-distribution", "moments", "singularity", "tree-entropy", "rank-growth",
         "mixing-gap", "cokernel", "parity-check")
GRAPH_MODELS = ("directed-regular", "matching", "directed-er")
MIN_SAMPLES = 500
Z_FLAG = 4.0
_MASK64 = (1 << 64) - 1


class MissingPrimeError(ValueError):
    """A moment was requested for a prime that the records do not cover."""


# ---------------------------------------------------------------------------
# specs and records

@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    ns: tuple[int, ...]
    model: str = "directed-regular"
    d: int | None = 3
    rho: float | None = None
    primes: tuple[int, ...] = (2, 3, 5, 7)
    cap: int = 12
    samples: int = 0
    seed: int = 0
    workers: int = 1
    groups: tuple[str, ...] = ()
    p: int | None = None
    k: int | None = None
    out: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "groups", tuple(self.groups))
        self.validate()

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if not self.ns or any(n < 1 for n in self.ns):
            raise ValueError("need at least one positive n")
        if self.samples < 0 or self.workers < 1:
            raise ValueError("samples must be >= 0 and workers >= 1")
        if self.kind == "cokernel":
            MatrixModel(self.model, self.p or 0, self.k or 0, self.ns[0])
            if self.cap > self.k:
                raise ValueError("cap must not exceed k")
            return
        if self.kind == "mixing-gap":
            if self.model not in ("directed", "matching"):
                raise ValueError("mixing-gap needs model directed or matching")
            return
        if self.model not in GRAPH_MODELS:
            raise ValueError(f"unknown graph model {self.model!r}")
        if self.model == "directed-er":
            if self.rho is None or not 0 <= self.rho <= 1:
                raise ValueError("directed-er needs rho in [0, 1]")
        elif self.d is None or self.d < 1:
            raise ValueError("regular models need d >= 1")
        if self.model == "matching" and any(n % 2 for n in self.ns):
            raise ValueError("the matching model needs even n")
        if self.kind == "singularity":
            if self.d < 3:
                raise ValueError("singularity experiments need d >= 3")
            bad = [p for p in self.primes if self.d % p == 0]
            if bad:
                raise ValueError(f"primes {bad} divide d; the witness argument needs gcd(p, d) = 1")
        if self.kind == "tree-entropy" and self.d < 3:
            raise ValueError("tree entropy needs d >= 3")

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["ns"] = list(self.ns)
        rec["primes"] = list(self.primes)
        rec["groups"] = list(self.groups)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "ExperimentSpec":
        return cls(**{**rec, "ns": tuple(rec["ns"]), "primes": tuple(rec["primes"]),
                      "groups": tuple(rec.get("groups", ()))})

    @property
    def law(self) -> LawKind:
        if self.kind == "cokernel":
            return model_reference_law(self.model)
        return LawKind.for_graph_model(self.model, self.d)


def sample_seed(base: int, n: int, index: int) -> int:
    """64-bit per-sample seed derived from (base seed, n, sample index)."""
    ss = np.random.SeedSequence([int(base) & _MASK64, int(n), int(index)])
    lo, hi = ss.generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


def _int_keys(d: Mapping) -> dict:
    return {int(k): v for k, v in d.items()}


@dataclass
class RunRecord:
    index: int
    n: int
    seed: int
    connected: bool = True
    sylow: dict = field(default_factory=dict)
    truncated: dict = field(default_factory=dict)
    coranks: dict = field(default_factory=dict)
    adjacency_coranks: dict = field(default_factory=dict)
    log_torsion: float | None = None
    elapsed: float = 0.0

    def to_record(self, include_timing: bool = False) -> dict:
        rec = {
            "index": self.index, "n": self.n, "seed": self.seed, "connected": self.connected,
            "sylow": {str(p): list(e) for p, e in self.sylow.items()},
            "truncated": {str(p): t for p, t in self.truncated.items()},
            "coranks": {str(p): c for p, c in self.coranks.items()},
            "adjacency_coranks": {str(p): c for p, c in self.adjacency_coranks.items()},
            "log_torsion": self.log_torsion,
        }
        if include_timing:
            rec["elapsed"] = self.elapsed
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "RunRecord":
        return cls(rec["index"], rec["n"], rec["seed"], rec["connected"],
                   {p: tuple(e) for p, e in _int_keys(rec["sylow"]).items()},
                   _int_keys(rec["truncated"]), _int_keys(rec["coranks"]),
                   _int_keys(rec["adjacency_coranks"]), rec["log_torsion"],
                   rec.get("elapsed", 0.0))

    def sylow_type(self, p: int) -> PGroupType:
        return PGroupType(p, Partition(tuple(self.sylow[p])))

    def dumps(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)


def compute_record(spec: ExperimentSpec, n: int, index: int) -> RunRecord:
    """One sample; a pure function of its arguments (apart from timing)."""
    seed = sample_seed(spec.seed, n, index)
    start = time.perf_counter()
    rec = RunRecord(index, n, seed)
    if spec.kind == "cokernel":
        M = sample_matrix(MatrixModel(spec.model, spec.p, spec.k, n), Seed(seed))
        G, trunc = cokernel_sylow(M, spec.p, spec.cap, with_flag=True)
        rec.sylow[spec.p] = tuple(G.lam)
        rec.truncated[spec.p] = trunc
        rec.coranks[spec.p] = len(G.lam)
    else:
        g = sample_graph(spec.model, n, Seed(seed), d=spec.d, rho=spec.rho)
        rec.connected = graph_is_connected(g)
        L = reduced_laplacian(g)
        if spec.kind in ("sylow-distribution", "moments", "rank-growth", "parity-check"):
            for p in spec.primes:
                rec.coranks[p] = linalg.corank_mod_p(L, p)
        if spec.kind in ("sylow-distribution", "moments") and rec.connected:
            for p in spec.primes:
                exps = linalg.snf_mod_pk(L, p, spec.cap)
                rec.sylow[p] = exps
                rec.truncated[p] = bool(exps) and max(exps) >= spec.cap
        if spec.kind == "tree-entropy":
            rec.log_torsion = log_torsion(g)
        if spec.kind == "singularity":
            C = adjacency(g)
            for p in spec.primes:
                rec.adjacency_coranks[p] = linalg.corank_mod_p(C, p)
    rec.elapsed = time.perf_counter() - start
    return rec


def _compute_task(args) -> RunRecord:
    spec_rec, n, index = args
    return compute_record(ExperimentSpec.from_record(spec_rec), n, index)


# ---------------------------------------------------------------------------
# comparison

@dataclass(frozen=True)
class ComparisonRow:
    label: str
    count: int
    frequency: float
    predicted: float
    se: float
    z: float

    @property
    def flagged(self) -> bool:
        return abs(self.z) > Z_FLAG

    def within(self, k_se: float) -> bool:
        """|empirical - predicted| <= k_se standard errors."""
        return abs(self.frequency - self.predicted) <= k_se * self.se


@dataclass(frozen=True)
class ComparisonReport:
    name: str
    samples: int
    excluded: int
    rows: tuple[ComparisonRow, ...]
    d_infinity: float
    total_variation: float
    underpowered: bool = False

    def row(self, label: str) -> ComparisonRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    @property
    def flagged(self) -> list[ComparisonRow]:
        return [r for r in self.rows if r.flagged]

    def to_rows(self) -> list[dict]:
        return [{"report": self.name, "outcome": r.label, "count": r.count,
                 "frequency": r.frequency, "predicted": r.predicted, "se": r.se, "z": r.z,
                 "flagged": r.flagged} for r in self.rows]

    def to_record(self) -> dict:
        return {"name": self.name, "samples": self.samples, "excluded": self.excluded,
                "d_infinity": self.d_infinity, "total_variation": self.total_variation,
                "underpowered": self.underpowered, "rows": self.to_rows()}

    def render(self) -> str:
        lines = [f"{self.name}: N={self.samples} excluded={self.excluded} "
                 f"d_inf={self.d_infinity:.4f} tv={self.total_variation:.4f}"]
        for r in self.rows:
            mark = "  <-- |z|>4" if r.flagged else ""
            lines.append(f"  {r.label:<28} {r.frequency:8.4f}  pred {r.predicted:8.4f}  "
                         f"se {r.se:7.4f}  z {r.z:+6.2f}{mark}")
        return "\n".join(lines)


def standard_error(freq: float, N: int, predicted: float | None = None) -> float:
    """sqrt(p(1-p)/N) with the empirical p; the predicted p stands in when that is 0."""
    if N == 0:
        return 0.0
    se = math.sqrt(freq * (1 - freq) / N)
    if se == 0 and predicted is not None:
        se = math.sqrt(predicted * (1 - predicted) / N)
    return se


def compare(empirical: Mapping[str, int] | FiniteDistribution, predicted: Mapping[str, float],
            samples: int | None = None, excluded: int = 0, name: str = "comparison",
            top: int | None = None, threshold: float = 0.0) -> ComparisonReport:
    """Compare observed outcome counts to predicted probabilities.

    Outcomes listed in ``predicted`` (optionally only the ``top`` most likely,
    or those above ``threshold``) get their own row; everything else is pooled
    into "other", whose predicted mass is the remaining deficit.
    """
    if isinstance(empirical, FiniteDistribution):
        if samples is None:
            raise ValueError("a FiniteDistribution needs the sample count")
        counts = {k: round(float(v) * samples) for k, v in empirical.items()}
    else:
        counts = dict(empirical)
    N = sum(counts.values()) if samples is None else samples
    ranked = sorted(predicted.items(), key=lambda kv: -kv[1])
    listed = [(k, v) for k, v in ranked if v >= threshold]
    if top is not None:
        listed = listed[:top]
    underpowered = 0 < N < MIN_SAMPLES
    if underpowered:
        warnings.warn(f"{name}: only {N} samples; standard errors are unreliable below {MIN_SAMPLES}",
                      stacklevel=2)
    rows = []
    listed_keys = set()
    for label, pred in listed:
        listed_keys.add(label)
        rows.append(_row(str(label), counts.get(label, 0), N, float(pred)))
    other_count = sum(c for k, c in counts.items() if k not in listed_keys)
    other_pred = max(0.0, 1.0 - sum(float(v) for _, v in listed))
    rows.append(_row("other", other_count, N, other_pred))
    diffs = [abs(r.frequency - r.predicted) for r in rows] if N else [0.0]
    return ComparisonReport(name, N, excluded, tuple(rows), max(diffs), sum(diffs) / 2, underpowered)


def _row(label: str, count: int, N: int, pred: float) -> ComparisonRow:
    freq = count / N if N else 0.0
    se = standard_error(freq, N, pred)
    z = (freq - pred) / se if se else 0.0
    return ComparisonRow(label, count, freq, pred, se, z)


def _predicted_sylow(law: LawKind, p: int, sum_cap: int = 10) -> dict[str, float]:
    return {str(PGroupType(p, lam)): float(law_prob(law, PGroupType(p, lam)))
            for lam in partitions(sum_cap)}


def sylow_reports(spec: ExperimentSpec, records: Sequence[RunRecord], threshold: float = 0.005,
                  joint_top: int = 6) -> dict[str, ComparisonReport]:
    """Per-prime Sylow comparisons and, for two or more primes, the joint one."""
    reports = {}
    law = spec.law
    for n in spec.ns:
        recs = [r for r in records if r.n == n]
        kept = [r for r in recs if r.connected]
        excluded = len(recs) - len(kept)
        for p in spec.primes if spec.kind != "cokernel" else (spec.p,):
            counts = Counter(str(r.sylow_type(p)) for r in kept)
            reports[f"n={n} p={p}"] = compare(counts, _predicted_sylow(law, p), len(kept), excluded,
                                              name=f"{spec.model} n={n} p={p}", threshold=threshold)
        if spec.kind != "cokernel" and len(spec.primes) >= 2:
            p1, p2 = spec.primes[:2]
            pred1, pred2 = _predicted_sylow(law, p1, 8), _predicted_sylow(law, p2, 6)
            joint = {f"{a} | {b}": va * vb for a, va in pred1.items() for b, vb in pred2.items()}
            counts = Counter(f"{r.sylow_type(p1)} | {r.sylow_type(p2)}" for r in kept)
            reports[f"n={n} joint {p1},{p2}"] = compare(counts, joint, len(kept), excluded,
                                                        name=f"{spec.model} n={n} joint ({p1},{p2})",
                                                        top=joint_top)
    return reports


# ---------------------------------------------------------------------------
# moments and tables

@lru_cache(maxsize=4096)
def _sur(G: AbelianGroupType, V: AbelianGroupType) -> int:
    return sur_count(G, V)


def moment_estimate(records: Iterable[RunRecord], V: AbelianGroupType | str) -> dict:
    """Sample mean of |Sur(Gamma, V)| over connected records, with s / sqrt(N)."""
    if isinstance(V, str):
        V = AbelianGroupType.parse(V)
    values = []
    for r in records:
        if not r.connected:
            continue
        missing = [p for p in V.primes() if p not in r.sylow]
        if missing:
            raise MissingPrimeError(f"records carry no Sylow data for primes {missing}")
        G = AbelianGroupType.from_sylows([r.sylow_type(p) for p in V.primes()])
        values.append(_sur(G, V))
    N = len(values)
    if N == 0:
        return {"mean": float("nan"), "se": float("nan"), "samples": 0}
    mean = sum(values) / N
    se = statistics.stdev(values) / math.sqrt(N) if N > 1 else 0.0
    return {"mean": mean, "se": se, "samples": N}


def moments_table(spec: ExperimentSpec, records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    for n in spec.ns:
        recs = [r for r in records if r.n == n]
        for text in spec.groups:
            V = AbelianGroupType.parse(text)
            est = moment_estimate(recs, V)
            pred = moment_prediction(V, spec.law)
            pred_f = float(pred)
            z = (est["mean"] - pred_f) / est["se"] if est["se"] else 0.0
            rows.append({"n": n, "V": str(V), "mean": est["mean"], "se": est["se"],
                         "predicted": str(pred) if isinstance(pred, Fraction) else pred,
                         "z": z, "samples": est["samples"],
                         "excluded": len(recs) - est["samples"]})
    return rows


def _per_n(records: Sequence[RunRecord], ns: Sequence[int]) -> dict[int, list[RunRecord]]:
    return {n: [r for r in records if r.n == n] for n in ns}


def singularity_table(spec: ExperimentSpec, records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    for n, recs in _per_n(records, spec.ns).items():
        for p in spec.primes:
            singular = sum(1 for r in recs if r.adjacency_coranks[p] > 0)
            N = len(recs)
            rows.append({"n": n, "p": p, "singular_fraction": singular / N if N else float("nan"),
                         "mean_corank": statistics.fmean(r.adjacency_coranks[p] for r in recs) if N else float("nan"),
                         "markov_bound": 1 / (p - 1), "samples": N})
    return rows


def tree_entropy_table(spec: ExperimentSpec, records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    bound = math.log(math.sqrt(2 * spec.d ** 2))
    for n, recs in _per_n(records, spec.ns).items():
        vals = [r.log_torsion / n for r in recs]
        N = len(vals)
        rows.append({"n": n, "mean": statistics.fmean(vals) if N else float("nan"),
                     "sd": statistics.stdev(vals) if N > 1 else 0.0,
                     "min": min(vals, default=float("nan")), "max": max(vals, default=float("nan")),
                     "constant": mckay_lyons_constant(spec.d), "bound": bound,
                     "bound_violations": sum(1 for v in vals if v >= bound), "samples": N})
    return rows


def rank_growth_table(spec: ExperimentSpec, records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    for n, recs in _per_n(records, spec.ns).items():
        ratios = [max(r.coranks.values(), default=0) / n for r in recs]
        N = len(ratios)
        row = {"n": n, "mean_max_rank_ratio": statistics.fmean(ratios) if N else float("nan"),
               "samples": N}
        for p in spec.primes:
            row[f"mean_rank_{p}"] = statistics.fmean(r.coranks[p] for r in recs) if N else float("nan")
        rows.append(row)
    return rows


def parity_table(spec: ExperimentSpec, records: Sequence[RunRecord]) -> list[dict]:
    rows = []
    for n, recs in _per_n(records, spec.ns).items():
        odd = sum(1 for r in recs if r.coranks[2] % 2 == 1)
        rows.append({"n": n, "odd_2_corank": odd, "samples": len(recs),
                     "odd_fraction": odd / len(recs) if recs else float("nan")})
    return rows


def mixing_table(spec: ExperimentSpec) -> list[dict]:
    V = AbelianGroupType.parse(spec.groups[0] if spec.groups else "Z/2")
    rows = []
    for n in spec.ns:
        total = Fraction(0)
        for c in class_gaps(n, V, spec.d, spec.model):
            total += c.weighted
            rows.append({"n": n, "d": spec.d, "class": " ".join(map(str, c.vector_class.counts)),
                         "class_size": c.vector_class.size, "d_inf": str(c.gap),
                         "d_inf_float": float(c.gap)})
        rows.append({"n": n, "d": spec.d, "class": "total", "class_size": V.order ** n,
                     "d_inf": str(total), "d_inf_float": float(total)})
    return rows


# ---------------------------------------------------------------------------
# running

@dataclass
class RunResult:
    spec: ExperimentSpec
    records: list[RunRecord]
    reports: dict[str, ComparisonReport]
    tables: dict[str, list[dict]]
    violations: list[str]
    elapsed: float = 0.0

    def render(self) -> str:
        parts = [f"experiment {self.spec.kind}: {len(self.records)} records in {self.elapsed:.1f}s"]
        parts += [r.render() for r in self.reports.values()]
        for name, rows in self.tables.items():
            parts.append(f"{name}:")
            parts += ["  " + ", ".join(f"{k}={_fmt(v)}" for k, v in row.items()) for row in rows]
        if self.violations:
            parts.append("violations:")
            parts += [f"  {v}" for v in self.violations]
        return "\n".join(parts)

    def summary_csv(self) -> str:
        rows = [row for rep in self.reports.values() for row in rep.to_rows()]
        rows += [{"table": name, **row} for name, rows_ in self.tables.items() for row in rows_]
        if not rows:
            return ""
        fields = []
        for row in rows:
            fields += [k for k in row if k not in fields]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()


def _fmt(v) -> str:
    return f"{v:.5g}" if isinstance(v, float) else str(v)


def _tasks(spec: ExperimentSpec) -> list[tuple[int, int]]:
    if spec.kind == "mixing-gap":
        return []
    return [(n, i) for n in spec.ns for i in range(spec.samples)]


def _load_records(path: str, spec: ExperimentSpec) -> list[RunRecord]:
    if not os.path.exists(path):
        return []
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        return []
    header = json.loads(lines[0])
    if header.get("spec") != _spec_header(spec):
        raise ValueError(f"{path} belongs to a different experiment; refusing to resume")
    out = []
    for ln in lines[1:]:
        try:
            out.append(RunRecord.from_record(json.loads(ln)))
        except (json.JSONDecodeError, KeyError):
            break  # torn final line from an interrupted run
    return out


def _spec_header(spec: ExperimentSpec) -> dict:
    # records depend on (spec, n, index) only, so a run may be resumed with more samples
    rec = spec.to_record()
    for key in ("workers", "out", "samples"):
        rec.pop(key)
    return rec


def iter_records(spec: ExperimentSpec, tasks: Sequence[tuple[int, int]]):
    """Compute records for the tasks in order, in a pool when workers > 1."""
    if spec.workers == 1 or len(tasks) < 2:
        for n, i in tasks:
            yield compute_record(spec, n, i)
        return
    payload = [(spec.to_record(), n, i) for n, i in tasks]
    with multiprocessing.get_context("spawn").Pool(spec.workers) as pool:
        yield from pool.imap(_compute_task, payload, chunksize=max(1, len(payload) // (8 * spec.workers)))


def run(spec: ExperimentSpec, resume: bool = True, progress=None) -> RunResult:
    """Run an experiment; records are appended to OUT/records.jsonl when spec.out is set."""
    start = time.perf_counter()
    tasks = _tasks(spec)
    records: list[RunRecord] = []
    sink = None
    if spec.out:
        os.makedirs(spec.out, exist_ok=True)
        path = os.path.join(spec.out, "records.jsonl")
        wanted = set(tasks)
        records = [r for r in (_load_records(path, spec) if resume else []) if (r.n, r.index) in wanted]
        done = {(r.n, r.index) for r in records}
        tasks = [t for t in tasks if t not in done]
        sink = open(path, "w")
        sink.write(json.dumps({"spec": _spec_header(spec)}, sort_keys=True) + "\n")
        for r in records:
            sink.write(r.dumps() + "\n")
        sink.flush()
    try:
        for rec in iter_records(spec, tasks):
            records.append(rec)
            if sink:
                sink.write(rec.dumps() + "\n")
                sink.flush()
            if progress:
                progress(rec)
    finally:
        if sink:
            sink.close()
    records.sort(key=lambda r: (spec.ns.index(r.n), r.index))
    result = summarize(spec, records)
    result.elapsed = time.perf_counter() - start
    if spec.out:
        with open(os.path.join(spec.out, "summary.csv"), "w") as fh:
            fh.write(result.summary_csv())
        with open(os.path.join(spec.out, "report.txt"), "w") as fh:
            fh.write(result.render() + "\n")
    return result


def summarize(spec: ExperimentSpec, records: list[RunRecord]) -> RunResult:
    """Build reports and tables from records, flagging threshold violations."""
    reports: dict[str, ComparisonReport] = {}
    tables: dict[str, list[dict]] = {}
    violations: list[str] = []
    if spec.kind in ("sylow-distribution", "cokernel") and records:
        reports = sylow_reports(spec, records)
    elif spec.kind == "moments":
        tables["moments"] = moments_table(spec, records)
        violations += [f"moment V={r['V']} n={r['n']} z={r['z']:+.2f}"
                       for r in tables["moments"] if abs(r["z"]) > Z_FLAG]
    elif spec.kind == "singularity":
        tables["singularity"] = singularity_table(spec, records)
    elif spec.kind == "tree-entropy":
        tables["tree-entropy"] = tree_entropy_table(spec, records)
        violations += [f"torsion bound violated at n={r['n']} ({r['bound_violations']} samples)"
                       for r in tables["tree-entropy"] if r["bound_violations"]]
    elif spec.kind == "rank-growth":
        tables["rank-growth"] = rank_growth_table(spec, records)
    elif spec.kind == "parity-check":
        tables["parity"] = parity_table(spec, records)
        violations += [f"even 2-corank at n={r['n']} in {r['samples'] - r['odd_2_corank']} samples"
                       for r in tables["parity"] if r["odd_2_corank"] != r["samples"]]
    elif spec.kind == "mixing-gap":
        tables["mixing"] = mixing_table(spec)
    for rep in reports.values():
        violations += [f"{rep.name}: {r.label} z={r.z:+.2f}" for r in rep.flagged]
    return RunResult(spec, records, reports, tables, violations)
