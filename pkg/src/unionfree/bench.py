"""Batch runs over suites of instances, emitted as CSV rows."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .constructions import GridSpec, StackSpec, barat, erdos_shelah, random_family
from .errors import ContractError, ParseError
from .family import SetFamily, parse_family
from .ladder import extract_from_family, meets_target, min_target_size, validate_certificate
from .moser import extract_union_free, moser_bound
from .oracle import OracleLimits, max_a_union_free_exact, max_union_free_exact

CSV_COLUMNS = ("instance_id", "m", "a", "algorithm", "size", "target", "met", "ms")
ALGORITHMS = ("extract", "extract-a", "exact", "exact-a")


@dataclass(frozen=True)
class RunConfig:
    instance_id: str
    algorithm: str
    input_path: str | None = None
    generator: dict | None = None
    a: int | None = None
    limits: OracleLimits = field(default_factory=OracleLimits)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ContractError(f"unknown algorithm {self.algorithm!r}")
        if (self.input_path is None) == (self.generator is None):
            raise ContractError(f"{self.instance_id}: give exactly one of input or gen")
        if self.algorithm.endswith("-a") and self.a is None:
            raise ContractError(f"{self.instance_id}: algorithm {self.algorithm} needs a")

    @classmethod
    def from_dict(cls, doc: dict, position: int = 0, base: Path | None = None) -> "RunConfig":
        path = doc.get("input")
        if path is not None and base is not None and not Path(path).is_absolute():
            path = str(base / path)
        limits = OracleLimits(doc.get("max_members"), float(doc.get("time_limit", 60.0)))
        return cls(
            instance_id=str(doc.get("id", f"instance-{position}")),
            algorithm=doc.get("algorithm", "extract"),
            input_path=path,
            generator=doc.get("gen"),
            a=doc.get("a"),
            limits=limits,
        )


def generate(spec: dict) -> SetFamily:
    kind = spec.get("kind")
    if kind == "es":
        return erdos_shelah(GridSpec(int(spec["n"]), spec.get("variant", "square")))
    if kind == "barat":
        return barat(StackSpec(int(spec["a"]), int(spec["n"])))
    if kind == "random":
        return random_family(
            int(spec.get("seed", 0)),
            int(spec["m"]),
            int(spec["u"]),
            float(spec.get("density", 0.5)),
            spec.get("mode", "bernoulli"),
        )
    raise ContractError(f"unknown generator {kind!r}")


def load_family(cfg: RunConfig) -> SetFamily:
    if cfg.generator is not None:
        return generate(cfg.generator)
    return parse_family(Path(cfg.input_path).read_text())


def run_one(cfg: RunConfig) -> dict:
    """One CSV row; failures are recorded in the row, never raised."""
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(instance_id=cfg.instance_id, algorithm=cfg.algorithm, a="" if cfg.a is None else cfg.a)
    start = time.perf_counter()
    try:
        fam = load_family(cfg)
        row["m"] = fam.m
        if cfg.algorithm == "extract":
            report = extract_union_free(fam)
            row.update(size=report.size, target=report.bound, met=report.size >= report.bound)
        elif cfg.algorithm == "extract-a":
            cert, order = extract_from_family(fam, cfg.a)
            ok = validate_certificate(cert, order, cfg.a)
            met = meets_target(cert.claimed_size, cfg.a, fam.m) if fam.m >= cfg.a else cert.claimed_size == fam.m
            row.update(size=cert.claimed_size, target=min_target_size(cfg.a, fam.m), met=ok and met)
        elif cfg.algorithm == "exact":
            res = max_union_free_exact(fam, cfg.limits)
            target = moser_bound(fam.m)
            row.update(size=res.optimum, target=target,
                       met="partial" if res.time_limit_hit else res.optimum >= target)
        else:
            res = max_a_union_free_exact(fam, cfg.a, cfg.limits)
            target = min_target_size(cfg.a, fam.m)
            row.update(size=res.optimum, target=target,
                       met="partial" if res.time_limit_hit else res.optimum >= target)
    except Exception as exc:  # recorded per row by design
        row["met"] = f"error: {type(exc).__name__}: {exc}"
    row["ms"] = round((time.perf_counter() - start) * 1000, 3)
    if isinstance(row["met"], bool):
        row["met"] = str(row["met"]).lower()
    return row


def bench_run(suite: Iterable[RunConfig], workers: int = 1) -> list[dict]:
    suite = list(suite)
    if not suite:
        raise ContractError("bench suite is empty")
    if workers <= 1:
        return [run_one(cfg) for cfg in suite]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, suite))


def load_suite(path: str | Path) -> list[RunConfig]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"suite: {exc.msg}", exc.lineno) from None
    entries = doc.get("instances") if isinstance(doc, dict) else doc
    if not isinstance(entries, list) or not all(isinstance(e, dict) for e in entries):
        raise ParseError('suite must be a list of instance objects or {"instances": [...]}')
    return [RunConfig.from_dict(e, k, path.parent) for k, e in enumerate(entries)]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
