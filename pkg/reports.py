#!/usr/bin/env python3
"""Verification reports: cases, per-suite results, canonical JSON / CSV export and run metadata"""

import csv
import hashlib
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Union

import psutil

from frobenius import ConsistencyError, EngineError

logger = logging.getLogger(__name__)

CheckFn = Callable[[], Optional[str]]


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class CaseResult:
    id: str
    passed: bool
    residual: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "pass": self.passed, "residual": self.residual}


@dataclass
class Case:
    """One independent check; the callable returns None on success or a residual witness"""
    id: str
    check: CheckFn

    def run(self) -> CaseResult:
        try:
            residual = self.check()
        except ConsistencyError as e:
            residual = f"consistency: {e}"
        if residual is not None:
            logger.warning(f"❌ {self.id}: {residual}")
        else:
            logger.debug(f"✅ {self.id}")
        return CaseResult(self.id, residual is None, residual)


@dataclass
class SuiteReport:
    suite: str
    theorem: str
    cases: List[CaseResult] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def summary(self) -> str:
        return f"{self.suite} ({self.theorem}): {len(self.cases) - len(self.failures)}/{len(self.cases)} cases pass"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "theorem": self.theorem,
            "cases": [c.to_dict() for c in sorted(self.cases, key=lambda c: c.id)],
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SuiteReport":
        cases = [CaseResult(c["id"], bool(c["pass"]), c.get("residual")) for c in data.get("cases", [])]
        return cls(data["suite"], data.get("theorem", ""), cases, dict(data.get("notes", {})))


class RunMeter:
    """Wall time and resident memory of a run, kept out of the canonical report"""

    def __init__(self):
        self.process = psutil.Process()
        self.started = time.perf_counter()
        self.rss_start = self.process.memory_info().rss

    def snapshot(self) -> Dict[str, Any]:
        rss = self.process.memory_info().rss
        return {
            "wall_seconds": round(time.perf_counter() - self.started, 3),
            "rss_bytes": rss,
            "rss_delta_bytes": rss - self.rss_start,
        }


def write_json(path: Union[str, Path], obj: Any) -> str:
    """Write canonical JSON and return its sha256"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = canonical_json(obj)
    path.write_text(text + "\n", encoding="utf-8")
    digest = sha256_hex(text)
    logger.info(f"💾 Wrote {path} (sha256 {digest[:12]})")
    return digest


def write_report(path: Union[str, Path], report: SuiteReport, meta: Optional[Dict[str, Any]] = None) -> str:
    path = Path(path)
    digest = write_json(path, report.to_dict())
    if meta is not None:
        meta_path = path.with_name(path.stem + ".meta.json")
        meta_path.write_text(json.dumps({**meta, "report_sha256": digest}, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return digest


def load_report(path: Union[str, Path]) -> SuiteReport:
    path = Path(path)
    if not path.exists():
        raise EngineError(f"report {path} does not exist")
    with open(path, encoding="utf-8") as f:
        return SuiteReport.from_dict(json.load(f))


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = rows_to_csv(header, rows)
    path.write_text(text, encoding="utf-8")
    digest = sha256_hex(text)
    logger.info(f"💾 Wrote {path} (sha256 {digest[:12]})")
    return digest


def report_rows(report: SuiteReport) -> List[List[Any]]:
    return [[c.id, "pass" if c.passed else "fail", c.residual or ""] for c in sorted(report.cases, key=lambda c: c.id)]
