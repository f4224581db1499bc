"""Per-record stage functions and an order-preserving parallel runner."""

from __future__ import annotations

import functools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .categorize import classify_with_rule
from .corpus import PairRecord, Status
from .edit_align import build_delta
from .filters import FilterConfig, run_filters


def filter_record(record: PairRecord, cfg: FilterConfig) -> PairRecord:
    return run_filters(record, cfg)


def categorize_record(record: PairRecord, split_radius: int = 3, edge_words: int = 5) -> PairRecord:
    if record.status is Status.REJECTED:
        return record
    category, rule = classify_with_rule(record, split_radius=split_radius, edge_words=edge_words)
    tags = tuple(t for t in record.tags if not t.startswith("rule:")) + (f"rule:{rule}",)
    return record.replace(category=category, tags=tags)


def label_record(record: PairRecord, run_length: int = 3, on_violation: str = "escalate") -> PairRecord:
    if record.status is Status.REJECTED:
        return record
    alignment = build_delta(record, run_length=run_length, on_violation=on_violation)
    tags = tuple(t for t in record.tags if t != "delta_widened")
    if alignment.category is not record.category:
        tags += ("delta_widened",)
    return record.replace(alignment=alignment, tags=tags)


def _guarded(func, record):
    try:
        return func(record), None
    except (ValueError, KeyError) as exc:
        return None, f"{record.id}: {exc}"


@dataclass
class StageResult:
    records: list[PairRecord] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        status = Counter(r.status.value for r in self.records)
        reasons = Counter(r.reason for r in self.records if r.reason)
        categories = Counter(r.category.value for r in self.records if r.category is not None)
        return {
            "records": len(self.records),
            "errors": len(self.errors),
            "status": dict(sorted(status.items())),
            "rejection_reasons": dict(sorted(reasons.items())),
            "categories": dict(sorted(categories.items())),
        }


def run_stage(
    func: Callable[[PairRecord], PairRecord],
    records: Iterable[PairRecord],
    jobs: int = 1,
    chunksize: int = 512,
) -> StageResult:
    """Apply ``func`` to every record, keeping input order.

    Records that raise ``ValueError``/``KeyError`` are dropped from the
    output and reported in ``errors``. With ``jobs > 1`` the work is sharded
    over processes; results are identical to the serial run.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    guarded = functools.partial(_guarded, func)
    result = StageResult()
    if jobs == 1:
        outputs: Iterator = map(guarded, records)
        _collect(outputs, result)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            _collect(pool.map(guarded, records, chunksize=chunksize), result)
    return result


def _collect(outputs, result: StageResult) -> None:
    for record, error in outputs:
        if error is None:
            result.records.append(record)
        else:
            result.errors.append(error)
