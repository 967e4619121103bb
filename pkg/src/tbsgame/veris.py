"""VERIS incident ingestion and timeline-duration statistics.

Reads one-incident-per-file VERIS JSON, keeps malware/hacking incidents,
converts the timeline durations to days and builds fixed-width histograms.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

logger = logging.getLogger(__name__)

ACTION_CATEGORIES = ("malware", "hacking", "social", "misuse", "physical",
                     "error", "environmental")
TIMELINE_FIELDS = ("compromise", "exfiltration", "discovery", "containment")
MALICIOUS = frozenset({"malware", "hacking"})

DAYS_PER_UNIT = {
    "seconds": 1 / 86400,
    "minutes": 1 / 1440,
    "hours": 1 / 24,
    "days": 1.0,
    "weeks": 7.0,
    "months": 30.0,
    "years": 365.0,
}
# Calendar-average alternative for sensitivity checks.
DAYS_PER_UNIT_CALENDAR = {**DAYS_PER_UNIT, "months": 30.44, "years": 365.25}

EXCLUDED_UNITS = {"na": "na-unit", "unknown": "unknown-unit",
                  "never": "never-unit"}
DEFAULT_CONTAINMENT_CAP_DAYS = 9 * 365.0


class EmptySampleSet(ValueError):
    pass


class SourceUnreadable(OSError):
    pass


@dataclass(frozen=True)
class IncidentRecord:
    incident_id: str
    actions: frozenset
    incident_year: int
    timeline: Mapping[str, tuple]  # field -> (unit, value or None)
    impact: Mapping | None = None


@dataclass(frozen=True)
class DurationSample:
    field: str
    days: float
    unit_raw: str
    value_raw: float


@dataclass
class TimingStats:
    n: int
    mean_days: float
    min_days: float
    max_days: float
    histogram: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SkipReport:
    malformed: list = field(default_factory=list)
    missing_year: list = field(default_factory=list)
    missing_action: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.malformed) + len(self.missing_year) + \
            len(self.missing_action)

    def to_dict(self) -> dict:
        return {"malformed": self.malformed,
                "missing_year": self.missing_year,
                "missing_action": self.missing_action,
                "total": self.total}


def _number(value):
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return None
    return None


def record_from_document(doc: dict, fallback_id: str) -> IncidentRecord | str:
    """Build a record, or return the skip reason as a string."""
    if not isinstance(doc, dict):
        return "malformed"
    action = doc.get("action")
    actions = frozenset(k.lower() for k in action) if isinstance(action, dict) \
        else frozenset()
    actions &= frozenset(ACTION_CATEGORIES)
    if not actions:
        return "missing_action"
    timeline = doc.get("timeline") or {}
    incident = timeline.get("incident") if isinstance(timeline, dict) else None
    year = incident.get("year") if isinstance(incident, dict) else None
    try:
        year = int(year)
    except (TypeError, ValueError):
        return "missing_year"
    raw = {}
    for name in TIMELINE_FIELDS:
        entry = timeline.get(name)
        if isinstance(entry, dict) and entry.get("unit") is not None:
            raw[name] = (str(entry["unit"]), _number(entry.get("value")))
    return IncidentRecord(
        incident_id=str(doc.get("incident_id") or fallback_id),
        actions=actions,
        incident_year=year,
        timeline=raw,
        impact=doc.get("impact") if isinstance(doc.get("impact"), dict)
        else None,
    )


def parse_incidents(source) -> tuple[list[IncidentRecord], SkipReport]:
    """Parse every ``*.json`` file under ``source`` (recursively).

    Messy input never aborts the run: unreadable or malformed documents and
    documents without a year or an action are skipped, logged and reported.
    """
    root = Path(source)
    if not root.is_dir():
        raise SourceUnreadable(f"not a readable directory: {root}")
    try:
        paths = sorted(root.rglob("*.json"))
    except OSError as exc:
        raise SourceUnreadable(str(exc)) from exc
    records, skips = [], SkipReport()
    for path in paths:
        name = str(path.relative_to(root))
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            logger.warning("skipping malformed %s: %s", name, exc)
            skips.malformed.append(name)
            continue
        rec = record_from_document(doc, path.stem)
        if isinstance(rec, str):
            logger.warning("skipping %s: %s", name, rec.replace("_", " "))
            getattr(skips, rec).append(name)
            continue
        records.append(rec)
    return records, skips


def filter_malicious(records: Iterable[IncidentRecord],
                     actions: Iterable[str] = MALICIOUS
                     ) -> list[IncidentRecord]:
    """Records carrying any of ``actions``, one per incident id."""
    wanted = frozenset(a.lower() for a in actions)
    seen, out = set(), []
    for rec in records:
        if rec.actions & wanted and rec.incident_id not in seen:
            seen.add(rec.incident_id)
            out.append(rec)
    return out


def classify_duration(timeline_field: str, unit, value,
                      days_per_unit: Mapping[str, float] = DAYS_PER_UNIT,
                      cap_days: float | None = None):
    """Return ``(days, None)`` for a usable entry or ``(None, reason)``."""
    if unit is None:
        return None, "missing"
    key = str(unit).strip().lower()
    if key in EXCLUDED_UNITS:
        return None, EXCLUDED_UNITS[key]
    if key not in days_per_unit and key + "s" in days_per_unit:
        key += "s"  # "1 Day", "1 Year" in free-text tables
    if key not in days_per_unit:
        return None, "unrecognized-unit"
    if value is None:
        return None, "unit-only"
    if not math.isfinite(value) or value <= 0:
        return None, "non-positive-value"
    days = value * days_per_unit[key]
    if cap_days is not None and days > cap_days:
        return None, "outlier-cap"
    return days, None


def extract_durations(records: Iterable[IncidentRecord], timeline_field: str,
                      days_per_unit: Mapping[str, float] = DAYS_PER_UNIT,
                      containment_cap_days: float | None =
                      DEFAULT_CONTAINMENT_CAP_DAYS):
    """Usable duration samples for one timeline field plus exclusion tallies.

    Every record lands in exactly one bucket: a sample or one exclusion
    reason (``missing`` when the field is absent). The outlier cap applies to
    containment only.
    """
    if timeline_field not in TIMELINE_FIELDS:
        raise ValueError(f"unknown timeline field {timeline_field!r}")
    cap = containment_cap_days if timeline_field == "containment" else None
    samples, excluded = [], Counter()
    for rec in records:
        unit, value = rec.timeline.get(timeline_field, (None, None))
        days, reason = classify_duration(timeline_field, unit, value,
                                         days_per_unit, cap)
        if reason:
            excluded[reason] += 1
        else:
            samples.append(DurationSample(timeline_field, days, unit, value))
    return samples, dict(sorted(excluded.items()))


def samples_from_pairs(timeline_field: str, pairs,
                       days_per_unit: Mapping[str, float] = DAYS_PER_UNIT
                       ) -> list[DurationSample]:
    """Samples from ``(value, unit)`` pairs such as transcribed tables."""
    out = []
    for value, unit in pairs:
        days, reason = classify_duration(timeline_field, unit, float(value),
                                         days_per_unit)
        if reason:
            raise ValueError(f"unusable entry {value} {unit}: {reason}")
        out.append(DurationSample(timeline_field, days, unit, float(value)))
    return out


def timing_stats(samples, bin_width_days: float) -> TimingStats:
    if not bin_width_days > 0:
        raise ValueError("bin_width_days must be > 0")
    days = sorted(s.days for s in samples)
    if not days:
        raise EmptySampleSet("no duration samples")
    n = len(days)
    counts = Counter(int(x // bin_width_days) for x in days)
    histogram, running = [], 0
    for b in range(max(counts) + 1):
        running += counts.get(b, 0)
        histogram.append((b * bin_width_days, bin_width_days,
                          counts.get(b, 0), running / n))
    return TimingStats(n=n, mean_days=math.fsum(days) / n,
                       min_days=days[0], max_days=days[-1],
                       histogram=histogram)


SNAPSHOT_2016 = {
    "distinct_incidents": 1795,
    "discovery": {"n": 150, "mean": 198.2539, "mean_tol": 2.0},
    "containment": {"n": 58, "mean": 10.4504, "mean_tol": 0.5},
}


def snapshot_checks(n_incidents: int, timeline_field: str,
                    stats: TimingStats) -> list[tuple[str, bool, str]]:
    """Compare a full 2016 VCDB run against its published statistics."""
    ref = SNAPSHOT_2016
    out = [("distinct malware/hacking incidents",
            n_incidents == ref["distinct_incidents"],
            f"{n_incidents} vs {ref['distinct_incidents']}")]
    if timeline_field in ref:
        want = ref[timeline_field]
        out.append((f"{timeline_field} n", stats.n == want["n"],
                    f"{stats.n} vs {want['n']}"))
        diff = abs(stats.mean_days - want["mean"])
        out.append((f"{timeline_field} mean", diff <= want["mean_tol"],
                    f"{stats.mean_days:.4f} vs {want['mean']} "
                    f"(tol {want['mean_tol']})"))
    return out
