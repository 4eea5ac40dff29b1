"""CISA Known Exploited Vulnerabilities (KEV) catalog ingestion.

Columns are matched by header name, case-insensitively and ignoring
punctuation, so both the official camelCase export (``cveID``,
``vendorProject``, ``dateAdded``...) and snake_case or spaced variants
are accepted. Only vendor and product become clustering features; the
remaining fields are kept for reporting.
"""

from __future__ import annotations

import csv
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path

import numpy as np

from .errors import IngestionError, UsageError

log = logging.getLogger(__name__)

MANDATORY = ("cve_id", "vendor_project", "product", "date_added")

# canonical field -> accepted header spellings (lowercase, alphanumerics only)
HEADER_ALIASES = {
    "cve_id": ("cveid", "cve"),
    "vendor_project": ("vendorproject", "vendor"),
    "product": ("product", "productname"),
    "vulnerability_name": ("vulnerabilityname", "name"),
    "date_added": ("dateadded",),
    "short_description": ("shortdescription", "description"),
    "required_action": ("requiredaction",),
    "due_date": ("duedate",),
    "cvss_score": ("cvss", "cvssscore", "cvss3", "cvssv3", "cvss3score", "basescore"),
    "cwe": ("cwe", "cwes", "cweid"),
    "attack_vector": ("attackvector",),
    "complexity": ("complexity", "attackcomplexity"),
    "severity": ("severity", "baseseverity"),
}

_CVE_RE = re.compile(r"^CVE-\d{4}-\d{4,}$")
_DATE_FORMATS = ("%Y-%m-%d", "%m/%d/%Y", "%Y/%m/%d")


@dataclass(frozen=True)
class VulnRecord:
    cve_id: str
    vendor_project: str
    product: str
    date_added: date
    vulnerability_name: str = ""
    short_description: str = ""
    required_action: str = ""
    due_date: date | None = None
    cvss_score: float | None = None
    cwe: str = ""
    attack_vector: str = ""
    complexity: str = ""
    severity: str = ""


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str


@dataclass
class ParsedCatalog:
    records: list[VulnRecord]
    rejects: list[Reject] = field(default_factory=list)

    def __len__(self):
        return len(self.records)


def _norm_header(name: str) -> str:
    return re.sub(r"[^0-9a-z]", "", name.strip().lower())


def _parse_date(text: str) -> date:
    text = text.strip()
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            pass
    raise ValueError(f"unparseable date {text!r}")


def _map_headers(header: list[str]) -> dict[str, int]:
    normalized = [_norm_header(h) for h in header]
    columns = {}
    for canonical, aliases in HEADER_ALIASES.items():
        for alias in aliases:
            if alias in normalized:
                columns[canonical] = normalized.index(alias)
                break
    return columns


def _build_record(row: list[str], columns: dict[str, int]) -> VulnRecord:
    def get(name):
        i = columns.get(name)
        return row[i].strip() if i is not None and i < len(row) else ""

    cve = get("cve_id")
    if not _CVE_RE.match(cve):
        raise ValueError(f"malformed CVE id {cve!r}")
    vendor, product = get("vendor_project"), get("product")
    if not vendor:
        raise ValueError("empty vendor_project")
    if not product:
        raise ValueError("empty product")
    due = get("due_date")
    cvss_text = get("cvss_score")
    cvss = None
    if cvss_text:
        cvss = float(cvss_text)
        if not (math.isfinite(cvss) and 0.0 <= cvss <= 10.0):
            raise ValueError(f"CVSS score {cvss_text!r} outside [0, 10]")
    return VulnRecord(
        cve_id=cve,
        vendor_project=vendor,
        product=product,
        date_added=_parse_date(get("date_added")),
        vulnerability_name=get("vulnerability_name"),
        short_description=get("short_description"),
        required_action=get("required_action"),
        due_date=_parse_date(due) if due else None,
        cvss_score=cvss,
        cwe=get("cwe"),
        attack_vector=get("attack_vector"),
        complexity=get("complexity"),
        severity=get("severity"),
    )


def parse_kev_csv(path) -> ParsedCatalog:
    """Parse a KEV CSV export.

    Rows whose mandatory fields fail to parse are returned as rejects with
    their 1-based line number; ``len(records) + len(rejects)`` equals the
    number of non-blank data rows.

    Raises:
        IngestionError: the file is missing, has no header, or lacks any of
            the cve_id / vendor / product / date_added columns.
    """
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise IngestionError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path} is empty; a header row is required") from None
        columns = _map_headers(header)
        missing = [c for c in MANDATORY if c not in columns]
        if missing:
            raise IngestionError(f"{path} is missing required columns: {', '.join(missing)}")
        records, rejects = [], []
        line = reader.line_num
        for row in reader:
            start, line = line + 1, reader.line_num
            if not any(cell.strip() for cell in row):
                continue
            try:
                records.append(_build_record(row, columns))
            except ValueError as exc:
                rejects.append(Reject(start, str(exc)))
    if rejects:
        log.warning("%s: %d rows rejected", path, len(rejects))
    return ParsedCatalog(records, rejects)


def filter_year(records, year: int) -> list[VulnRecord]:
    """Keep records added to the catalog during calendar ``year``."""
    return [r for r in records if r.date_added.year == year]


@dataclass(frozen=True)
class LabelEncoding:
    """Bijection between the sorted distinct values of a column and 0..n-1."""

    column: str
    categories: tuple[str, ...]

    @property
    def code_of(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.categories)}

    def encode(self, value: str) -> int:
        try:
            return self.code_of[value]
        except KeyError:
            raise UsageError(f"{value!r} is not a category of {self.column}") from None

    def decode(self, code: int) -> str:
        return self.categories[code]


ENCODABLE = ("vendor_project", "product", "cwe", "attack_vector", "complexity", "severity")


def label_encode(records, columns=("vendor_project", "product")):
    """Integer-code categorical columns; categories are numbered in sorted order.

    Returns:
        ``(data, encodings)`` with ``data`` an M x len(columns) float array
        and ``encodings`` a dict of :class:`LabelEncoding` keyed by column.
    """
    for col in columns:
        if col not in ENCODABLE:
            raise UsageError(f"cannot label-encode column {col!r}")
    encodings = {}
    data = np.zeros((len(records), len(columns)))
    for j, col in enumerate(columns):
        values = [getattr(r, col) for r in records]
        enc = LabelEncoding(col, tuple(sorted(set(values))))
        lookup = enc.code_of
        data[:, j] = [lookup[v] for v in values]
        encodings[col] = enc
    return data, encodings


@dataclass(frozen=True)
class NormalizationRange:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise UsageError(f"normalization range needs lo < hi, got [{self.lo}, {self.hi}]")


UNIT_RANGE = NormalizationRange(0.0, 1.0)
ANGLE_RANGE = NormalizationRange(0.0, math.pi)


def min_max_normalize(data, rng: NormalizationRange = UNIT_RANGE) -> np.ndarray:
    """Map each column's [min, max] affinely onto [lo, hi]; constant columns go to lo."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    out = np.full_like(x, rng.lo)
    if x.shape[0] == 0:
        return out
    lo, hi = x.min(axis=0), x.max(axis=0)
    for j in range(x.shape[1]):
        span = hi[j] - lo[j]
        if span == 0:
            log.warning("column %d is constant; mapped to %g", j, rng.lo)
            continue
        col = (x[:, j] - lo[j]) / span * (rng.hi - rng.lo) + rng.lo
        # pin the endpoints exactly against rounding
        col[x[:, j] == lo[j]] = rng.lo
        col[x[:, j] == hi[j]] = rng.hi
        out[:, j] = np.clip(col, rng.lo, rng.hi)
    return out


@dataclass(frozen=True)
class ClusterProfile:
    cluster_id: int
    size: int
    top_vendors: tuple[tuple[str, int], ...]
    top_products: tuple[tuple[str, int], ...]
    severity_histogram: tuple[tuple[str, int], ...]


def _ranked(counter: Counter) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


def cluster_profile(records, assignments, k: int) -> list[ClusterProfile]:
    """Vendor, product and severity frequencies per cluster (full tables, ranked)."""
    assignments = np.asarray(assignments)
    if assignments.shape != (len(records),):
        raise UsageError("need one assignment per record")
    profiles = []
    for cid in range(k):
        members = [records[i] for i in np.flatnonzero(assignments == cid)]
        profiles.append(
            ClusterProfile(
                cluster_id=cid,
                size=len(members),
                top_vendors=_ranked(Counter(r.vendor_project for r in members)),
                top_products=_ranked(Counter(r.product for r in members)),
                severity_histogram=tuple(
                    sorted(Counter(r.severity or "unknown" for r in members).items())
                ),
            )
        )
    return profiles


def profiles_markdown(title: str, profiles: list[ClusterProfile], top_n: int = 5) -> str:
    lines = [f"## {title}", ""]
    for p in profiles:
        lines.append(f"### Cluster {p.cluster_id} ({p.size} records)")
        lines.append("")
        vendors = ", ".join(f"{v} ({n})" for v, n in p.top_vendors[:top_n]) or "-"
        products = ", ".join(f"{v} ({n})" for v, n in p.top_products[:top_n]) or "-"
        severity = ", ".join(f"{v}: {n}" for v, n in p.severity_histogram) or "-"
        lines.append(f"- Top vendors: {vendors}")
        lines.append(f"- Top products: {products}")
        lines.append(f"- Severity: {severity}")
        lines.append("")
    return "\n".join(lines)
