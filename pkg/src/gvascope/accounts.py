"""Production-account panels: parsing, validation and the embedded Table 1 data.

A panel holds one :class:`IndustryRecord` per (industry, year) pair. Records
carry gross value added (GVA) and output at basic prices (OBP) in billions of
currency units. Values are kept as plain floats; no currency handling is done.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .exceptions import AccountsParseError, UnknownYearError

BUILTIN_TABLE1 = "builtin:table1"
TABLE1_YEAR = 2022

DECIMAL_POLICIES = ("auto", "comma", "point")
_DELIMITERS = (";", ",", "\t")

_SLUG_RE = re.compile(r"^[a-z0-9]+(?:-[a-z0-9]+)*$")
_NUMERAL_RE = re.compile(r"^[+-]?(?:\d+(?:[.,]\d*)?|[.,]\d+)(?:[eE][+-]?\d+)?$")

_COLUMN_ALIASES = {
    "industry": "industry",
    "year": "year",
    "gva": "gva",
    "obp": "obp",
    "name": "name",
    "ordinal": "ordinal",
    "n": "ordinal",
}
_REQUIRED_COLUMNS = ("industry", "gva", "obp")


def slugify(text: str) -> str:
    """Lowercase ``text`` and collapse every non-alphanumeric run into one hyphen."""
    return re.sub(r"[^a-z0-9]+", "-", text.strip().lower()).strip("-")


@dataclass(frozen=True, order=True)
class IndustryId:
    ordinal: int
    slug: str

    def __str__(self):
        return f"{self.ordinal}:{self.slug}"


@dataclass(frozen=True)
class IndustryRecord:
    """One industry-year row of a production account.

    Construction does not enforce ``0 < gva <= obp``; that is the job of
    :func:`validate_panel`, so that bad panels can be reported rather than
    rejected outright.
    """

    id: IndustryId
    name: str
    year: int
    gva: float
    obp: float


@dataclass(frozen=True)
class Violation:
    rule: str
    industry: Optional[str]
    year: Optional[int]
    message: str

    def __str__(self):
        who = self.industry if self.industry is not None else "-"
        when = self.year if self.year is not None else "-"
        return f"[{self.rule}] {who} {when}: {self.message}"


@dataclass(frozen=True)
class AccountsPanel:
    records: tuple
    years: tuple = field(init=False, compare=False, repr=False)
    industries: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "years", tuple(sorted({r.year for r in records})))
        ids = {}
        for r in records:
            ids.setdefault(r.id, None)
        object.__setattr__(self, "industries", tuple(sorted(ids)))

    def has_year(self, year: int) -> bool:
        return year in self.years

    def for_year(self, year: int) -> tuple:
        """Records of ``year`` in ordinal order."""
        if year not in self.years:
            raise UnknownYearError(year, self.years)
        return tuple(sorted((r for r in self.records if r.year == year), key=lambda r: r.id))

    def names(self) -> dict:
        """Map industry slug to its display name (first occurrence wins)."""
        out = {}
        for r in self.records:
            out.setdefault(r.id.slug, r.name)
        return out

    def __len__(self):
        return len(self.records)


# -- numerals -----------------------------------------------------------------


def parse_numeral(text: str, decimal: str = "auto") -> float:
    """Parse a decimal numeral written with either a point or a comma.

    Numerals with more than one comma/point are rejected, which rules out
    thousands separators. ``decimal`` selects which mark is allowed.
    """
    if decimal not in DECIMAL_POLICIES:
        raise ValueError(f"unknown decimal policy {decimal!r}")
    s = text.strip()
    if not _NUMERAL_RE.match(s) or s.count(",") + s.count(".") > 1:
        raise ValueError(f"not a numeral: {text!r}")
    if decimal == "comma" and "." in s:
        raise ValueError(f"point decimal mark in {text!r} under comma policy")
    if decimal == "point" and "," in s:
        raise ValueError(f"comma decimal mark in {text!r} under point policy")
    return float(s.replace(",", "."))


def format_numeral(value: float, decimal: str = "point") -> str:
    """Shortest text that parses back to exactly ``value``."""
    if float(value).is_integer() and abs(value) < 1e15:
        text = str(int(value))
    else:
        text = repr(float(value))
    if decimal == "comma":
        text = text.replace(".", ",")
    return text


# -- parsing ------------------------------------------------------------------


def _sniff_delimiter(header_line: str) -> str:
    counts = [(header_line.count(d), -i, d) for i, d in enumerate(_DELIMITERS)]
    best = max(counts)
    return best[2] if best[0] > 0 else ","


def _check_record(rec: IndustryRecord) -> list:
    slug = rec.id.slug
    out = []
    if rec.id.ordinal < 1:
        out.append(Violation("ordinal-positive", slug, rec.year, f"ordinal {rec.id.ordinal} < 1"))
    if not _SLUG_RE.match(slug):
        out.append(Violation("slug-format", slug, rec.year, f"invalid slug {slug!r}"))
    if not rec.gva > 0:
        out.append(Violation("gva-positive", slug, rec.year, f"gva {rec.gva} is not > 0"))
    if not rec.obp > 0:
        out.append(Violation("obp-positive", slug, rec.year, f"obp {rec.obp} is not > 0"))
    if rec.gva > rec.obp:
        out.append(Violation("gva-le-obp", slug, rec.year, f"gva {rec.gva} exceeds obp {rec.obp}"))
    return out


def parse_accounts_csv(
    data: Union[bytes, str],
    delimiter: Optional[str] = None,
    decimal: str = "auto",
    default_year: Optional[int] = None,
    strict: bool = True,
) -> AccountsPanel:
    """Parse delimited text into an :class:`AccountsPanel`.

    The header must name ``industry``, ``gva`` and ``obp`` columns, plus
    ``year`` unless ``default_year`` is given; ``name`` and ``ordinal`` are
    optional. Header names are matched case-insensitively after trimming.
    The delimiter is sniffed from the header line unless given.

    Without an ordinal column, industries are numbered 1, 2, ... in order of
    first appearance, so in a single-year file the i-th data row gets ordinal i.

    With ``strict=True`` any record-level violation (non-positive values,
    ``gva > obp``, duplicate industry-year) raises :class:`AccountsParseError`
    naming the row. With ``strict=False`` such rows are kept and left for
    :func:`validate_panel` to report; malformed numerals always raise.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise AccountsParseError(f"input is not UTF-8: {exc}") from None
    else:
        text = data.lstrip("\ufeff")

    header_line = next((ln for ln in text.split("\n") if ln.strip()), None)
    if header_line is None:
        raise AccountsParseError("empty input: no header row")
    if delimiter is None:
        delimiter = _sniff_delimiter(header_line)

    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    raw_header = next(row for row in reader if any(c.strip() for c in row))
    columns = {}
    for idx, name in enumerate(raw_header):
        key = _COLUMN_ALIASES.get(name.strip().lower())
        if key is None:
            continue
        if key in columns:
            raise AccountsParseError(f"duplicate header column {name.strip()!r}", row=0)
        columns[key] = idx
    required = list(_REQUIRED_COLUMNS)
    if default_year is None:
        required.append("year")
    missing = [c for c in required if c not in columns]
    if missing:
        raise AccountsParseError(f"header is missing column(s): {', '.join(missing)}", row=0)

    ordinals = {}
    seen = {}
    records = []
    row_no = 0
    for cells in reader:
        if not any(c.strip() for c in cells):
            continue
        row_no += 1

        def cell(key):
            idx = columns[key]
            if idx >= len(cells):
                raise AccountsParseError("missing cell", row=row_no, column=raw_header[idx].strip())
            return cells[idx].strip()

        label = cell("industry")
        slug = slugify(label)
        if not slug:
            raise AccountsParseError(f"industry {label!r} has no usable identifier", row=row_no, column="industry")
        name = cell("name") if "name" in columns else label

        if "year" in columns and cell("year"):
            try:
                year = int(cell("year"))
            except ValueError:
                raise AccountsParseError(f"bad year {cell('year')!r}", row=row_no, column="year") from None
        elif default_year is not None:
            year = int(default_year)
        else:
            raise AccountsParseError("year is empty and no default year given", row=row_no, column="year")

        values = {}
        for key in ("gva", "obp"):
            try:
                values[key] = parse_numeral(cell(key), decimal)
            except ValueError as exc:
                raise AccountsParseError(str(exc), row=row_no, column=key) from None

        if "ordinal" in columns:
            try:
                ordinal = int(cell("ordinal"))
            except ValueError:
                raise AccountsParseError(f"bad ordinal {cell('ordinal')!r}", row=row_no, column="ordinal") from None
            if ordinals.setdefault(slug, ordinal) != ordinal and strict:
                raise AccountsParseError(
                    f"industry {slug!r} has ordinals {ordinals[slug]} and {ordinal}", row=row_no, column="ordinal"
                )
        else:
            ordinal = ordinals.setdefault(slug, len(ordinals) + 1)

        rec = IndustryRecord(IndustryId(ordinal, slug), name, year, values["gva"], values["obp"])
        if strict:
            problems = _check_record(rec)
            if problems:
                raise AccountsParseError(problems[0].message + f" ({problems[0].rule})", row=row_no)
            if (slug, year) in seen:
                raise AccountsParseError(
                    f"duplicate record for {slug!r} in {year} (first at row {seen[(slug, year)]})", row=row_no
                )
        seen.setdefault((slug, year), row_no)
        records.append(rec)

    if not records:
        raise AccountsParseError("no data rows")
    panel = AccountsPanel(tuple(records))
    if strict:
        by_ordinal = {}
        for ind in panel.industries:
            if ind.ordinal in by_ordinal:
                raise AccountsParseError(
                    f"ordinal {ind.ordinal} used by both {by_ordinal[ind.ordinal]!r} and {ind.slug!r}"
                )
            by_ordinal[ind.ordinal] = ind.slug
    return panel


def read_accounts_csv(path: Union[str, Path], **options) -> AccountsPanel:
    return parse_accounts_csv(Path(path).read_bytes(), **options)


def load_panel(source: str, **options) -> AccountsPanel:
    """Resolve ``builtin:table1`` or a filesystem path to a panel."""
    if source == BUILTIN_TABLE1:
        return reference_table1()
    return read_accounts_csv(source, **options)


def panel_to_csv(panel: AccountsPanel, delimiter: str = ",", decimal: str = "point") -> str:
    if decimal == "comma" and delimiter == ",":
        raise ValueError("comma decimal mark needs a delimiter other than ','")
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["ordinal", "industry", "name", "year", "gva", "obp"])
    for r in panel.records:
        writer.writerow(
            [r.id.ordinal, r.id.slug, r.name, r.year, format_numeral(r.gva, decimal), format_numeral(r.obp, decimal)]
        )
    return buf.getvalue()


# -- validation ---------------------------------------------------------------


def validate_panel(panel: AccountsPanel) -> list:
    """Return every invariant violation in ``panel``; empty means valid."""
    out = []
    if not panel.records:
        out.append(Violation("non-empty", None, None, "panel has no records"))
        return out
    seen = set()
    slug_of = {}
    ordinal_of = {}
    for rec in panel.records:
        out.extend(_check_record(rec))
        key = (rec.id.slug, rec.year)
        if key in seen:
            out.append(Violation("unique-record", rec.id.slug, rec.year, "duplicate industry-year record"))
        seen.add(key)
        prev_slug = slug_of.setdefault(rec.id.ordinal, rec.id.slug)
        if prev_slug != rec.id.slug:
            out.append(
                Violation("unique-ordinal", rec.id.slug, rec.year, f"ordinal {rec.id.ordinal} also used by {prev_slug!r}")
            )
        prev_ord = ordinal_of.setdefault(rec.id.slug, rec.id.ordinal)
        if prev_ord != rec.id.ordinal:
            out.append(
                Violation("stable-ordinal", rec.id.slug, rec.year, f"ordinals {prev_ord} and {rec.id.ordinal}")
            )
    return out


# -- Table 1 ------------------------------------------------------------------

# (name, GVA, OBP), bn RUB, in the published row order.
_TABLE1 = (
    ("Education", 3724, 4712),
    ("Real estate activities", 11711, 14831),
    ("Mining and quarrying", 15031, 23265),
    ("Financial and insurance activities", 5384, 7621),
    ("Public administration and defence; compulsory social security", 8404, 12343),
    ("Administrative and support service activities", 2214, 3323),
    ("Human health and social work activities", 3958, 6051),
    ("Arts, entertainment and recreation", 1066, 1727),
    ("Professional, scientific and technical activities", 5256, 9034),
    ("Wholesale and retail trade; repair of motor vehicles and motorcycles", 15270, 26688),
    ("Other services", 627, 1369),
    ("Agriculture, forestry and fishing", 4974, 9603),
    ("Information and communication", 3235, 6314),
    ("Accommodation and food service activities", 955, 2097),
    ("Transportation and storage", 7070, 16176),
    ("Construction", 5964, 14529),
    ("Water supply; sewerage, waste management and remediation activities", 657, 1999),
    ("Electricity, gas, steam and air conditioning supply", 2866, 9704),
    ("Manufacturing", 18926, 68530),
)


def reference_table1() -> AccountsPanel:
    """The 19-industry production account, tagged with year 2022."""
    return AccountsPanel(
        tuple(
            IndustryRecord(IndustryId(i, slugify(name)), name, TABLE1_YEAR, float(gva), float(obp))
            for i, (name, gva, obp) in enumerate(_TABLE1, start=1)
        )
    )


def panel_from_rows(rows: Iterable[Sequence], year: int) -> AccountsPanel:
    """Build a single-year panel from ``(name, gva, obp)`` tuples, numbered from 1."""
    return AccountsPanel(
        tuple(
            IndustryRecord(IndustryId(i, slugify(name)), name, year, float(gva), float(obp))
            for i, (name, gva, obp) in enumerate(rows, start=1)
        )
    )
