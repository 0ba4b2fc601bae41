"""Analysis reports: assembly from a panel, JSON and Markdown emission.

The JSON layout is versioned through its ``schema`` field and described by
``report_schema.json`` shipped with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .accounts import AccountsPanel, IndustryId, format_numeral
from .baseline import (
    RegressionModel,
    ScreeOrdering,
    ScreeRank,
    baseline_predictions,
    fit_equilibrium_baseline,
    fit_share_baseline,
    scree_order,
)
from .indicators import ShareEntry, share_spectrum
from .irregularity import DetectionConfig, IrregularityEntry, growth_extremes, score_ordering
from .svg import render_irregularity_svg, render_scree_svg, render_share_svg

SCHEMA_ID = "gvascope.report/v1"
NONE_FLAGGED = "none flagged"

__all__ = [
    "AnalysisReport",
    "analyze_panel",
    "emit_report",
    "parse_report",
    "report_schema",
    "render_irregularity_svg",
    "render_scree_svg",
    "render_share_svg",
]


@dataclass(frozen=True)
class AnalysisReport:
    dataset: str
    years: tuple
    year: int
    config: DetectionConfig
    industry_names: dict
    share_spectrum: tuple
    share_model: Optional[RegressionModel]
    scree: ScreeOrdering
    scree_model: RegressionModel
    scree_baseline: tuple
    irregularities: tuple
    extremes: Optional[tuple] = None

    def flagged(self, year: Optional[int] = None) -> list:
        year = self.year if year is None else year
        return [e for e in self.irregularities if e.flagged and e.year == year]

    def name(self, ident: IndustryId) -> str:
        return self.industry_names.get(ident.slug, ident.slug)

    # -- dict form --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "metadata": {
                "dataset": self.dataset,
                "years": list(self.years),
                "year": self.year,
                "config": self.config.to_dict(),
            },
            "industries": dict(self.industry_names),
            "share_spectrum": {
                "entries": [
                    {"ordinal": e.id.ordinal, "industry": e.id.slug, "year": e.year, "k_gva": e.k_gva}
                    for e in self.share_spectrum
                ],
                "baseline": self.share_model.to_dict() if self.share_model else None,
            },
            "scree": {
                "baseline": self.scree_model.to_dict(),
                "ranked": [
                    {"rank": r.rank, "ordinal": r.id.ordinal, "industry": r.id.slug, "gva": r.value, "gva_reg": reg}
                    for r, reg in zip(self.scree.ranked, self.scree_baseline)
                ],
            },
            "irregularities": [
                {
                    "ordinal": e.id.ordinal,
                    "industry": e.id.slug,
                    "year": e.year,
                    "gva_exp": e.gva_exp,
                    "gva_reg": e.gva_reg,
                    "k_irr": e.k_irr,
                    "flagged": e.flagged,
                }
                for e in self.irregularities
            ],
            "extremes": None
            if self.extremes is None
            else {
                "min": {"ordinal": self.extremes[0].ordinal, "industry": self.extremes[0].slug},
                "max": {"ordinal": self.extremes[1].ordinal, "industry": self.extremes[1].slug},
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        if d.get("schema") != SCHEMA_ID:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        meta = d["metadata"]

        def ident(item):
            return IndustryId(int(item["ordinal"]), item["industry"])

        share = d["share_spectrum"]
        scree = d["scree"]
        extremes = d.get("extremes")
        return cls(
            dataset=meta["dataset"],
            years=tuple(int(y) for y in meta["years"]),
            year=int(meta["year"]),
            config=DetectionConfig.from_dict(meta["config"]),
            industry_names=dict(d["industries"]),
            share_spectrum=tuple(ShareEntry(ident(e), int(e["year"]), float(e["k_gva"])) for e in share["entries"]),
            share_model=RegressionModel.from_dict(share["baseline"]) if share.get("baseline") else None,
            scree=ScreeOrdering(tuple(ScreeRank(int(r["rank"]), ident(r), float(r["gva"])) for r in scree["ranked"])),
            scree_model=RegressionModel.from_dict(scree["baseline"]),
            scree_baseline=tuple(float(r["gva_reg"]) for r in scree["ranked"]),
            irregularities=tuple(
                IrregularityEntry(
                    ident(e), int(e["year"]), float(e["gva_exp"]), float(e["gva_reg"]), float(e["k_irr"]), bool(e["flagged"])
                )
                for e in d["irregularities"]
            ),
            extremes=None if extremes is None else (ident(extremes["min"]), ident(extremes["max"])),
        )


def analyze_panel(
    panel: AccountsPanel,
    year: Optional[int] = None,
    config: DetectionConfig = DetectionConfig(),
    dataset: str = "",
) -> AnalysisReport:
    """Run shares, scree baseline and irregularity scoring over ``panel``.

    ``year`` defaults to the latest year. Every year of the panel is scored;
    growth extremes are filled in when there are at least two years.
    """
    if year is None:
        year = panel.years[-1]
    shares = share_spectrum(panel, year)
    share_model = fit_share_baseline(shares) if len(shares) >= 2 else None

    irregularities = []
    ordering = model = None
    for y in panel.years:
        o = scree_order(panel, y)
        m = fit_equilibrium_baseline(o, config.baseline_space)
        irregularities.extend(score_ordering(o, m, y, config))
        if y == year:
            ordering, model = o, m

    extremes = growth_extremes(irregularities) if len(panel.years) >= 2 else None
    return AnalysisReport(
        dataset=dataset,
        years=tuple(panel.years),
        year=year,
        config=config,
        industry_names=panel.names(),
        share_spectrum=tuple(shares),
        share_model=share_model,
        scree=ordering,
        scree_model=model,
        scree_baseline=tuple(baseline_predictions(ordering, model)),
        irregularities=tuple(irregularities),
        extremes=extremes,
    )


# -- emission -------------------------------------------------------------


def _ratio(v: float) -> str:
    return f"{v:.4f}"


def _money(v: float) -> str:
    return f"{v:.0f}"


def _table(header: list, rows: list) -> list:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join(" --- " for _ in header) + "|"]
    out.extend("| " + " | ".join(str(c).replace("|", "\\|") for c in row) + " |" for row in rows)
    return out


def _markdown(report: AnalysisReport) -> str:
    cfg = report.config
    lines = ["# GVA spectrum report", "", "## Metadata", ""]
    lines += _table(
        ["Field", "Value"],
        [
            ["dataset", report.dataset or "-"],
            ["years", ", ".join(str(y) for y in report.years)],
            ["year", report.year],
            ["log_base", format_numeral(cfg.log_base)],
            ["tau", format_numeral(cfg.tau)],
            ["baseline_space", cfg.baseline_space],
            ["symmetric", str(cfg.symmetric).lower()],
        ],
    )

    lines += ["", "## Share spectrum", ""]
    lines += _table(
        ["N", "Industry", "Year", "K_GVA"],
        [[e.id.ordinal, report.name(e.id), e.year, _ratio(e.k_gva)] for e in report.share_spectrum],
    )

    m = report.scree_model
    lines += ["", "## Scree ordering", ""]
    lines += _table(
        ["Rank", "Industry", "GVA", "GVA_reg"],
        [[r.rank, report.name(r.id), _money(r.value), _money(reg)] for r, reg in zip(report.scree.ranked, report.scree_baseline)],
    )
    lines += ["", f"Baseline ({m.space} space): slope {m.slope:.6g}, intercept {m.intercept:.6g}, R^2 {_ratio(m.r_squared)}, n {m.n}"]

    lines += ["", "## Irregularity", ""]
    if report.irregularities:
        lines += _table(
            ["M", "Industry", "Year", "GVA_exp", "GVA_reg", "K_irr", "Flagged"],
            [
                [i, report.name(e.id), e.year, _money(e.gva_exp), _money(e.gva_reg), _ratio(e.k_irr), "yes" if e.flagged else "no"]
                for i, e in enumerate(report.irregularities, start=1)
            ],
        )
        lines.append("")
    flagged = [e for e in report.irregularities if e.flagged]
    if flagged:
        lines.append("Flagged: " + "; ".join(f"{report.name(e.id)} ({e.year}, {_ratio(e.k_irr)})" for e in flagged))
    else:
        lines.append(f"Flagged: {NONE_FLAGGED}")

    if report.extremes is not None:
        lo, hi = report.extremes
        lines += ["", "## Growth extremes", ""]
        lines += _table(["Extreme", "N", "Industry"], [["min", lo.ordinal, report.name(lo)], ["max", hi.ordinal, report.name(hi)]])
    return "\n".join(lines) + "\n"


def emit_report(report: AnalysisReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if format in ("markdown", "md"):
        return _markdown(report)
    raise ValueError(f"unknown report format {format!r}")


def parse_report(text: str) -> AnalysisReport:
    return AnalysisReport.from_dict(json.loads(text))


def report_schema() -> dict:
    return json.loads(resources.files("gvascope").joinpath("report_schema.json").read_text(encoding="utf-8"))
