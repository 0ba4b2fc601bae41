import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gvascope.accounts import IndustryId, panel_from_rows
from gvascope.baseline import ScreeOrdering, ScreeRank, fit_equilibrium_baseline, fit_ols, scree_order
from gvascope.indicators import share_spectrum
from gvascope.irregularity import DetectionConfig, IrregularityEntry
from gvascope.report import (
    NONE_FLAGGED,
    AnalysisReport,
    analyze_panel,
    emit_report,
    parse_report,
    render_irregularity_svg,
    render_scree_svg,
    render_share_svg,
    report_schema,
)

SVG = "{http://www.w3.org/2000/svg}"
TABLE2 = [0.15, 0.21, 0.20, 0.25, 0.28, 0.31, 0.28]


def _parse_svg(text):
    root = ET.fromstring(text.encode("utf-8"))
    assert root.tag == f"{SVG}svg"
    assert root.get("viewBox") == "0 0 800 500"
    return root


def _classed(root, cls):
    return [el for el in root.iter() if cls in (el.get("class") or "").split()]


def _entries(values, flags=None):
    flags = flags or [v > 0.1 for v in values]
    return [
        IrregularityEntry(IndustryId(i, f"m{i}"), 2022, 10**v, 1.0, v, f)
        for i, (v, f) in enumerate(zip(values, flags), start=1)
    ]


# -- svg ----------------------------------------------------------------------


def test_scree_svg_table1(table1):
    ordering = scree_order(table1, 2022)
    model = fit_equilibrium_baseline(ordering, "log")
    for log_scale in (False, True):
        root = _parse_svg(render_scree_svg(ordering, model, log_scale=log_scale))
        assert len(_classed(root, "data-point")) == 19
        (baseline,) = _classed(root, "baseline")
        assert baseline.get("stroke-dasharray")
        labels = [el.text for el in _classed(root, "axis-label")]
        assert labels == ["Rank", "GVA"]


def test_scree_svg_single_point():
    ordering = ScreeOrdering((ScreeRank(1, IndustryId(1, "a"), 5.0),))
    model = fit_ols([1, 2], [5.0, 3.0])
    root = _parse_svg(render_scree_svg(ordering, model))
    assert len(_classed(root, "data-point")) == 1


def test_scree_svg_deterministic_and_empty(table1):
    ordering = scree_order(table1, 2022)
    model = fit_equilibrium_baseline(ordering, "log")
    assert render_scree_svg(ordering, model) == render_scree_svg(ordering, model)
    with pytest.raises(ValueError):
        render_scree_svg(ScreeOrdering(()), model)


def test_irregularity_svg_table2_values():
    text = render_irregularity_svg(_entries(TABLE2))
    root = _parse_svg(text)
    marks = _classed(root, "mark")
    assert [float(m.get("data-value")) for m in marks] == TABLE2
    assert [m.get("data-value") for m in marks] == [repr(v) for v in TABLE2]
    (zero,) = _classed(root, "zero-line")
    zero_y = float(zero.get("y1"))
    assert all(float(m.get("cy")) < zero_y for m in marks)  # above the zero line
    assert len(_classed(root, "threshold")) == 1
    assert [el.text for el in _classed(root, "value-label")] == [f"{v:.4f}" for v in TABLE2]


def test_irregularity_svg_zero_marks_on_zero_line():
    root = _parse_svg(render_irregularity_svg(_entries([0.0, 0.0, 0.0])))
    zero_y = _classed(root, "zero-line")[0].get("y1")
    assert all(m.get("cy") == zero_y for m in _classed(root, "mark"))


def test_irregularity_svg_flag_class():
    root = _parse_svg(render_irregularity_svg(_entries([0.3, 0.01], [True, False])))
    assert len(_classed(root, "mark")) == 2
    assert len(_classed(root, "flagged")) == 1


def test_irregularity_svg_symmetric_and_empty():
    root = _parse_svg(render_irregularity_svg(_entries([-0.3, 0.2]), tau=0.1, symmetric=True))
    assert len(_classed(root, "threshold")) == 2
    with pytest.raises(ValueError):
        render_irregularity_svg([])


def test_share_svg(table1):
    entries = share_spectrum(table1, 2022)
    root = _parse_svg(render_share_svg(entries, fit_ols([e.id.ordinal for e in entries], [e.k_gva for e in entries])))
    assert len(_classed(root, "data-point")) == 19
    assert len(_classed(root, "baseline")) == 1
    assert len(_classed(_parse_svg(render_share_svg(entries)), "baseline")) == 0


def test_svg_escapes_names():
    ordering = ScreeOrdering((ScreeRank(1, IndustryId(1, "a"), 2.0), ScreeRank(2, IndustryId(2, "b"), 1.0)))
    text = render_scree_svg(ordering, fit_ols([1, 2], [2.0, 1.0]), title="R&D <intensity>")
    _parse_svg(text)
    assert "R&amp;D &lt;intensity&gt;" in text


# -- reports ------------------------------------------------------------------


@pytest.fixture(scope="module")
def table1_report(table1):
    return analyze_panel(table1, 2022, DetectionConfig(), dataset="builtin:table1")


def test_report_contents(table1_report):
    r = table1_report
    assert r.years == (2022,) and r.year == 2022
    assert len(r.share_spectrum) == 19
    assert len(r.scree) == 19 == len(r.scree_baseline)
    assert len(r.irregularities) == 19
    assert r.extremes is None
    assert r.config == DetectionConfig()


def test_markdown_share_table_rows(table1_report):
    md = emit_report(table1_report, "markdown")
    section = md.split("## Share spectrum")[1].split("\n## ")[0]
    rows = [ln for ln in section.splitlines() if ln.startswith("| ") and not ln.startswith(("| N ", "| ---"))]
    assert len(rows) == 19
    assert rows[0] == "| 1 | Education | 2022 | 0.7903 |"
    assert rows[-1] == "| 19 | Manufacturing | 2022 | 0.2762 |"
    assert "| 1 | Manufacturing | 18926 |" in md


def test_markdown_none_flagged(table1_report):
    empty = AnalysisReport(**{**table1_report.__dict__, "irregularities": ()})
    md = emit_report(empty, "markdown")
    assert "## Irregularity" in md
    assert NONE_FLAGGED in md.split("## Irregularity")[1]


def test_markdown_table2_values():
    entries = tuple(_entries(TABLE2))
    rows = [(f"Industry {i}", 10.0 * 2 ** (7 - i), 100.0) for i in range(1, 8)]
    base = analyze_panel(panel_from_rows(rows, 2022), 2022)
    md = emit_report(AnalysisReport(**{**base.__dict__, "irregularities": entries}), "markdown")
    section = md.split("## Irregularity")[1]
    cells = [ln.split(" | ")[5] for ln in section.splitlines() if ln.startswith("| ") and "K_irr" not in ln and "---" not in ln]
    assert [float(c) for c in cells] == TABLE2


def test_json_round_trip(table1_report):
    text = emit_report(table1_report, "json")
    again = parse_report(text)
    assert again == table1_report
    assert emit_report(again, "json") == text
    jsonschema.validate(json.loads(text), report_schema())


def test_json_multi_year_round_trip():
    rows = [
        (name, year, g * (1 + 0.1 * (year - 2019) * (name == "b")), 10 * g)
        for year in (2019, 2020, 2021)
        for name, g in (("a", 100.0), ("b", 50.0), ("c", 20.0), ("d", 9.0))
    ]
    from gvascope.accounts import AccountsPanel, IndustryRecord, slugify

    order = {"a": 1, "b": 2, "c": 3, "d": 4}
    panel = AccountsPanel(
        tuple(IndustryRecord(IndustryId(order[n], slugify(n)), n, y, g, o) for n, y, g, o in rows)
    )
    report = analyze_panel(panel, config=DetectionConfig(log_base=2.0, tau=0.05, symmetric=True))
    assert report.year == 2021
    assert report.extremes is not None and report.extremes[1].slug == "b"
    text = emit_report(report, "json")
    jsonschema.validate(json.loads(text), report_schema())
    assert parse_report(text) == report
    assert "## Growth extremes" in emit_report(report, "markdown")


def test_parse_rejects_foreign_schema():
    with pytest.raises(ValueError):
        parse_report(json.dumps({"schema": "other/v9"}))


def test_unknown_format(table1_report):
    with pytest.raises(ValueError):
        emit_report(table1_report, "xml")


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(1.0, 1e6), min_size=2, max_size=10), st.floats(0, 1), st.sampled_from([2.0, 10.0, 2.718281828459045]))
def test_json_round_trip_property(gvas, tau, log_base):
    panel = panel_from_rows([(f"ind {i}", g, 3 * g) for i, g in enumerate(gvas)], 2020)
    report = analyze_panel(panel, config=DetectionConfig(log_base=log_base, tau=tau), dataset="prop")
    text = emit_report(report, "json")
    assert parse_report(text) == report
    assert emit_report(parse_report(text), "json") == text
