import json
import math
import os
import subprocess
import sys

import jsonschema
import pytest

from gvascope.accounts import read_accounts_csv, reference_table1
from gvascope.cli import main
from gvascope.report import parse_report, report_schema

REPORT_FILES = {"report.json", "report.md", "scree.svg", "kgva.svg", "kirr.svg"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def unwritable(tmp_path):
    # a path below a regular file cannot be created, even by root
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    return blocker / "out.csv"


def test_ingest_builtin(capsys):
    code, out, _ = run(capsys, "ingest", "builtin:table1")
    assert code == 0
    assert out.splitlines()[0] == "19 industries, 1 year"


def test_ingest_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "ingest", str(tmp_path / "missing.csv"))
    assert code == 1
    assert "cannot read" in err


def test_ingest_bad_row(capsys, tmp_path):
    path = tmp_path / "bad_row.csv"
    path.write_text("industry;year;gva;obp\nA;2022;1;2\nB;2022;10;5\n")
    code, out, _ = run(capsys, "ingest", str(path))
    assert code == 2
    assert "1 violation:" in out
    assert out.count("[gva-le-obp]") == 1


def test_ingest_unparseable(capsys, tmp_path):
    path = tmp_path / "junk.csv"
    path.write_text("industry;year;gva;obp\nA;2022;abc;2\n")
    code, _, err = run(capsys, "ingest", str(path))
    assert code == 1
    assert "row 1" in err and "gva" in err


def test_usage_error_is_operational(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze", "builtin:table1", "--log-base", "0.5"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_analyze_writes_reports(capsys, tmp_path):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "analyze", "builtin:table1", "--year", "2022", "--out", str(out_dir))
    assert code == 0
    assert {p.name for p in out_dir.iterdir()} == REPORT_FILES
    doc = json.loads((out_dir / "report.json").read_text())
    jsonschema.validate(doc, report_schema())
    flagged = [e for e in doc["irregularities"] if e["flagged"]]
    flagged.sort(key=lambda e: -e["gva_exp"])
    printed = [ln.split()[0] for ln in out.splitlines()[1:]]
    assert printed == [str(e["ordinal"]) for e in flagged]


def test_analyze_huge_tau(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "builtin:table1", "--tau", "1e9", "--out", str(tmp_path))
    assert code == 0
    assert "none flagged" in out


def test_analyze_natural_log(capsys, tmp_path):
    run(capsys, "analyze", "builtin:table1", "--out", str(tmp_path / "b10"), "--format", "json")
    code, _, _ = run(capsys, "analyze", "builtin:table1", "--log-base", "e", "--out", str(tmp_path / "be"), "--format", "json")
    assert code == 0
    r10 = parse_report((tmp_path / "b10" / "report.json").read_text())
    re_ = parse_report((tmp_path / "be" / "report.json").read_text())
    assert re_.config.log_base == math.e
    for a, b in zip(r10.irregularities, re_.irregularities):
        assert b.k_irr == pytest.approx(a.k_irr * math.log(10), rel=1e-9)


def test_analyze_format_subset(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", "builtin:table1", "--format", "md,svg", "--out", str(tmp_path))
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == REPORT_FILES - {"report.json"}


def test_analyze_env_fallback(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GVASCOPE_OUT", str(tmp_path / "env"))
    assert run(capsys, "analyze", "builtin:table1", "--format", "json")[0] == 0
    assert (tmp_path / "env" / "report.json").exists()


def test_analyze_unknown_year(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "builtin:table1", "--year", "1999", "--out", str(tmp_path))
    assert code == 1
    assert "unknown year" in err


def test_analyze_invalid_panel(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("industry;year;gva;obp\nA;2022;1;2\nB;2022;10;5\n")
    assert run(capsys, "analyze", str(path), "--out", str(tmp_path / "o"))[0] == 2


def test_analyze_raw_baseline_failure(capsys, tmp_path):
    path = tmp_path / "steep.csv"
    path.write_text("industry,year,gva,obp\nA,2020,1000,2000\nB,2020,10,20\nC,2020,9,20\nD,2020,1,2\n")
    code, _, err = run(capsys, "analyze", str(path), "--baseline-space", "raw", "--out", str(tmp_path / "o"))
    assert code == 1
    assert "non-positive" in err


def test_analyze_unwritable_out(capsys, tmp_path):
    assert run(capsys, "analyze", "builtin:table1", "--out", str(unwritable(tmp_path)))[0] == 1


def test_analyze_multi_year(capsys, tmp_path):
    lines = ["industry;year;gva;obp"]
    for year in (2019, 2020, 2021):
        for name, g in (("A", 100.0), ("B", 50.0), ("C", 25.0), ("D", 12.5)):
            if name == "B":
                g *= 1 + 0.3 * (year - 2019)
            lines.append(f"{name};{year};{str(g).replace('.', ',')};{g * 3:.0f}")
    path = tmp_path / "multi.csv"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "analyze", str(path), "--out", str(tmp_path / "o"))
    assert code == 0
    assert "(2021)" in out
    report = parse_report((tmp_path / "o" / "report.json").read_text())
    assert report.years == (2019, 2020, 2021)
    assert report.extremes[1].slug == "b"


def test_export_round_trip(capsys, tmp_path):
    path = tmp_path / "table1.csv"
    code, _, _ = run(capsys, "export", "-o", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 20
    assert read_accounts_csv(path) == reference_table1()
    assert run(capsys, "ingest", str(path))[0] == 0


def test_export_stdout(capsys):
    code, out, _ = run(capsys, "export")
    assert code == 0
    assert out.startswith("ordinal,industry,name,year,gva,obp\n1,education,Education,2022,3724,4712\n")


def test_export_unwritable(capsys, tmp_path):
    assert run(capsys, "export", "-o", str(unwritable(tmp_path)))[0] == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gvascope", "ingest", "builtin:table1"],
        capture_output=True,
        text=True,
        env={**os.environ, "PYTHONPATH": os.pathsep.join(sys.path)},
    )
    assert proc.returncode == 0
    assert "19 industries, 1 year" in proc.stdout
