"""Smoke acceptance: every report in a full `rwl all` output directory
names a series that plotkit renders without error."""

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from plotkit import PlotSpec, render
from plotkit.spec import KINDS

RWL = shutil.which("rwl")


@pytest.fixture(scope="module")
def all_output(tmp_path_factory):
    if RWL is None:
        pytest.skip("rwl CLI not installed")
    out = tmp_path_factory.mktemp("allout")
    proc = subprocess.run([RWL, "all", "--seed", "42", "--out", str(out),
                           "--quiet"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out


def test_every_report_series_renders(all_output, tmp_path):
    reports = sorted(all_output.glob("*/report.json"))
    assert len(reports) == 7
    seen_kinds = set()
    for report_path in reports:
        doc = json.loads(report_path.read_text())
        assert doc["series"] is not None
        assert (report_path.parent / doc["series"]).exists()
        spec = PlotSpec.from_report(
            report_path, tmp_path / f"{doc['experiment']}.png")
        render(spec)
        assert spec.output.exists() and spec.output.stat().st_size > 0
        seen_kinds.add(doc["plot_kind"])
    # the full suite exercises every figure kind
    assert seen_kinds == set(KINDS)


def test_cli_from_report(all_output, tmp_path):
    report = all_output / "conservation" / "report.json"
    out = tmp_path / "cons.png"
    proc = subprocess.run(
        ["rwl-plot", "--from-report", str(report), "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_cli_spec_file(all_output, tmp_path):
    doc = {"kind": "stationary",
           "csv": str(all_output / "stationary" / "stationary.csv"),
           "output": str(tmp_path / "stat.png")}
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(doc))
    proc = subprocess.run(["rwl-plot", "--spec", str(spec_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "stat.png").exists()
