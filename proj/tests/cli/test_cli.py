# Copyright 2026 The cardgauge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import subprocess
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
BIN = os.environ.get("CARDGAUGE_BIN", "cardgauge")


def run(*args, check=True):
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args}: exit {proc.returncode}\n{proc.stderr}")
    return proc


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    run("fetch", "--local", FIXTURES / "corpus", "--out", root, "--cutoff-bytes", 16384, "--batches", 4)
    return root


def test_fetch_local_writes_manifest(corpus):
    meta = json.loads((corpus / "manifest.meta.json").read_text())
    assert meta["record_count"] == 30
    assert meta["status_counts"]["fetched"] == 26
    assert len((corpus / "manifest.jsonl").read_text().splitlines()) == 30


def test_hist_matches_golden(corpus, tmp_path):
    out = tmp_path / "hf.tsv"
    run("hist", "--corpus", corpus, "--out", out)
    assert out.read_text() == (FIXTURES / "golden" / "hf.tsv").read_text()
    zd = tmp_path / "zd.tsv"
    run("hist", "--file", FIXTURES / "zd_template.md", "--out", zd)
    assert zd.read_text() == (FIXTURES / "golden" / "zd.tsv").read_text()


def test_tokens_and_toc(tmp_path):
    card = tmp_path / "card.md"
    card.write_text("# Model **Card**\nThe model uses data \\x41\\x42\\x43\n## Uses\n")
    assert run("tokens", card).stdout.split() == ["model", "card", "model", "uses", "data", "uses"]
    dot = run("toc", card, "--format", "dot").stdout
    assert dot.count("->") == 2
    tree = json.loads(run("toc", card, "--format", "json").stdout)
    assert tree["children"][0]["heading"] == "Model Card"


def test_toc_sim_worked_example():
    out = json.loads(
        run(
            "toc-sim",
            "--card", FIXTURES / "worked" / "hf_model_card.md",
            "--template", FIXTURES / "worked" / "zd_data_template.md",
            "--out", "json",
        ).stdout
    )
    assert out["nlss_matches"] == 5
    assert out["nld_matches"] == 2


def test_hist_sim_and_suggest():
    golden = FIXTURES / "golden"
    cmp = json.loads(run("hist-sim", "--left", golden / "zd.tsv", "--right", golden / "hf.tsv", "--out", "json").stdout)
    assert cmp["count_common_words"] == 36
    assert cmp["count_left_only_words"] == 64
    report = json.loads(run("suggest", "--zd", golden / "zd.tsv", "--hf", golden / "hf.tsv", "--format", "json").stdout)
    expected = json.loads((golden / "gap_report.json").read_text())
    for key in ("common", "left_only", "right_only_top", "right_only_count"):
        assert report[key] == expected[key]
    md = run("suggest", "--zd", golden / "zd.tsv", "--hf", golden / "hf.tsv", "--format", "markdown").stdout
    assert md.startswith("## Word comparison")


def test_cohort_and_correlate(corpus, tmp_path):
    cohort = tmp_path / "cohort.json"
    run("cohort", "--manifest", corpus, "--kind", "uniform", "--step", 2, "--out", cohort)
    data = json.loads(cohort.read_text())
    assert data["member_count"] == 15
    golden = FIXTURES / "golden"
    csv = run(
        "correlate", "--cohort", cohort, "--corpus", corpus, "--zd", golden / "zd.tsv", "--hf", golden / "hf.tsv",
        "--out", "csv",
    ).stdout
    lines = csv.strip().splitlines()
    assert lines[0].startswith("model_id,downloads,")
    assert len(lines) == 1 + data["documented_count"]


def test_score():
    out = json.loads(
        run(
            "score",
            "--card", FIXTURES / "worked" / "hf_model_card.md",
            "--zd-headings", FIXTURES / "worked" / "zd_data_template.md",
            "--zd-hist", FIXTURES / "golden" / "zd.tsv",
            "--format", "json",
        ).stdout
    )
    assert out["nlss_matches"] == 5
    assert out["nld_matches"] == 2
    assert 0 <= out["composite"] <= 100


def test_pipeline_with_config(tmp_path):
    out_dir = tmp_path / "out"
    args = ["--config", FIXTURES / "pipeline.yaml", "pipeline", "--stages", "all", "--output-dir", out_dir,
            "--corpus-dir", tmp_path / "corpus"]
    first = run(*args)
    assert (out_dir / "gap_report.json").is_file()
    before = {p: p.read_bytes() for p in out_dir.rglob("*") if p.is_file()}
    second = run(*args)
    assert "up to date" in second.stderr
    assert {p: p.read_bytes() for p in out_dir.rglob("*") if p.is_file()} == before
    assert "ran" not in second.stderr


def test_errors_exit_nonzero(tmp_path):
    proc = run("tokens", tmp_path / "missing.md", check=False)
    assert proc.returncode != 0
    assert "error" in proc.stderr
    proc = run("pipeline", "--stages", "hist", "--output-dir", tmp_path / "o", "--corpus-dir", tmp_path / "c",
               "--zd-template", FIXTURES / "zd_template.md", check=False)
    assert proc.returncode != 0
    assert "ingest" in proc.stderr
    proc = run("hist-sim", "--left", "a", "--right", "b", "--out", "xml", check=False)
    assert proc.returncode != 0
