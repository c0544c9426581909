from __future__ import annotations

import json
import shutil

import pytest

from mvcolor.cli import main

from conftest import CASES


def run(args):
    return main([str(a) for a in args])


@pytest.fixture
def workdir(tmp_path):
    spec = tmp_path / "case.json"
    shutil.copy(CASES / "partial_overlap.json", spec)
    return tmp_path, spec


def generate(tmp_path, spec, *extra, seed=11, pop=8, gens=3):
    out = tmp_path / "result.json"
    code = run(
        [
            "generate",
            "--spec", spec,
            "--out", out,
            "--params", tmp_path / "params.json",
            "--seed", seed,
            "--pop-size", pop,
            "--generations", gens,
            "--n-best", min(8, pop),
            *extra,
        ]
    )
    return code, out


class TestGenerate:
    def test_smoke_two_view_spec(self, workdir, capsys):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec)
        assert code == 0
        doc = json.loads(out.read_text())
        assert len(doc["members"]) >= 1
        member = doc["members"][0]
        assert set(member["assignment"]["views"]) == {"results-bar", "seats-map"}
        assert "c_sv" in member["costs"] and "scores" in member

    def test_params_file_created_and_updated(self, workdir):
        tmp_path, spec = workdir
        generate(tmp_path, spec)
        params = json.loads((tmp_path / "params.json").read_text())
        assert "case" in params
        assert "sv_diff" in params["case"]

    def test_hierarchy_cycle_exits_3(self, tmp_path):
        def view(vid, x):
            return {
                "id": vid,
                "bbox": [x, 0, 100, 100],
                "color_field": f"f-{vid}",
                "field_kind": "categorical",
                "domain": [f"{vid}-key"],
            }

        doc = {
            "canvas": {"width": 400, "height": 100},
            "views": [view("a", 0), view("b", 150), view("c", 300)],
            "relations": [
                {"a": "a", "b": "b", "kind": "hierarchy", "parent": "a"},
                {"a": "b", "b": "c", "kind": "hierarchy", "parent": "b"},
                {"a": "c", "b": "a", "kind": "hierarchy", "parent": "c"},
            ],
        }
        spec = tmp_path / "cyclic.json"
        spec.write_text(json.dumps(doc))
        code = run(
            ["generate", "--spec", spec, "--out", tmp_path / "r.json",
             "--params", tmp_path / "p.json"]
        )
        assert code == 3

    def test_unparseable_spec_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = run(
            ["generate", "--spec", bad, "--out", tmp_path / "r.json",
             "--params", tmp_path / "p.json"]
        )
        assert code == 2

    def test_patched_chart_documents(self, workdir):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec)
        assert code == 0
        patched = json.loads((tmp_path / "result_charts" / "results-bar.json").read_text())
        scale = patched["encoding"]["color"]["scale"]
        assert scale["domain"] == ["unity", "horizon", "meadow", "harbor", "summit"]
        assert len(scale["range"]) == 5
        assert all(c.startswith("#") for c in scale["range"])

    def test_custom_scale_path(self, workdir):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec, "--scale-path", "layers.0.colorScale")
        patched = json.loads((tmp_path / "result_charts" / "results-bar.json").read_text())
        assert "colorScale" in patched["layers"]["0"]

    def test_gallery_size_caps_members(self, workdir):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec, "--gallery-size", 1, pop=10, gens=4)
        doc = json.loads(out.read_text())
        assert len(doc["members"]) == 1


class TestDeterminism:
    def test_same_seed_byte_identical(self, tmp_path):
        spec = tmp_path / "case.json"
        shutil.copy(CASES / "partial_overlap.json", spec)
        outs = []
        for sub in ("a", "b"):
            d = tmp_path / sub
            d.mkdir()
            code = run(
                ["generate", "--spec", spec, "--out", d / "r.json",
                 "--params", d / "params.json", "--seed", 77,
                 "--pop-size", 10, "--generations", 4, "--n-best", 6]
            )
            assert code == 0
            outs.append((d / "r.json").read_bytes())
        assert outs[0] == outs[1]


class TestEvaluateCompare:
    def test_evaluate_generate_output_round_trip(self, workdir, capsys):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec)
        rep_json = tmp_path / "report.json"
        code = run(["evaluate", "--spec", spec, out, "--json", rep_json])
        assert code == 0
        text = capsys.readouterr().out
        assert "overall WCD" in text
        rep = json.loads(rep_json.read_text())
        doc = json.loads(out.read_text())
        # the embedded scores must be reproduced exactly by re-evaluation
        emb = doc["members"][0]["scores"]
        got = rep["scores"][0]
        assert got["overall_wcd"] == emb["overall_wcd"]
        assert got["prs"] == emb["prs"]
        assert got["per_view_wcd"] == emb["per_view_wcd"]

    def test_evaluate_schema_mismatch_exits_5(self, workdir):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec)
        doc = json.loads(out.read_text())
        broken = doc["members"][0]["assignment"]
        del broken["views"]["seats-map"]
        bad = tmp_path / "bad_assignment.json"
        bad.write_text(json.dumps(broken))
        assert run(["evaluate", "--spec", spec, bad]) == 5

    def test_compare_identical_zero_deltas(self, workdir, capsys):
        tmp_path, spec = workdir
        code, out = generate(tmp_path, spec)
        rep_json = tmp_path / "cmp.json"
        code = run(["compare", "--spec", spec, out, out, "--json", rep_json])
        assert code == 0
        rep = json.loads(rep_json.read_text())
        assert rep["deltas"]["overall_wcd"] == 0.0
        # one shared colormap: the parallel-relationship score is n/a here
        assert rep["deltas"]["prs"] is None
        assert rep["scores"][0]["prs"] is None

    def test_compare_optimized_beats_naive_baseline(self, tmp_path, palettes):
        from mvcolor.evaluator import assignment_to_doc
        from mvcolor.graph import build_graph, load_mvspec
        from mvcolor.optimizer import naive_assignment

        spec_path = tmp_path / "case.json"
        shutil.copy(CASES / "pet_hierarchy.json", spec_path)
        g = build_graph(load_mvspec(spec_path))
        base_doc = assignment_to_doc(naive_assignment(g, palettes), g)
        base = tmp_path / "baseline.json"
        base.write_text(json.dumps(base_doc))

        code, out = generate(tmp_path, spec_path, seed=5, pop=16, gens=10)
        assert code == 0
        rep_json = tmp_path / "cmp.json"
        assert run(["compare", "--spec", spec_path, base, out, "--json", rep_json]) == 0
        rep = json.loads(rep_json.read_text())
        # baseline children copy their parent color, so its worst case is 0
        assert rep["deltas"]["overall_wcd"] > 0.0
        assert rep["deltas"]["mean_hqs"] > 0.0
