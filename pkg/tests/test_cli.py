import json
from pathlib import Path

import pytest

from dulac.cli import main, parse_system
from dulac.errors import SystemFileError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(args):
    return main([str(a) for a in args])


def load(path):
    return json.loads(Path(path).read_text())


HALF_DOUBLE_DOC = {
    "kind": "map", "n": 2, "scalars": "rational",
    "eigen": {"form": "mult-rational", "values": [[1, 2], [2, 1]]},
    "terms": [], "degree_D": 12, "order_N": 8,
}


class TestParse:
    def test_round_trip(self, tmp_path):
        path = write(tmp_path, "sys.json", HALF_DOUBLE_DOC)
        sf = parse_system(path)
        assert sf.kind == "map" and sf.n == 2
        assert sf.eigen.kind == "mult-rational"
        assert sf.lattice_bound == 12 and sf.order == 8

    def test_decimal_rejected_with_hint(self, tmp_path):
        doc = dict(HALF_DOUBLE_DOC)
        doc["terms"] = [{"component": 1, "exponent": [0, 2], "coeff": 0.5}]
        path = write(tmp_path, "bad.json", doc)
        with pytest.raises(SystemFileError, match=r"\[1, 2\]"):
            parse_system(path)

    def test_linear_term_rejected(self, tmp_path):
        doc = dict(HALF_DOUBLE_DOC)
        doc["terms"] = [{"component": 1, "exponent": [1, 0], "coeff": [1, 1]}]
        path = write(tmp_path, "bad.json", doc)
        with pytest.raises(SystemFileError, match="degree"):
            parse_system(path)

    def test_dimension_mismatch(self, tmp_path):
        doc = dict(HALF_DOUBLE_DOC)
        doc["eigen"] = {"form": "mult-rational", "values": [[1, 2]]}
        path = write(tmp_path, "bad.json", doc)
        with pytest.raises(SystemFileError, match="entries"):
            parse_system(path)

    def test_malformed_json_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "map",')
        with pytest.raises(SystemFileError, match="line"):
            parse_system(str(path))

    def test_zero_multiplier_rejected(self, tmp_path):
        doc = dict(HALF_DOUBLE_DOC)
        doc["eigen"] = {"form": "mult-rational", "values": [[0, 1], [2, 1]]}
        path = write(tmp_path, "bad.json", doc)
        with pytest.raises(SystemFileError, match="nonzero"):
            parse_system(path)

    def test_gaussian_in_rational_file_rejected(self, tmp_path):
        doc = dict(HALF_DOUBLE_DOC)
        doc["terms"] = [{"component": 1, "exponent": [0, 2], "coeff": [1, 1, 1, 1]}]
        path = write(tmp_path, "bad.json", doc)
        with pytest.raises(SystemFileError, match="rational"):
            parse_system(path)


class TestFixtureFiles:
    def test_two_dim_fixture_file_matches_builder(self):
        from helpers import two_dim_fixture

        sf = parse_system(str(FIXTURES / "ex2_2d.json"))
        system, _, _ = two_dim_fixture(N=8)
        assert sf.eigen.values == system.mu.values
        assert sf.nonlinear == system.nonlinear

    def test_three_dim_fixture_file_matches_builder(self):
        from helpers import three_dim_fixture

        sf = parse_system(str(FIXTURES / "ex2_3d.json"))
        system, _, _, _ = three_dim_fixture(N=8)
        assert sf.eigen.values == system.mu.values
        assert sf.nonlinear == system.nonlinear


class TestExitCodes:
    def test_parse_error_is_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("not json")
        assert run(["classify", "--input", path]) == 2

    def test_hypothesis_error_is_3(self, tmp_path):
        # embedding a field system is not defined
        doc = {
            "kind": "field", "n": 2,
            "eigen": {"form": "additive", "values": [[1, 1], [-1, 1]]},
            "terms": [],
        }
        path = write(tmp_path, "field.json", doc)
        assert run(["embed", "--input", path]) == 3

    def test_tamper_is_4(self, tmp_path):
        rep = tmp_path / "rep.json"
        assert run(["classify", "--input", FIXTURES / "ex2_2d.json", "--output", rep]) == 0
        doc = load(rep)
        doc["classification"]["normalization"]["phi"][0]["coeff"] = [99, 1]
        bad = write(tmp_path, "bad.json", doc)
        assert run(["verify", "--input", bad]) == 4


class TestSubcommands:
    def test_resonance_halfdouble(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["resonance", "--input", FIXTURES / "halfdouble.json",
                    "--degree", 12, "--output", out]) == 0
        doc = load(out)
        assert doc["lattice"]["rank"] == 1
        assert doc["lattice"]["generators"] == [[1, 1]]
        assert doc["bound"]["value"] == {"type": "rational", "value": [1, 4]}
        ver = doc["bound"]["verification"]
        assert ver["passed"] and ver["min_gap"]["value"] == [1, 4]
        assert ver["witness"] == {"component": 1, "exponent": [2, 0]}

    def test_classify_2d(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["classify", "--input", FIXTURES / "ex2_2d.json", "--output", out]) == 0
        doc = load(out)["classification"]
        assert doc["verdict"] == "integrable-consistent"
        assert doc["lattice"]["rank"] == 1
        assert doc["functional_equation_residuals_zero"] == [True]
        assert doc["single_function_reduction"]["exponents"] == [[-1, 1], [1, 1]]

    def test_classify_3d(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["classify", "--input", FIXTURES / "ex2_3d.json",
                    "--degree", 8, "--order", 8, "--output", out]) == 0
        doc = load(out)["classification"]
        assert doc["verdict"] == "integrable-consistent"
        assert doc["lattice"]["rank"] == 2
        assert doc["single_function_reduction"]["base_component"] == 2
        assert doc["single_function_reduction"]["exponents"] == [[-5, 2], [1, 1], [1, 2]]

    def test_classify_center_field(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["classify", "--input", FIXTURES / "center.json", "--output", out]) == 0
        doc = load(out)["classification"]
        assert doc["verdict"] == "integrable-consistent"
        assert doc["h"] == [{"exponent": [1, 1], "coeff": [1, 1]}]

    def test_normalize_center_is_unchanged(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["normalize", "--input", FIXTURES / "center.json", "--output", out]) == 0
        doc = load(out)["normalization"]
        assert doc["phi"] == []
        assert doc["residual_zero_through"] == 8

    def test_resonance_symbolic_base(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["resonance", "--input", FIXTURES / "ex2_3d_base.json", "--output", out]) == 0
        doc = load(out)
        assert doc["lattice"]["rank"] == 2
        assert doc["lattice"]["generators"] == [[1, 2, 1], [1, 1, 3]]
        assert doc["bound"]["value"]["type"] == "symbolic"
        assert doc["bound"]["verification"]["mode"] == "certificate"
        assert doc["bound"]["verification"]["passed"]

    def test_integrals_center(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["integrals", "--input", FIXTURES / "center.json",
                    "--order", 4, "--output", out]) == 0
        doc = load(out)["integrals"]
        assert len(doc["search"]["integrals"]) == 2
        assert all(doc["search"]["residual_zero"])
        assert doc["pullback"]["residual_zero"] == [True]

    def test_embed_halfdouble(self, tmp_path):
        out = tmp_path / "out.json"
        assert run(["embed", "--input", FIXTURES / "halfdouble.json", "--output", out]) == 0
        doc = load(out)["embedding"]
        assert doc["tangency_zero"] == [True]
        assert doc["equivariance_zero"] is True
        assert doc["time_one_matches_map"] is False
        assert any("time-one" in f for f in doc["flags"])
        assert doc["field"] == [
            {"component": 1, "exponent": [1, 0], "coeff": [1, 1]},
            {"component": 2, "exponent": [0, 1], "coeff": [-1, 1]},
        ]

    def test_gaussian_system_classifies(self, tmp_path):
        doc = {
            "kind": "map", "n": 2, "scalars": "gaussian",
            "eigen": {"form": "mult-rational",
                      "values": [[0, 1, 2, 1], [0, 1, -1, 2]]},  # 2i, -i/2
            "terms": [], "degree_D": 8, "order_N": 4,
        }
        path = write(tmp_path, "gauss.json", doc)
        out = tmp_path / "out.json"
        assert run(["classify", "--input", path, "--output", out]) == 0
        body = load(out)["classification"]
        assert body["verdict"] == "integrable-consistent"
        assert body["lattice"]["rank"] == 1

    def test_phase_flag_for_nontrivial_phase_set(self, tmp_path):
        doc = {
            "kind": "map", "n": 2, "scalars": "rational",
            "eigen": {"form": "mult-rational", "values": [[-1, 2], [2, 1]]},
            "terms": [], "degree_D": 8, "order_N": 4,
        }
        path = write(tmp_path, "neg.json", doc)
        out = tmp_path / "out.json"
        assert run(["resonance", "--input", path, "--output", out]) == 0
        doc_out = load(out)
        assert any("phase set" in f for f in doc_out["flags"])
        assert doc_out["bound"]["verification"]["passed"]

    def test_embed_non_integrable_refused(self, tmp_path):
        doc = {
            "kind": "map", "n": 2,
            "eigen": {"form": "mult-rational", "values": [[2, 1], [3, 1]]},
            "terms": [],
        }
        path = write(tmp_path, "ni.json", doc)
        assert run(["embed", "--input", path]) == 3


class TestDeterminismAndVerify:
    def test_reports_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run(["classify", "--input", FIXTURES / "ex2_2d.json", "--output", out]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_verify_round_trip_all_subcommands(self, tmp_path):
        for sub, fixture in (
            ("resonance", "halfdouble.json"),
            ("classify", "ex2_2d.json"),
            ("normalize", "ex2_2d.json"),
            ("integrals", "center.json"),
            ("embed", "ex2_2d.json"),
        ):
            out = tmp_path / f"{sub}.json"
            assert run([sub, "--input", FIXTURES / fixture, "--output", out]) == 0, sub
            assert run(["verify", "--input", out]) == 0, sub

    def test_verify_detects_tampered_bound(self, tmp_path):
        out = tmp_path / "res.json"
        assert run(["resonance", "--input", FIXTURES / "halfdouble.json", "--output", out]) == 0
        doc = load(out)
        doc["bound"]["value"]["value"] = [1, 8]
        bad = write(tmp_path, "res_bad.json", doc)
        assert run(["verify", "--input", bad]) == 4

    def test_text_format(self, tmp_path, capsys):
        assert run(["resonance", "--input", FIXTURES / "halfdouble.json",
                    "--format", "text"]) == 0
        captured = capsys.readouterr().out
        assert "lattice" in captured and "rank" in captured
