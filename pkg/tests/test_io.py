import json

import pytest

from dbrov.cli import main
from dbrov.errors import MateUndefined, ValidationError
from dbrov.fixtures import fixture
from dbrov.schema import parse_problem, serialize_problem

from conftest import assert_close

ROW2_SPEC = {
    "schema_version": "1",
    "B": {
        "d": 2,
        "coeffs": [
            [[0.35355339059327373, 0.0], [0.0, 0.0]],
            [[0.35355339059327373, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.7071067811865476, 0.0]],
        ],
    },
}


class TestFixtures:
    def test_names(self):
        for name in ("ZERO", "SARASON", "ROW2", "FLAT", "TRUNC(2)", "TRUNC(20)"):
            fx = fixture(name)
            assert fx.B.dim >= 1

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            fixture("NOPE")

    def test_trunc_out_of_range(self):
        with pytest.raises(ValidationError):
            fixture("TRUNC(25)")

    def test_trunc3_defect_at_one(self):
        from dbrov.rowschur import defect_laurent
        scalar, _ = defect_laurent(fixture("TRUNC(3)").B)
        assert abs(scalar(1.0) - 0.125) < 1e-12

    def test_row2_defect_vanishes_at_one(self):
        from dbrov.rowschur import defect_laurent
        scalar, _ = defect_laurent(fixture("ROW2").B)
        assert abs(scalar(1.0)) < 1e-12

    def test_flat_fails_downstream(self):
        from dbrov import mate
        with pytest.raises(MateUndefined):
            mate(fixture("FLAT").B)

    def test_expectations_carry_provenance(self):
        fx = fixture("ROW2")
        assert all(isinstance(v, tuple) and len(v) == 2
                   for v in fx.expected.values())


class TestSchema:
    def test_round_trip_idempotent(self):
        spec = parse_problem(dict(ROW2_SPEC, w=[0.5, 0.0], N=8))
        once = serialize_problem(spec)
        twice = serialize_problem(parse_problem(json.loads(json.dumps(once))))
        assert once == twice

    def test_missing_b(self):
        with pytest.raises(ValidationError):
            parse_problem({"schema_version": "1"})

    def test_ragged_rows(self):
        bad = {"B": {"d": 2, "coeffs": [[[1.0, 0.0]]]}}
        with pytest.raises(ValidationError):
            parse_problem(bad)

    def test_bad_pair(self):
        bad = dict(ROW2_SPEC, w=[0.5])
        with pytest.raises(ValidationError):
            parse_problem(bad)

    def test_bad_tolerance(self):
        bad = dict(ROW2_SPEC, tolerances={"tol_factor": -1.0})
        with pytest.raises(ValidationError):
            parse_problem(bad)

    def test_fixture_override_conflict(self):
        with pytest.raises(ValidationError):
            parse_problem(ROW2_SPEC, B=fixture("ZERO").B)


class TestCli:
    def run(self, argv, capsys):
        code = main(argv)
        out = capsys.readouterr().out
        return code, out

    def test_analyze_row2_spec_file(self, tmp_path, capsys):
        path = tmp_path / "row2.json"
        path.write_text(json.dumps(ROW2_SPEC))
        code, out = self.run(["analyze", "--spec", str(path)], capsys)
        assert code == 0
        doc = json.loads(out)
        mate = [c[0] for c in doc["mate"]]
        assert_close(mate, [0.35355339059327373, -0.35355339059327373], 1e-9)
        assert doc["lambda"][0]["point"][0] == pytest.approx(1.0, abs=1e-10)

    def test_cyclic_verdict(self, capsys):
        code, out = self.run(
            ["cyclic", "--fixture", "ROW2", "--payload", '{"f": [[1,0]]}'],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["verdict"] is True

    def test_norm_values(self, capsys):
        code, out = self.run(
            ["norm", "--fixture", "SARASON", "--payload", '{"f": [[0,0],[1,0]]}'],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["norm_sq"] == pytest.approx(6.0, abs=1e-12)

    def test_clark_lebesgue(self, capsys):
        code, out = self.run(
            ["clark", "--fixture", "ROW2", "--payload",
             '{"xi": [[0,0],[0,0]]}'],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["masses"] == []
        assert doc["total_mass"] == pytest.approx(1.0, abs=1e-12)
        assert doc["density_min"] == pytest.approx(1.0, abs=1e-12)

    def test_kernel_boundary(self, capsys):
        code, out = self.run(
            ["kernel", "--fixture", "ROW2", "--payload", '{"w": [1,0]}'],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "boundary"
        assert_close([c[0] for c in doc["f"]], [0.75, 0.5], 1e-10)

    def test_kernel_interior_with_order(self, capsys):
        code, out = self.run(
            ["kernel", "--fixture", "SARASON", "--payload",
             '{"w": [0.5,0], "N": 8}'],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "interior"
        assert len(doc["f"]) == 9
        assert doc["tail_bound"] > 0

    def test_caratheodory_report(self, capsys):
        code, out = self.run(
            ["caratheodory", "--fixture", "SARASON", "--payload",
             '{"lambda": [1,0]}'],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["satisfies_caratheodory"] is True
        assert doc["clark_mass"] == pytest.approx(2.0, abs=1e-8)

    def test_density_csv(self, tmp_path, capsys):
        out_path = tmp_path / "density.csv"
        code, _ = self.run(
            ["density", "--fixture", "SARASON", "--payload",
             '{"w": [0.5,0], "N": 5}', "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "N,residual"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_crosscheck_csv(self, capsys):
        code, out = self.run(
            ["crosscheck", "--fixture", "SARASON", "--payload", '{"N": 12}'],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "lambda_re,lambda_im,residual,member"
        assert any(line.endswith(",1") for line in lines[1:])

    def test_verify_fixtures_pass(self, capsys):
        for name in ("ZERO", "SARASON", "ROW2", "TRUNC(3)", "TRUNC(8)"):
            code, out = self.run(["verify", "--fixture", name], capsys)
            assert code == 0, f"verify failed on {name}: {out}"
            assert json.loads(out)["passed"] is True

    def test_verify_flat_fails_with_mate_error(self, capsys):
        code, out = self.run(["verify", "--fixture", "FLAT"], capsys)
        assert code == 3
        assert json.loads(out)["error"] == "MateUndefined"

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"B": nope}')
        code, out = self.run(["analyze", "--spec", str(path)], capsys)
        assert code == 2
        doc = json.loads(out)
        assert doc["error"] == "MalformedJSON"
        assert "line" in doc["message"]

    def test_validation_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"B": {"d": 1, "coeffs": [[[3.0, 0.0]]]}}))
        code, out = self.run(["analyze", "--spec", str(path)], capsys)
        assert code == 2

    def test_numerical_failure_exit_code(self, capsys):
        code, out = self.run(["analyze", "--fixture", "FLAT"], capsys)
        assert code == 3
        assert json.loads(out)["error"] == "MateUndefined"

    def test_missing_payload_field(self, capsys):
        code, out = self.run(["norm", "--fixture", "ROW2"], capsys)
        assert code == 2

    def test_csv_flag_rejected_elsewhere(self, capsys):
        code, out = self.run(
            ["analyze", "--fixture", "ZERO", "--format", "csv"], capsys)
        assert code == 2

    def test_seed_flag_accepted(self, capsys):
        code, out = self.run(
            ["verify", "--fixture", "ZERO", "--seed", "7"], capsys)
        assert code == 0
