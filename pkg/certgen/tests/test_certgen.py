"""Tests for the certificate generator.

The toy system here is the two-variable example with a known exact
degree-4 certificate: f = {x - y^2 + 3}, g = {x^2 + y + 2}, r = 11.  The
generator must find a numeric certificate with residual below 1e-12 for it.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from certgen.core import RawCertificate, batch, generate, parse_system
from certgen.poly import Poly, decimal_str, parse_coeff

TOY = {
    "system_id": "toy",
    "variables": ["x", "y"],
    "f": ["-1 * y^2 + x + 3"],
    "g": ["x^2 + y + 2"],
    "r": "11",
}

# a feasible system (x = 1/2 satisfies both), so no certificate can exist
FEASIBLE = {
    "system_id": "feasible",
    "variables": ["x"],
    "f": ["x"],
    "g": ["-1/2 + x"],
    "r": "1",
}


class TestPoly:
    def test_parse_rational_and_decimal(self):
        p = Poly.parse("-3/2 * x^2 + 0.25 * y + 7", ("x", "y"))
        assert p.terms[(2, 0)] == Fraction(-3, 2)
        assert p.terms[(0, 1)] == Fraction(1, 4)
        assert p.terms[(0, 0)] == 7

    def test_parse_bare_and_negative_variables(self):
        p = Poly.parse("x + -y", ("x", "y"))
        assert p.terms == {(1, 0): 1, (0, 1): -1}

    def test_mul_matches_hand_expansion(self):
        varz = ("x", "y")
        p = Poly.parse("x + y", varz)
        q = Poly.parse("x + -1 * y", varz)
        assert (p * q).terms == {(2, 0): 1, (0, 2): -1}

    def test_parse_coeff(self):
        assert parse_coeff("3/13") == Fraction(3, 13)
        assert parse_coeff("0.2410") == Fraction(241, 1000)

    def test_decimal_str_round_trip(self):
        for v in (0.123456789012345, -3.0, 1.5e-9, 12345.678):
            s = decimal_str(v)
            assert "e" not in s and "E" not in s
            assert abs(float(s) - v) <= abs(v) * 1e-11

    def test_parse_system(self):
        sid, varz, f, g, r = parse_system(json.dumps(TOY))
        assert sid == "toy" and varz == ("x", "y")
        assert len(f) == 1 and len(g) == 1 and r == 11


class TestGenerate:
    def test_toy_residual_below_1e12(self):
        cert = generate(TOY, m1=4, m2=2)
        assert cert.solver_status == "optimal"
        assert cert.residual < 1e-12
        assert cert.sos and len(cert.t) == 1

    def test_toy_certificate_structure(self):
        cert = generate(TOY, m1=4, m2=2)
        raw = json.loads(cert.to_json())
        assert raw["m1"] == 4 and raw["m2"] == 2
        for key, terms in raw["sos"].items():
            assert all(int(i) == 0 for i in key.split(",") if key)
            assert all(isinstance(t, str) for t in terms)
        # coefficients are plain decimal strings, never binary floats
        for s in [t for terms in raw["sos"].values() for t in terms] + raw["t"]:
            assert "e" not in s and "E" not in s

    def test_feasible_system_not_certified(self):
        cert = generate(FEASIBLE, m1=4, m2=2)
        assert cert.residual > 1e-3

    def test_too_many_variables_rejected(self):
        bad = {
            "system_id": "big",
            "variables": ["a", "b", "c", "d", "e", "f6"],
            "f": ["a"],
            "g": ["b"],
            "r": "1",
        }
        with pytest.raises(ValueError):
            generate(bad)


class TestBatch:
    @pytest.fixture()
    def dirs(self, tmp_path):
        sysdir = tmp_path / "systems"
        outdir = tmp_path / "certs"
        sysdir.mkdir()
        (sysdir / "toy.json").write_text(json.dumps(TOY))
        (sysdir / "feasible.json").write_text(json.dumps(FEASIBLE))
        return sysdir, outdir

    def test_batch_solves_and_reports_unsolved(self, dirs):
        sysdir, outdir = dirs
        summary = batch(sysdir, outdir, schedule=[(4, 2)], log=None)
        assert set(summary["solved"]) == {"toy"}
        assert summary["unsolved"] == ["feasible"]
        assert (outdir / "toy.json").exists()
        assert not (outdir / "feasible.json").exists()
        assert json.loads((outdir / "summary.json").read_text()) == summary

    def test_batch_is_idempotent(self, dirs):
        sysdir, outdir = dirs
        batch(sysdir, outdir, schedule=[(4, 2)], log=None)
        stamp = (outdir / "toy.json").stat().st_mtime_ns
        summary = batch(sysdir, outdir, schedule=[(4, 2)], log=None)
        assert summary["skipped"] == ["toy"]
        assert (outdir / "toy.json").stat().st_mtime_ns == stamp

    def test_empty_systems_dir(self, tmp_path):
        sysdir = tmp_path / "empty"
        sysdir.mkdir()
        summary = batch(sysdir, tmp_path / "out", log=None)
        assert summary["solved"] == {} and summary["unsolved"] == []

    def test_error_isolation(self, dirs):
        sysdir, outdir = dirs
        (sysdir / "broken.json").write_text("{not json")
        summary = batch(sysdir, outdir, schedule=[(4, 2)], log=None)
        assert "broken" in summary["errors"]
        assert set(summary["solved"]) == {"toy"}
