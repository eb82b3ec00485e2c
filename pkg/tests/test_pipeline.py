"""Pipeline orchestration tests: summary table, small-dimension
classification, caching, and the CLI surface."""

import json

import pytest
from click.testing import CliRunner
from gmpy2 import mpq

from optpack.cli import main as cli_main
from optpack.codes import bukh_cox_bound
from optpack.exactmath import AlgebraicNumber, isolate_real_roots
from optpack.pipeline import (
    StageCache,
    ceil4,
    classify,
    optimum_coherence,
    r1_window,
    reproduce_table1,
    system_id,
)


class TestTable1:
    def test_all_rows(self):
        rows = reproduce_table1()
        expect = {
            3: ("0.4473", [-1, 0, 5], 3, 6),
            4: ("0.3334", [-1, 3], 7, 14),
            5: ("0.2863", [1, -1, -9, 1], 16, 144),
            6: ("0.2410", [-1, -4, 20, 84, -53, -264, 106], 54, 560),
            7: ("0.2000", [-1, 5], 243, 49127),
        }
        assert len(rows) == 5
        for row in rows:
            mu, minpoly, r1, r2 = expect[row["d"]]
            assert row["n"] == row["d"] + 2
            assert row["mu"] == mu
            assert row["minpoly"] == list(minpoly)
            assert row["R1"] == r1
            assert row["R2"] == r2

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            reproduce_table1((8,))


class TestHelpers:
    def test_ceil4_rational(self):
        root = isolate_real_roots([-1, 3])[0][0]  # 1/3
        assert ceil4(root) == "0.3334"

    def test_ceil4_exact_multiple(self):
        root = [r for r, _ in isolate_real_roots([-1, 0, 16]) if r.sign() > 0][0]
        assert ceil4(root) == "0.2500"

    def test_ceil4_algebraic(self):
        sqrt2 = [r for r, _ in isolate_real_roots([-2, 0, 1]) if r.sign() > 0][0]
        assert ceil4(sqrt2) == "1.4143"

    def test_optimum_coherence_minpolys(self):
        assert list(optimum_coherence(5).minpoly) == [1, -1, -9, 1]
        assert list(optimum_coherence(6).minpoly) == [-1, -4, 20, 84, -53, -264, 106]

    def test_r1_window(self):
        lo, hi = r1_window(6)
        assert lo == bukh_cox_bound(6) == mpq(3, 13)
        assert hi == mpq(241, 1000)
        lo5, hi5 = r1_window(5)
        assert lo5 == mpq(3, 11)
        assert isinstance(hi5, AlgebraicNumber)

    def test_system_id(self):
        assert system_id(6, 7) == "d6-r2-007"


class TestStageCache:
    def test_round_trip_and_miss(self, tmp_path):
        cache = StageCache(tmp_path)
        assert cache.get(5, "r1", "key") is None
        cache.put(5, "r1", "key", {"Candidate": 1})
        assert cache.get(5, "r1", "key") == {"Candidate": 1}
        assert cache.get(5, "r1", "other-key") is None

    def test_disabled_cache(self):
        cache = StageCache(None)
        cache.put(5, "r1", "key", {})
        assert cache.get(5, "r1", "key") is None


class TestSmallDimensions:
    def test_d3_classification(self, tmp_path):
        report = classify(3, cache_dir=tmp_path)
        assert sum(report.r1_tally.values()) == 3
        assert sum(report.r2_tally.values()) == 6
        assert report.r2_tally["ConfirmedUnique"] == 3
        assert report.r2_tally["EliminatedByBox"] == 3
        assert list(report.mu_star.minpoly) == [-1, 0, 5]
        data = json.loads(report.to_json())
        assert data["mu_star_minpoly"] == [-1, 0, 5]
        assert len(data["survivors"]) == 3

    def test_d3_cached_rerun_is_identical(self, tmp_path):
        first = classify(3, cache_dir=tmp_path)
        second = classify(3, cache_dir=tmp_path)
        a, b = json.loads(first.to_json()), json.loads(second.to_json())
        a.pop("timings"), b.pop("timings")
        assert a == b

    def test_d4_classification(self):
        report = classify(4)
        assert sum(report.r1_tally.values()) == 7
        assert sum(report.r2_tally.values()) == 14
        assert report.r2_tally["ConfirmedUnique"] == 3
        assert list(report.mu_star.minpoly) == [-1, 3]
        assert report.mu_star.to_qq() == mpq(1, 3)

    def test_d6_blocked_without_certificates(self):
        report = classify(6, cert_dir=None, fallback=False)
        assert report.blocked
        assert report.survivors == []

    def test_rejects_d7(self):
        with pytest.raises(ValueError):
            classify(7)


class TestCli:
    def test_table1_command(self):
        result = CliRunner().invoke(cli_main, ["table1", "--d", "4"])
        assert result.exit_code == 0
        assert "0.3334" in result.output

    def test_orbits_command(self, tmp_path):
        out = tmp_path / "r2_d3.jsonl"
        result = CliRunner().invoke(
            cli_main, ["orbits", "--species", "2", "--d", "3", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert "wrote 6 representatives" in result.output
        assert len(out.read_text().strip().splitlines()) == 7  # header + 6

    def test_systems_command(self, tmp_path):
        result = CliRunner().invoke(
            cli_main, ["systems", "--d", "3", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        files = sorted(tmp_path.glob("*.json"))
        assert len(files) == 6
        data = json.loads(files[0].read_text())
        assert data["system_id"] == "d3-r2-000"
        assert len(data["f"]) == 6

    def test_eliminate_command(self, tmp_path):
        sys_path = tmp_path / "sys.json"
        sys_path.write_text(json.dumps({
            "system_id": "unsat",
            "variables": ["x"],
            "f": ["x + 1"],
            "g": ["x^2 + 1"],
            "r": "2",
        }))
        result = CliRunner().invoke(cli_main, ["eliminate", "--system", str(sys_path)])
        assert result.exit_code == 0
        assert result.output.startswith("Empty")
