"""Tests for the planecover command line."""

import json
import math

import pytest

from src.chain_covering import ChainConstructionError
from src.config import Config
from src.covering_io import CoveringFile, read_covering, write_covering, write_json
from src.main import main


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.json"
    assert main(["chain", "build", "--layers", "3", "--out", str(path)]) == 0
    return path


class TestAStarAndRegions:
    """Tests for the astar and regions subcommands."""

    def test_astar_table(self, tmp_path, capsys):
        """Test the a*(n) table on stdout and in CSV."""
        path = tmp_path / "astar.csv"
        assert main(["astar", "--max-n", "6", "--csv", str(path)]) == 0
        assert len(path.read_text().splitlines()) == 5
        assert "6\t1.86602540378" in capsys.readouterr().out

    def test_astar_rejects_small_max_n(self):
        """Test that max-n below 3 fails."""
        assert main(["astar", "--max-n", "2"]) == 1

    def test_regions_report(self, tmp_path):
        """Test the region report and figure."""
        report = tmp_path / "region.json"
        svg = tmp_path / "region.svg"
        argv = ["regions", "--theta", "2.5", "--n", "4", "--resolution", "120"]
        assert main(argv + ["--report", str(report), "--svg", str(svg)]) == 0
        data = json.loads(report.read_text())
        assert data["area_matches_M"] is True
        assert data["inscribed_area"] <= data["a_star"] + 1e-6
        assert len(data["vertices"]) == 4
        assert svg.read_text().startswith("<svg")

    def test_regions_bad_theta(self):
        """Test that θ outside [2π/3, π] fails."""
        assert main(["regions", "--theta", "1.0"]) == 1


class TestVoronoi:
    """Tests for the voronoi subcommand."""

    def test_covered_square(self, tmp_path):
        """Test a square covered by four disks."""
        polygon = tmp_path / "square.json"
        seeds = tmp_path / "seeds.json"
        report = tmp_path / "report.json"
        write_json(polygon, [[-1, -1], [1, -1], [1, 1], [-1, 1]])
        write_json(seeds, [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])

        argv = ["voronoi", "--polygon", str(polygon), "--seeds", str(seeds), "--report", str(report)]
        assert main(argv) == 0
        data = json.loads(report.read_text())
        assert data["covers"] is True
        assert data["proper_vertices"] == [4, 4, 4, 4]
        assert data["vertex_sum_ok"] is True
        assert data["max_cell_reach"] == pytest.approx(math.sqrt(0.5))

    def test_uncovered_square_still_consistent(self, tmp_path):
        """Test that an uncovered square still exits cleanly."""
        polygon = tmp_path / "square.json"
        seeds = tmp_path / "seeds.json"
        report = tmp_path / "report.json"
        write_json(polygon, [[-2, -2], [2, -2], [2, 2], [-2, 2]])
        write_json(seeds, [[0, 0]])

        argv = ["voronoi", "--polygon", str(polygon), "--seeds", str(seeds), "--report", str(report)]
        assert main(argv) == 0
        assert json.loads(report.read_text())["covers"] is False

    def test_duplicate_seeds_fail(self, tmp_path):
        """Test that duplicate seeds fail."""
        polygon = tmp_path / "square.json"
        seeds = tmp_path / "seeds.json"
        write_json(polygon, [[-1, -1], [1, -1], [1, 1], [-1, 1]])
        write_json(seeds, [[0, 0], [0, 0]])
        assert main(["voronoi", "--polygon", str(polygon), "--seeds", str(seeds)]) == 1

    def test_polygon_without_vertices_fails(self, tmp_path, caplog):
        """A polygon object missing its vertex list is an input error, not a crash."""
        polygon = tmp_path / "polygon.json"
        seeds = tmp_path / "seeds.json"
        write_json(polygon, {"corners": [[-1, -1], [1, -1], [1, 1], [-1, 1]]})
        write_json(seeds, [[0, 0]])
        assert main(["voronoi", "--polygon", str(polygon), "--seeds", str(seeds)]) == 1
        assert "vertices" in caplog.text

    def test_missing_file(self, tmp_path):
        """Test that missing input files fail."""
        missing = str(tmp_path / "missing.json")
        assert main(["voronoi", "--polygon", missing, "--seeds", missing]) == 1


class TestChain:
    """Tests for the chain subcommands."""

    def test_build_writes_ordered_covering(self, chain_file):
        """Test the covering written by chain build."""
        covering = read_covering(chain_file)
        assert covering.ordered
        assert covering.centers[0] == (0.0, 0.0)
        assert covering.tags[0] == "0"

    def test_verify(self, chain_file, tmp_path):
        """Test chain verify on a valid chain."""
        report = tmp_path / "report.json"
        assert main(["chain", "verify", "--in", str(chain_file), "--report", str(report)]) == 0
        data = json.loads(report.read_text())
        assert data["ok"] is True
        assert data["covered_up_to_layer"] == 3

    def test_verify_flags_sharp_turn(self, tmp_path):
        """Test that chain verify fails on a sharp turn."""
        path = tmp_path / "bad.json"
        write_covering(path, CoveringFile(centers=((-1.0, 0.0), (0.0, 0.0), (0.0, -1.0)), ordered=True))
        assert main(["chain", "verify", "--in", str(path), "--skip-coverage"]) == 1

    def test_render(self, chain_file, tmp_path):
        """Test chain render with a density square."""
        svg = tmp_path / "chain.svg"
        assert main(["chain", "render", "--in", str(chain_file), "--svg", str(svg), "--square", "3"]) == 0
        assert "<polyline" in svg.read_text()

    def test_construction_error(self, tmp_path, mocker):
        """Test that a construction failure exits with 1."""
        mocker.patch("src.cli.build_chain", side_effect=ChainConstructionError("stuck"))
        assert main(["chain", "build", "--layers", "2", "--out", str(tmp_path / "c.json")]) == 1


class TestLattice:
    """Tests for the lattice subcommands."""

    def test_check_optimal(self, tmp_path):
        """Test lattice check on the optimal lattice."""
        out = tmp_path / "lattice.json"
        argv = ["lattice", "check", "--v1", "1,0", "--v2", f"0.5,{1 + math.sqrt(3) / 2!r}", "--json", str(out)]
        assert main(argv) == 0
        data = json.loads(out.read_text())
        assert data["covering_radius"] == pytest.approx(1.0, abs=1e-9)
        assert data["density"] == pytest.approx(2 * math.pi / (2 + math.sqrt(3)))

    def test_check_sparse(self):
        """Test that a non-covering lattice fails the check."""
        assert main(["lattice", "check", "--v1", "2,0", "--v2", "0,2"]) == 1

    def test_check_degenerate(self):
        """Test that a degenerate basis fails."""
        assert main(["lattice", "check", "--v1", "1,1", "--v2", "2,2"]) == 1

    def test_optimize(self, tmp_path):
        """Test lattice optimize at a coarse resolution."""
        out = tmp_path / "opt.json"
        assert main(["lattice", "optimize", "--resolution", "100", "--json", str(out)]) == 0
        assert json.loads(out.read_text())["det"] == pytest.approx(1 + math.sqrt(3) / 2, abs=1e-3)

    def test_render(self, tmp_path):
        """Test lattice render."""
        svg = tmp_path / "lattice.svg"
        assert main(["lattice", "render", "--svg", str(svg), "--extent", "3"]) == 0
        assert svg.read_text().count("<line") == 2


class TestDensityAndReports:
    """Tests for the density, paper-report and serve subcommands."""

    def test_density_sweep(self, tmp_path, capsys):
        """Test a density sweep with CSV and extrapolation."""
        covering = tmp_path / "chain.json"
        assert main(["chain", "build", "--layers", "10", "--out", str(covering)]) == 0
        csv_path = tmp_path / "density.csv"
        argv = ["density", "--covering", str(covering), "--lambdas", "2,4,8", "--csv", str(csv_path), "--extrapolate"]
        assert main(argv) == 0
        assert len(csv_path.read_text().splitlines()) == 4
        assert "extrapolated" in capsys.readouterr().out

    def test_density_extent_warning_fails(self, chain_file):
        """Test that a truncated sweep exits with 1."""
        assert main(["density", "--covering", str(chain_file), "--lambdas", "50"]) == 1

    def test_density_extrapolation_needs_rows(self, chain_file):
        """Test that extrapolating two rows fails."""
        assert main(["density", "--covering", str(chain_file), "--lambdas", "1,2", "--extrapolate"]) == 1

    @pytest.mark.parametrize("command", ["paper-report", "constants-report"])
    def test_paper_report(self, tmp_path, command):
        """The report runs under its name and its alias."""
        out = tmp_path / "report.json"
        assert main([command, "--json", str(out)]) == 0
        assert json.loads(out.read_text())["passed"] is True

    def test_unexpected_error(self, mocker):
        """Test that unexpected errors exit with 1."""
        mocker.patch("src.cli.reproduce_paper", side_effect=RuntimeError("boom"))
        assert main(["paper-report"]) == 1

    def test_interrupt(self, mocker):
        """Test that an interrupt exits cleanly."""
        mocker.patch("src.cli.reproduce_paper", side_effect=KeyboardInterrupt)
        assert main(["paper-report"]) == 0

    def test_serve(self, monkeypatch, mocker):
        """Test that serve applies host and port overrides."""
        monkeypatch.setattr(Config, "HOST", Config.HOST)
        monkeypatch.setattr(Config, "PORT", Config.PORT)
        run_server = mocker.patch("src.api.run_server")
        assert main(["serve", "--host", "0.0.0.0", "--port", "9000"]) == 0
        run_server.assert_called_once_with(Config)
        assert Config.PORT == 9000

    def test_invalid_config(self, monkeypatch):
        """Test that invalid configuration fails before running."""
        monkeypatch.setattr(Config, "ORACLE_RESOLUTION", 10)
        assert main(["paper-report"]) == 1

    def test_unknown_command(self):
        """Test an unknown subcommand."""
        with pytest.raises(SystemExit):
            main(["teapot"])
