"""Command-line subcommands.

Every subcommand returns an exit code: 0 when all of its checks pass and
1 when any check fails.
"""

import argparse
import json
import logging
import math
from pathlib import Path
from typing import Any, Callable, Optional

from src.chain_covering import (
    ChainConstructionError,
    build_chain,
    count_bound,
    dodecagon,
    verify_chain,
)
from src.config import Config
from src.covering_io import (
    chain_to_covering,
    covering_to_chain,
    lattice_to_dict,
    parse_lambdas,
    parse_vector,
    read_covering,
    read_points,
    read_polygon,
    write_covering,
    write_density_csv,
    write_json,
    write_rows_csv,
)
from src.density_meter import density_fit, density_sweep
from src.geometry_core import polygon_area
from src.inscribed_regions import (
    REGION_M_AREA,
    a_star,
    check_dowker,
    max_inscribed_ngon_oracle,
    region_area,
    region_M_theta,
)
from src.lattice_covering import (
    Lattice,
    covering_radius,
    is_covering,
    lattice_det,
    optimal_lattice,
    optimize_constrained_lattice,
    shortest_vector,
    two_center_constraint,
)
from src.reports import reproduce_paper
from src.svg_renderer import SceneRenderer
from src.voronoi_partition import (
    build_partition,
    cells_inside_disks,
    covers,
    max_cell_reach,
    proper_vertex_counts,
)

logger = logging.getLogger(__name__)


def _emit(data: Any, path: Optional[str]) -> None:
    if path:
        write_json(path, data)
        logger.info(f"Wrote report to {path}")
    print(json.dumps(data, indent=2))


def _write_svg(path: str, document: str) -> None:
    Path(path).write_text(document, encoding="utf-8")
    logger.info(f"Wrote figure to {path}")


def cmd_astar(args: argparse.Namespace) -> int:
    if args.max_n < 3:
        raise ValueError(f"--max-n must be at least 3, got {args.max_n}")
    rows = [(n, a_star(n)) for n in range(3, args.max_n + 1)]
    if args.csv:
        write_rows_csv(args.csv, ["n", "a_star"], rows)
    for n, value in rows:
        print(f"{n}\t{value!r}")
    concave = check_dowker(args.max_n) if args.max_n >= 4 else True
    if not concave:
        logger.error(f"a*(n) is not midpoint-concave up to n={args.max_n}")
    return 0 if concave else 1


def cmd_regions(args: argparse.Namespace) -> int:
    region = region_M_theta(args.theta)
    area = region_area(region)
    polygon, inscribed = max_inscribed_ngon_oracle(region, args.n, args.resolution)
    bound = a_star(args.n)
    report = {
        "theta": args.theta,
        "area": area,
        "area_matches_M": abs(area - REGION_M_AREA) <= 1e-9,
        "n": args.n,
        "inscribed_area": inscribed,
        "a_star": bound,
        "inscribed_within_a_star": inscribed <= bound + 1e-6,
        "vertices": [list(p.as_tuple()) for p in polygon.vertices],
    }
    if args.svg:
        _write_svg(args.svg, SceneRenderer().render_region(region, polygon, title=f"M'({args.theta:.6f})"))
    _emit(report, args.report)
    return 0 if report["area_matches_M"] and report["inscribed_within_a_star"] else 1


def cmd_voronoi(args: argparse.Namespace) -> int:
    boundary = read_polygon(args.polygon)
    seeds = read_points(args.seeds)
    partition = build_partition(boundary, seeds)
    counts = proper_vertex_counts(partition)
    areas = partition.areas()
    covered = covers(boundary, seeds)
    inside = cells_inside_disks(partition)
    vertex_sum = sum(counts)
    non_empty = sum(1 for c in counts if c)

    checks = {
        "area_sum_ok": abs(sum(areas) - polygon_area(boundary)) <= 1e-6,
        "containment_consistent": covered == inside,
    }
    if len(boundary) <= 6:
        checks["vertex_sum_ok"] = vertex_sum <= 6 * non_empty
    report = {
        "cell_areas": areas,
        "proper_vertices": counts,
        "vertex_sum": vertex_sum,
        "covers": covered,
        "cells_inside_disks": inside,
        "max_cell_reach": max_cell_reach(partition),
        **checks,
    }
    if args.svg:
        _write_svg(args.svg, SceneRenderer().render_partition(partition))
    _emit(report, args.report)
    return 0 if all(checks.values()) else 1


def cmd_chain_build(args: argparse.Namespace) -> int:
    chain = build_chain(args.layers)
    write_covering(args.out, chain_to_covering(chain))
    print(f"{len(chain)} disks (bound {count_bound(args.layers)})")
    return 0 if len(chain) <= count_bound(args.layers) else 1


def cmd_chain_verify(args: argparse.Namespace) -> int:
    chain = covering_to_chain(read_covering(args.input))
    report = verify_chain(chain, check_coverage=not args.skip_coverage)
    data = {
        "disk_count": report.disk_count,
        "duplicate_count": report.duplicate_count,
        "min_gap_ok": report.min_gap_ok,
        "gap_violations": list(report.gap_violations),
        "min_angle": report.min_angle,
        "worst_angle_index": report.worst_angle_index,
        "sharp_turns": list(report.sharp_turns),
        "covered_up_to_layer": report.covered_up_to_layer,
        "ok": report.ok,
    }
    _emit(data, args.report)
    return 0 if report.ok else 1


def cmd_chain_render(args: argparse.Namespace) -> int:
    covering = read_covering(args.input)
    chain = covering_to_chain(covering)
    polygon = dodecagon(chain.layers) if chain.layers >= 1 else None
    document = SceneRenderer().render_covering(
        covering.points(), polygon=polygon, square=args.square, ordered=covering.ordered, title="layered chain"
    )
    _write_svg(args.svg, document)
    return 0


def _lattice_summary(lattice: Lattice) -> dict[str, Any]:
    radius = covering_radius(lattice)
    covering = is_covering(lattice)
    return {
        **lattice_to_dict(lattice),
        "det": lattice_det(lattice),
        "shortest_vector": list(shortest_vector(lattice)),
        "covering_radius": radius,
        "is_covering": covering,
        "two_center_constraint": two_center_constraint(lattice),
        "density": math.pi / lattice_det(lattice) if covering else None,
    }


def cmd_lattice_optimize(args: argparse.Namespace) -> int:
    lattice, det = optimize_constrained_lattice(args.resolution)
    summary = _lattice_summary(lattice)
    _emit(summary, args.json)
    return 0 if summary["is_covering"] and summary["two_center_constraint"] else 1


def cmd_lattice_check(args: argparse.Namespace) -> int:
    lattice = Lattice(parse_vector(args.v1), parse_vector(args.v2))
    summary = _lattice_summary(lattice)
    _emit(summary, args.json)
    return 0 if summary["is_covering"] and summary["two_center_constraint"] else 1


def cmd_lattice_render(args: argparse.Namespace) -> int:
    lattice = optimal_lattice()
    if args.v1 and args.v2:
        lattice = Lattice(parse_vector(args.v1), parse_vector(args.v2))
    _write_svg(args.svg, SceneRenderer().render_lattice(lattice, extent=args.extent))
    return 0


def cmd_density(args: argparse.Namespace) -> int:
    covering = read_covering(args.covering)
    table = density_sweep(covering.points(), parse_lambdas(args.lambdas))
    if args.csv:
        write_density_csv(args.csv, table)
    for row in table.rows:
        print(f"{row.lam!r}\t{row.count}\t{row.gamma!r}")
    if args.extrapolate:
        limit, slope = density_fit(table)
        print(f"extrapolated\t{limit!r}\t(b = {slope!r})")
    return 1 if table.extent_warning else 0


def cmd_paper_report(args: argparse.Namespace) -> int:
    report = reproduce_paper()
    _emit(report.to_dict(), args.json)
    return 0 if report.passed else 1


def cmd_serve(args: argparse.Namespace) -> int:
    from src.api import run_server

    Config.HOST = args.host or Config.HOST
    Config.PORT = args.port or Config.PORT
    run_server(Config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planecover",
        description="Construct, verify and measure unit-disk coverings of the plane.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("astar", help="Tabulate a*(n) and check its concavity")
    p.add_argument("--max-n", type=int, default=12, dest="max_n")
    p.add_argument("--csv", help="Write (n, a_star) rows to this CSV file")
    p.set_defaults(handler=cmd_astar)

    p = commands.add_parser("regions", help="Area of M'(θ) and its largest inscribed n-gon")
    p.add_argument("--theta", type=float, default=2.0 * math.pi / 3.0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--resolution", type=int, default=None, help="Oracle boundary samples")
    p.add_argument("--svg")
    p.add_argument("--report")
    p.set_defaults(handler=cmd_regions)

    p = commands.add_parser("voronoi", help="Bounded Voronoi partition and coverage decision")
    p.add_argument("--polygon", required=True)
    p.add_argument("--seeds", required=True)
    p.add_argument("--svg")
    p.add_argument("--report")
    p.set_defaults(handler=cmd_voronoi)

    chain = commands.add_parser("chain", help="Layered sequence covering").add_subparsers(
        dest="action", required=True
    )
    p = chain.add_parser("build")
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_chain_build)
    p = chain.add_parser("verify")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--report")
    p.add_argument("--skip-coverage", action="store_true", dest="skip_coverage")
    p.set_defaults(handler=cmd_chain_verify)
    p = chain.add_parser("render")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--svg", required=True)
    p.add_argument("--square", type=float, help="Also draw [-λ, λ]²")
    p.set_defaults(handler=cmd_chain_render)

    lattice = commands.add_parser("lattice", help="Constrained lattice coverings").add_subparsers(
        dest="action", required=True
    )
    p = lattice.add_parser("optimize")
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_lattice_optimize)
    p = lattice.add_parser("check")
    p.add_argument("--v1", required=True)
    p.add_argument("--v2", required=True)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_lattice_check)
    p = lattice.add_parser("render")
    p.add_argument("--svg", required=True)
    p.add_argument("--v1")
    p.add_argument("--v2")
    p.add_argument("--extent", type=float, default=4.0)
    p.set_defaults(handler=cmd_lattice_render)

    p = commands.add_parser("density", help="Density sweep over growing squares")
    p.add_argument("--covering", required=True)
    p.add_argument("--lambdas", default="25,50,100,200")
    p.add_argument("--csv")
    p.add_argument("--extrapolate", action="store_true")
    p.set_defaults(handler=cmd_density)

    p = commands.add_parser(
        "paper-report",
        aliases=["constants-report"],
        help="Recompute and check the closed-form constants",
    )
    p.add_argument("--json")
    p.set_defaults(handler=cmd_paper_report)

    p = commands.add_parser("serve", help="Serve reports and figures over HTTP")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(handler=cmd_serve)

    return parser


def run(args: argparse.Namespace) -> int:
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except ChainConstructionError as e:
        logger.error(f"Chain construction failed: {e}")
        return 1
