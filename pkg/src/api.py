"""Flask HTTP API serving reports and figures.

Read-only endpoints over the library: the constants report, a*(n) tables,
lattice summaries and SVG figures.
"""

import logging
import math
from typing import Type

from flask import Flask, Response, jsonify, request

from src.chain_covering import ChainConstructionError, build_chain, dodecagon
from src.config import Config
from src.covering_io import lattice_to_dict, parse_vector
from src.inscribed_regions import a_star, max_inscribed_ngon_oracle, region_M_theta
from src.lattice_covering import (
    Lattice,
    covering_radius,
    is_covering,
    kershner_lattice,
    lattice_det,
    optimal_lattice,
    shortest_vector,
    two_center_constraint,
)
from src.reports import reproduce_paper
from src.svg_renderer import SceneRenderer

logger = logging.getLogger(__name__)

MAX_ASTAR_N = 10000
MAX_FIGURE_LAYERS = 20
FIGURES = ("chain", "lattice", "region", "kershner")


def create_app(config: Type[Config]) -> Flask:
    """Create and configure Flask application.

    Args:
        config: Configuration object

    Returns:
        Configured Flask app
    """
    app = Flask(__name__)
    app.config["app_config"] = config
    app.config["renderer"] = SceneRenderer()

    register_routes(app)

    logger.info("Flask app created")
    return app


def _bad_request(message: str):
    return jsonify({"error": message}), 400


def register_routes(app: Flask):
    """Register API routes.

    Args:
        app: Flask application
    """

    @app.route("/health", methods=["GET"])
    def health():
        """Health check endpoint."""
        config: Config = app.config["app_config"]
        return jsonify({"status": "healthy", "service": "planecover", "eps": config.EPS})

    @app.route("/report.json", methods=["GET"])
    def report():
        """Constants report; always 200, check `passed` for the outcome."""
        return jsonify(reproduce_paper().to_dict())

    @app.route("/astar", methods=["GET"])
    def astar():
        """a*(n) for 3 ≤ n ≤ max_n.

        Query parameters:
            max_n: Largest n (default 12)
        """
        try:
            max_n = int(request.args.get("max_n", 12))
        except ValueError:
            return _bad_request("Invalid max_n parameter")
        if max_n < 3 or max_n > MAX_ASTAR_N:
            return _bad_request(f"max_n must be between 3 and {MAX_ASTAR_N}")
        return jsonify({"rows": [{"n": n, "a_star": a_star(n)} for n in range(3, max_n + 1)]})

    @app.route("/lattice", methods=["GET"])
    def lattice():
        """Determinant, shortest vector, covering radius and constraints of a lattice.

        Query parameters:
            v1, v2: Basis vectors as x,y (default: the optimal constrained lattice)
        """
        try:
            if "v1" in request.args or "v2" in request.args:
                lat = Lattice(parse_vector(request.args["v1"]), parse_vector(request.args["v2"]))
            else:
                lat = optimal_lattice()
        except (KeyError, ValueError) as e:
            return _bad_request(f"Invalid lattice basis: {e}")

        covering = is_covering(lat)
        return jsonify(
            {
                **lattice_to_dict(lat),
                "det": lattice_det(lat),
                "shortest_vector": list(shortest_vector(lat)),
                "covering_radius": covering_radius(lat),
                "is_covering": covering,
                "two_center_constraint": two_center_constraint(lat),
                "density": math.pi / lattice_det(lat) if covering else None,
            }
        )

    @app.route("/figures/<scene>.svg", methods=["GET"])
    def figure(scene: str):
        """SVG figures.

        Scenes:
            chain: layered chain (query `layers`, default 3)
            lattice: optimal constrained lattice
            region: M'(θ) with its largest inscribed n-gon (query `theta`, `n`)
            kershner: hexagonal lattice covering
        """
        if scene not in FIGURES:
            return jsonify({"error": f"Unknown figure '{scene}'"}), 404
        renderer: SceneRenderer = app.config["renderer"]

        try:
            if scene == "chain":
                layers = int(request.args.get("layers", 3))
                if layers < 1 or layers > MAX_FIGURE_LAYERS:
                    return _bad_request(f"layers must be between 1 and {MAX_FIGURE_LAYERS}")
                chain = build_chain(layers)
                document = renderer.render_covering(
                    list(chain.centers), polygon=dodecagon(layers), ordered=True, title="layered chain"
                )
            elif scene == "region":
                theta = float(request.args.get("theta", 2.0 * math.pi / 3.0))
                n = int(request.args.get("n", 6))
                if n < 3 or n > 12:
                    return _bad_request("n must be between 3 and 12")
                region = region_M_theta(theta)
                polygon, _ = max_inscribed_ngon_oracle(region, n)
                document = renderer.render_region(region, polygon)
            elif scene == "lattice":
                document = renderer.render_lattice(optimal_lattice())
            else:
                document = renderer.render_lattice(kershner_lattice(), title="Kershner covering")
        except ValueError as e:
            return _bad_request(str(e))
        except ChainConstructionError as e:
            logger.error(f"Chain figure failed: {e}")
            return jsonify({"error": str(e)}), 500

        logger.info(f"Served figure {scene}")
        return Response(document, mimetype="image/svg+xml")


def run_server(config: Type[Config]):
    """Run Flask development server.

    Args:
        config: Configuration object

    Raises:
        ValueError: If the configuration is invalid
    """
    errors = config.validate()
    if errors:
        logger.error("Configuration validation failed:")
        for error in errors:
            logger.error(f"  - {error}")
        raise ValueError("Invalid configuration")

    app = create_app(config)
    logger.info(f"Starting Flask server on {config.HOST}:{config.PORT}")
    app.run(host=config.HOST, port=config.PORT, debug=False)
