from flask import Blueprint, request, jsonify
import logging

import src  # Acceso al singleton: src.simulator
from src.models.bits import BitMatrix, BitVector
from src.models.planar import SymmetricSystem
from src.models.pauli import parse_bases
from src.services import io_service

logger = logging.getLogger(__name__)

bp = Blueprint('api', __name__, url_prefix='/api')

# Límite de muestras por petición
MAX_SHOTS = 10000
MAX_GRID_SIDE = 128


def _payload():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ValueError("Se esperaba un cuerpo JSON")
    return data


def _shots(data):
    shots = int(data.get('shots', 1))
    if not 1 <= shots <= MAX_SHOTS:
        raise ValueError(f"shots debe estar entre 1 y {MAX_SHOTS}")
    return shots


def _bad_request(e):
    return jsonify({"status": "error", "message": str(e)}), 400


def _server_error(where, e):
    logger.error(f"❌ Error en {where}: {e}")
    return jsonify({"status": "error", "message": str(e)}), 500


# ==============================================================================
# 1. ESTADOS DE GRAFO
# ==============================================================================
@bp.route('/sample', methods=['POST'])
def sample():
    """
    {"graph": {"n", "edges"}, "bases": "XYZX", "postselect": {"3": 1},
     "td_method": "planar", "shots": 10, "seed": 42}
    """
    try:
        data = _payload()
        g = io_service.graph_from_dict(data['graph'])
        bases = parse_bases(data['bases'], g.n)
        postselect = io_service.postselect_from_dict(data.get('postselect', {}))
        results, info = src.simulator.sample(g, bases, postselect, data.get('td_method'),
                                             _shots(data), data.get('seed'))
        return jsonify({"status": "success", "td": info, "samples": [r.to_dict() for r in results]}), 200
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error('/api/sample', e)


@bp.route('/td', methods=['POST'])
def decompose():
    """Descomposición nice del grafo, en formato PACE y con sus estadísticas."""
    try:
        data = _payload()
        g = io_service.graph_from_dict(data['graph'])
        td, info = src.simulator.decompose(g, data.get('method'))
        return jsonify({"status": "success", "stats": info, "pace": io_service.format_td(td, g.n)}), 200
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error('/api/td', e)


# ==============================================================================
# 2. CIRCUITOS DE CLIFFORD
# ==============================================================================
@bp.route('/circuit', methods=['POST'])
def circuit():
    """{"circuit": {"n", "layout_edges", "gates"}, "shots": 10, "seed": 7}"""
    try:
        data = _payload()
        c = io_service.circuit_from_dict(data['circuit'])
        samples = src.simulator.sample_circuit(c, _shots(data), data.get('seed'))
        return jsonify({"status": "success", "depth": c.depth, "samples": [str(s) for s in samples]}), 200
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error('/api/circuit', e)


# ==============================================================================
# 3. SISTEMAS LINEALES Y GRILLA
# ==============================================================================
@bp.route('/solve', methods=['POST'])
def solve():
    """{"matrix": ["0110", ...], "rhs": "0101", "seed": 1}; x = null si no hay solución."""
    try:
        data = _payload()
        a = BitMatrix.from_rows(data['matrix'])
        system = SymmetricSystem(a, BitVector.from_string(data['rhs']))
        x = src.simulator.solve(system, data.get('seed'))
        return jsonify({"status": "success", "feasible": x is not None,
                        "x": str(x) if x is not None else None}), 200
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error('/api/solve', e)


@bp.route('/grid', methods=['POST'])
def grid():
    """{"side": 8, "algo": "recursive", "trials": 1, "seed": 1}"""
    try:
        data = _payload()
        side = int(data["side"])
        if not 1 <= side <= MAX_GRID_SIDE:
            raise ValueError(f"side debe estar entre 1 y {MAX_GRID_SIDE}")
        runs = src.simulator.grid(side, data.get('algo', 'recursive'),
                                  int(data.get('trials', 1)), data.get('seed'))
        return jsonify({"status": "success", "runs": [
            {"bases": ''.join(b.value for b in spec.bases), "outcome": str(run.outcome),
             "peak_live_qubits": int(run.peak_live), "seconds": run.seconds}
            for spec, run in runs
        ]}), 200
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error('/api/grid', e)


@bp.route('/stats', methods=['GET'])
def usage_stats():
    return jsonify({"status": "success", "calls": dict(src.simulator.stats)}), 200
