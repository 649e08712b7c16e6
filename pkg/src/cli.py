"""
Línea de comandos: sample, grid, circuit, solve, bench, td.
Los errores de entrada terminan con código 2.
"""
import argparse
import json
import logging
import sys

import pandas as pd

from config import settings
from src.models.planar import SymmetricSystem
from src.models.pauli import parse_bases
from src.services import io_service
from src.services.bench_service import COLUMNS, parse_algos, parse_sides, write_csv
from src.services.grid_service import GRID_ALGORITHMS
from src.services.simulator_service import SimulatorService

logger = logging.getLogger(__name__)

TD_METHODS = ('planar', 'min_fill', 'min_degree', 'trivial')


def _cmd_sample(args, sim, out):
    g = io_service.load_graph(args.graph)
    bases = parse_bases(args.bases, g.n)
    postselect = io_service.load_postselect(args.postselect) if args.postselect else {}
    results, info = sim.sample(g, bases, postselect, args.td_method, args.shots, args.seed)
    logger.info(f"✅ {len(results)} muestra(s); TD {info['method']} de ancho {info['width']}")
    for result in results:
        print(result.outcome if result.ok else result.flag.upper(), file=out)
    return 0


def _cmd_grid(args, sim, out):
    runs = sim.grid(args.side, args.algo, args.trials, args.seed)
    for spec, run in runs:
        print(f"{''.join(b.value for b in spec.bases)} {run.outcome} peak={run.peak_live}", file=out)
    if args.csv:
        rows = [{'algo': run.algo, 'side': args.side, 'trial': i, 'seconds': run.seconds,
                 'peak_live_qubits': run.peak_live, 'outcome': str(run.outcome)} for i, (_, run) in enumerate(runs)]
        pd.DataFrame(rows, columns=COLUMNS + ['outcome']).to_csv(args.csv, index=False)
        logger.info(f"✅ CSV escrito en {args.csv}")
    return 0


def _cmd_circuit(args, sim, out):
    circuit = io_service.load_circuit(args.file)
    logger.info(f"⚙️ Circuito de {circuit.n} qubits, {len(circuit.gates)} compuertas, profundidad {circuit.depth}")
    for bits in sim.sample_circuit(circuit, args.shots, args.seed):
        print(bits, file=out)
    return 0


def _cmd_solve(args, sim, out):
    system = SymmetricSystem(io_service.load_matrix(args.matrix), io_service.load_vector(args.rhs))
    x = sim.solve(system, args.seed)
    print('INFEASIBLE' if x is None else x, file=out)
    return 0


def _cmd_bench(args, sim, out):
    df, slopes = sim.bench(parse_sides(args.sides), parse_algos(args.algos), args.trials, args.seed, args.workers)
    if args.csv:
        write_csv(df, args.csv)
    else:
        df.to_csv(out, index=False)
    for algo, slope in sorted(slopes.items()):
        print(f"# slope {algo} {slope:.4f}", file=out)
    return 0


def _cmd_td(args, sim, out):
    g = io_service.load_graph(args.graph)
    td, info = sim.decompose(g, args.method)
    if args.out:
        io_service.save_td(td, g.n, args.out)
    else:
        out.write(io_service.format_td(td, g.n))
    print(json.dumps(info), file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog='grafo-sim', description='Simulación de estados de grafo y circuitos de Clifford planares')
    parser.add_argument('--log-level', default=settings.LOG_LEVEL)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sample', help='muestrea mediciones de un estado de grafo')
    p.add_argument('--graph', required=True)
    p.add_argument('--bases', required=True)
    p.add_argument('--postselect')
    p.add_argument('--td-method', choices=TD_METHODS)
    p.add_argument('--seed', type=int)
    p.add_argument('--shots', type=int, default=1)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser('grid', help='mide el estado de grafo de la grilla')
    p.add_argument('--side', type=int, required=True)
    p.add_argument('--algo', choices=list(GRID_ALGORITHMS), default='recursive')
    p.add_argument('--trials', type=int, default=1)
    p.add_argument('--seed', type=int)
    p.add_argument('--csv')
    p.set_defaults(handler=_cmd_grid)

    p = sub.add_parser('circuit', help='muestrea la salida de un circuito de Clifford planar')
    p.add_argument('--file', required=True)
    p.add_argument('--seed', type=int)
    p.add_argument('--shots', type=int, default=1)
    p.set_defaults(handler=_cmd_circuit)

    p = sub.add_parser('solve', help='resuelve A x = b con A simétrica de diagonal cero')
    p.add_argument('--matrix', required=True)
    p.add_argument('--rhs', required=True)
    p.add_argument('--seed', type=int)
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser('bench', help='benchmark de los algoritmos de grilla')
    p.add_argument('--sides', default='2:64:*2')
    p.add_argument('--algos', default='all')
    p.add_argument('--trials', type=int, default=settings.BENCH_TRIALS)
    p.add_argument('--seed', type=int)
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--csv')
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser('td', help='calcula una descomposición nice y la exporta en formato PACE')
    p.add_argument('--graph', required=True)
    p.add_argument('--method', choices=TD_METHODS)
    p.add_argument('--out')
    p.set_defaults(handler=_cmd_td)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format=settings.LOG_FORMAT)
    try:
        return args.handler(args, SimulatorService(), out)
    except (ValueError, IndexError, KeyError, OSError) as e:
        logger.error(f"❌ {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
