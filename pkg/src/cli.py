"""
Command-line front end: ``afkit exact|chain|verify|gen|ztg``.

Exit codes: 0 success, 1 usage/parse error, 2 verification mismatch,
3 cap exceeded.
"""

import argparse
import logging
import sys
import time

from . import chain
from .config import OUTPUT_FORMATS, Caps, Config
from .errors import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, AfkitError, BadFaceSetError
from .exporter import DataExporter, Report
from .graph import cyclomatic_number, normal_components
from .graph_file import format_graph_text, read_graph_file
from .resonance import af_step_bound, face_set_from_cycles, z_connected, z_graph
from .solver import (
    af_of_matching,
    af_table,
    anti_forcing_edges,
    find_extremal_ear_decomposition,
    forcing_edges,
)
from .verify import batch_specs, verify_batch

logger = logging.getLogger(__name__)

EXACT_TASKS = ('af', 'max-af', 'spectrum', 'per-matching', 'edges-anti-forcing',
               'edges-forcing', 'components', 'extremal')
CHAIN_TASKS = ('af', 'max-af', 'spectrum', 'segments', 'blocks', 'kinks', 'k-count',
               'witness', 'realize')


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as AfkitError (exit 1)."""

    def error(self, message):
        raise AfkitError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    common = _Parser(add_help=False)
    common.add_argument('--config', metavar='DIR', default=argparse.SUPPRESS,
                        help='directory holding config.json')
    common.add_argument('-v', '--verbose', action='store_true', default=argparse.SUPPRESS,
                        help='debug logging on stderr')
    common.add_argument('--jobs', type=int, default=argparse.SUPPRESS,
                        help='worker processes for per-matching loops (0 = physical cores)')
    common.add_argument('--cycle-cap', type=int, default=argparse.SUPPRESS)
    common.add_argument('--pm-cap', type=int, default=argparse.SUPPRESS)
    common.add_argument('--format', choices=OUTPUT_FORMATS, default=argparse.SUPPRESS)
    common.add_argument('--report', metavar='FILE', default=argparse.SUPPRESS,
                        help='also write the JSON report to FILE')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog='afkit', parents=[common],
                     description='Anti-forcing numbers and spectra of perfect matchings.')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('exact', parents=[common], help='exact oracle on a graph file')
    p.add_argument('input', help='graph text file')
    p.add_argument('--task', choices=EXACT_TASKS, default='spectrum')
    p.add_argument('--per-matching-csv', metavar='FILE', help='also write af per matching as CSV')

    p = sub.add_parser('chain', parents=[common], help='linear-time chain algorithms')
    p.add_argument('--spec', required=True, help="chain spec, e.g. '6 6@2 6'")
    p.add_argument('--task', choices=CHAIN_TASKS, default='spectrum')
    p.add_argument('--output', metavar='FILE', help='graph file written by --task realize')

    p = sub.add_parser('verify', parents=[common], help='cross-check chain algorithms against the oracle')
    p.add_argument('--spec', help='single chain spec')
    p.add_argument('--family', choices=chain.FAMILIES)
    p.add_argument('--n', type=int, help='face count (maximum face count for random)')
    p.add_argument('--count', type=int, default=1, help='instances for the random family')
    p.add_argument('--seed', type=int)
    p.add_argument('--modes')
    p.add_argument('--skip-compatible', action='store_true',
                   help="skip the per-matching af = c' check")

    p = sub.add_parser('gen', parents=[common], help='generate a chain spec')
    p.add_argument('family', choices=chain.FAMILIES)
    p.add_argument('n', type=int)
    p.add_argument('--modes')
    p.add_argument('--seed', type=int)

    p = sub.add_parser('ztg', parents=[common], help='Z-transformation graph of a graph file with faces')
    p.add_argument('input', help='graph text file with f lines')
    p.add_argument('--export', metavar='FILE', help='write Z(G) as a graph file plus FILE.nodes.csv')
    p.add_argument('--af-steps', action='store_true',
                   help='also compute af per node and the largest change along a link')
    return parser


def _settings(args) -> tuple:
    """(Config with flag overrides applied, Caps)."""
    config = Config(getattr(args, 'config', None))
    if getattr(args, 'cycle_cap', None) is not None:
        config.cycle_cap = args.cycle_cap
    if getattr(args, 'pm_cap', None) is not None:
        config.pm_cap = args.pm_cap
    if getattr(args, 'jobs', None) is not None:
        config.jobs = args.jobs
    if getattr(args, 'format', None) is not None:
        config.format = args.format
    return config, Caps.from_config(config)


def _edge_pairs(graph, edge_ids) -> list:
    return [list(graph.edges[e]) for e in edge_ids]


# ---------- Commands ----------

def cmd_exact(args, config: Config, caps: Caps) -> tuple:
    """Run one exact task on a graph file.

    Args:
        args: Parsed flags; `input` names the graph file and `task` one of EXACT_TASKS.
        config: Effective settings, used for the worker count.
        caps: Enumeration limits.

    Returns:
        (Report, exit code).
    """
    doc = read_graph_file(args.input)
    graph = doc.graph
    values = {'vertices': graph.vertex_count, 'edges': graph.edge_count}

    table = None
    if args.task in ('af', 'max-af', 'spectrum', 'per-matching', 'extremal') or args.per_matching_csv:
        table = af_table(graph, caps, config.jobs)
        if args.per_matching_csv and not DataExporter(graph).export_per_matching_csv(args.per_matching_csv, table):
            raise AfkitError(f"could not write {args.per_matching_csv}")

    if args.task == 'af':
        value = min(v for _, v in table)
        best = next(m for m, v in table if v == value)
        values.update(af=value, matching=list(best.edge_ids),
                      witness=list(af_of_matching(graph, best, caps).witness))
    elif args.task == 'max-af':
        value = max(v for _, v in table)
        r = cyclomatic_number(graph)
        values.update(max_af=value, matchings=[list(m.edge_ids) for m, v in table if v == value],
                      cyclomatic_number=r, note='Af = r' if value == r else 'Af < r')
    elif args.task == 'spectrum':
        spectrum = sorted({v for _, v in table})
        values.update(spectrum=spectrum, af=spectrum[0], max_af=spectrum[-1])
    elif args.task == 'per-matching':
        values.update(spectrum=sorted({v for _, v in table}),
                      per_matching=[{'matching': list(m.edge_ids), 'af': v} for m, v in table])
    elif args.task == 'edges-anti-forcing':
        edges = anti_forcing_edges(graph)
        values.update(edge_ids=list(edges), edge_pairs=_edge_pairs(graph, edges))
    elif args.task == 'edges-forcing':
        edges = forcing_edges(graph)
        values.update(edge_ids=list(edges), edge_pairs=_edge_pairs(graph, edges))
    elif args.task == 'components':
        report = normal_components(graph)
        values.update(fixed_single=list(report.fixed_single), fixed_double=list(report.fixed_double),
                      elementary_components=[list(c) for c in report.elementary_components],
                      component_edges=[list(c) for c in report.component_edges])
    elif args.task == 'extremal':
        value = max(v for _, v in table)
        r = cyclomatic_number(graph)
        values.update(max_af=value, cyclomatic_number=r, extremal=value == r)
        if value == r:
            best = next(m for m, v in table if v == value)
            ears = find_extremal_ear_decomposition(graph, best, caps)
            values['ear_decomposition'] = None if ears is None else {
                'matching': list(best.edge_ids),
                'base_edge': ears.base_edge,
                'ears': [list(ear) for ear in ears.ears],
            }
    return Report(input=args.input, task=args.task, values=values, caps=caps.to_dict()), EXIT_OK


def cmd_chain(args, config: Config, caps: Caps) -> tuple:
    """Run one linear-time chain task on `args.spec`.

    Args:
        args: Parsed flags; `spec` is the chain grammar text, `task` one of CHAIN_TASKS.
        config: Effective settings.
        caps: Limits for the witness search.

    Returns:
        (Report, exit code). Face positions in the report are 1-based.
    """
    spec = chain.parse_chain(args.spec)
    values = {'spec': chain.format_chain(spec), 'faces': spec.n}

    if args.task == 'af':
        values['af'] = chain.chain_af(spec)
    elif args.task == 'max-af':
        values['max_af'] = chain.chain_max_af(spec)
    elif args.task == 'spectrum':
        values['spectrum'] = list(chain.spectrum_chain(spec).values)
    elif args.task == 'segments':
        segments = chain.segment_decomposition(spec).segments
        values.update(segments=[[a + 1, b + 1] for a, b in segments], af=len(segments))
    elif args.task == 'blocks':
        found = chain.all_kink_decomposition(spec)
        values.update(blocks=[[a + 1, b + 1] for a, b in found.blocks],
                      skipped=[i + 1 for i in found.skipped], max_af=found.total)
    elif args.task == 'kinks':
        flags = chain.kink_flags(spec)
        values.update(kinks=[i + 1 for i in range(spec.n) if flags.at(i)], kink_count=flags.count)
    elif args.task == 'k-count':
        values['k_count'] = chain.maximal_linear_chain_count(spec)
    elif args.task == 'witness':
        layout = chain.realize_layout(spec)
        witness = chain.min_witness(spec, caps)
        values.update(edge_ids=list(witness), edge_pairs=_edge_pairs(layout.graph, witness))
    elif args.task == 'realize':
        layout = chain.realize_layout(spec)
        values.update(vertices=layout.graph.vertex_count, edges=layout.graph.edge_count,
                      output=args.output)
        if args.output:
            exporter = DataExporter(layout.graph)
            if not exporter.export_faces(args.output, layout.faces, [f"chain {values['spec']}"]):
                raise AfkitError(f"could not write {args.output}")
        else:
            values['graph'] = format_graph_text(layout.graph, layout.faces.interior,
                                                layout.faces.exterior, [f"chain {values['spec']}"])
    return Report(input=values['spec'], task=args.task, values=values, caps=caps.to_dict()), EXIT_OK


def cmd_verify(args, config: Config, caps: Caps) -> tuple:
    """Cross-check chain formulas against the exact oracle.

    Returns:
        (Report, EXIT_MISMATCH if any instance disagrees, else EXIT_OK).
    """
    if args.spec:
        specs = [chain.parse_chain(args.spec)]
        described = args.spec
    elif args.family and args.n:
        specs = batch_specs(args.family, args.n, args.count, args.seed, args.modes)
        described = f"{args.family} n={args.n} count={len(specs)} seed={args.seed}"
    else:
        raise AfkitError("verify needs --spec or --family with --n")

    outcomes = verify_batch(specs, caps, config.jobs, check_compatible=not args.skip_compatible)
    failed = [o for o in outcomes if not o.ok]
    values = {
        'instances': len(outcomes),
        'failed': len(failed),
        'ok': not failed,
        'outcomes': [o.to_dict() for o in (failed or outcomes[:1])],
    }
    code = EXIT_MISMATCH if failed else EXIT_OK
    return Report(input=described, task='verify', values=values, caps=caps.to_dict()), code


def cmd_gen(args, config: Config, caps: Caps) -> tuple:
    """Generate one chain spec of a named family."""
    spec = chain.generate(args.family, args.n, args.modes, args.seed)
    values = {'spec': chain.format_chain(spec), 'family': args.family, 'faces': spec.n}
    if args.seed is not None:
        values['seed'] = args.seed
    return Report(input=args.family, task='gen', values=values, caps=caps.to_dict()), EXIT_OK


def cmd_ztg(args, config: Config, caps: Caps) -> tuple:
    """Build Z(G) for a graph file that lists its faces.

    Args:
        args: Parsed flags; `export` optionally names an output file,
            `af_steps` adds af per node and the largest change along a link.
        config: Effective settings, used for the worker count.
        caps: Enumeration limits.

    Returns:
        (Report, exit code).

    Raises:
        BadFaceSetError: The file has no `f` lines.
    """
    doc = read_graph_file(args.input)
    if not doc.has_faces:
        raise BadFaceSetError(f"{args.input} lists no faces")
    faces = face_set_from_cycles(doc.graph, doc.interior_faces, doc.exterior_face)
    z = z_graph(doc.graph, faces, caps)
    values = {
        'nodes': len(z.nodes),
        'links': len(z.links),
        'connected': z_connected(z),
        'max_degree': max((z.degree(i) for i in range(len(z.nodes))), default=0),
    }
    af_values = None
    if args.af_steps:
        table = dict(af_table(doc.graph, caps, config.jobs))
        af_values = [table[m] for m in z.nodes]
        values['af_step_bound'] = af_step_bound(z, af_values)
    if args.export:
        if not DataExporter(doc.graph).export_z_graph(args.export, z, af_values):
            raise AfkitError(f"could not write {args.export}")
        values['export'] = args.export
    return Report(input=args.input, task='ztg', values=values, caps=caps.to_dict()), EXIT_OK


COMMANDS = {
    'exact': cmd_exact,
    'chain': cmd_chain,
    'verify': cmd_verify,
    'gen': cmd_gen,
    'ztg': cmd_ztg,
}


def _configure_logging(args, config: Config) -> None:
    level = logging.DEBUG if getattr(args, 'verbose', False) else getattr(logging, config.log_level)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    logging.getLogger().setLevel(level)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except AfkitError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config, caps = _settings(args)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _configure_logging(args, config)

    started = time.perf_counter()
    try:
        report, code = COMMANDS[args.command](args, config, caps)
    except AfkitError as e:
        logger.debug("command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    report.elapsed_seconds = round(time.perf_counter() - started, 6)
    if getattr(args, 'report', None) and not DataExporter().export_report_json(args.report, report):
        print(f"Error: could not write {args.report}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == 'gen' and config.format == 'text':
        print(report.values['spec'])
    elif args.command == 'chain' and args.task == 'realize' and 'graph' in report.values \
            and config.format == 'text':
        print(report.values['graph'], end='')
    else:
        print(report.render(config.format))
    return code
