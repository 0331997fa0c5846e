"""
Main entry point for TSC Graphs
Command-line driver: fields, graphs, standard forms, verification, isomorphism,
certified searches, the classification replay and the certificate cache
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Add app directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from app.config import config
from app.database import certificate_cache, cache_key
from app.exceptions import ParseError, TscError
from app.gf_engine import build_field
from app.models import ColorPermutation, RunManifest, SearchConfig
from analyzers.isomorphism import iso_colored
from analyzers.search_core import cyclic_search, stabilizer_count, transposition_search
from analyzers.semilinear import (FoulserTriple, enumerate_color_transitive_overgroups,
                                  enumerate_k_equal_orbit_subgroups, orbit_graph, orbit_partition)
from analyzers.symmetry import (exchange_witnesses, lines_monochromatic, linear_stabilizer,
                                monochromatic_lines_report, verify_tsc)
from builders import catalog
from builders.colored_graphs import (direction_graph, g3_11, g3_5, gp_k, merge_colors, orbital_graph,
                                     paley, partition_direction_graph, peisert)
from reports import exporters
from reports.replay import replay_classification
from reports.tables import classification_frame, compare_with_fixture, load_fixture, line_correspondence

logger = logging.getLogger("tsc")

GRAPH_FAMILIES = ['gp', 'paley', 'peisert', 'g3_5', 'g3_11', 'direction', 'partition', 'orbit', 'orbital', 'merge']


def parse_ints(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(t) for t in text.replace(' ', '').split(',') if t]
    except ValueError:
        raise ParseError(f"Expected comma-separated integers, got '{text}'")


def parse_triple(text: str) -> FoulserTriple:
    values = parse_ints(text)
    if len(values) != 3:
        raise ParseError(f"A standard form is 'd,e,s', got '{text}'")
    return FoulserTriple(*values)


def parse_cases(text: Optional[str]) -> Optional[List[Tuple[int, int, int]]]:
    """'3,4,4;7,4,5' -> [(3, 4, 4), (7, 4, 5)]"""
    if not text:
        return None
    cases = []
    for chunk in text.split(';'):
        values = parse_ints(chunk)
        if len(values) != 3:
            raise ParseError(f"A case is 'p,r,k', got '{chunk}'")
        cases.append(tuple(values))
    return cases


def load_graph(path: str, manifest: RunManifest):
    manifest.add_input(path, exporters.read_bytes(path))
    return exporters.import_graph(path)


# Subcommands

def cmd_field(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    field = build_field(args.p, args.r, parse_ints(args.poly), parse_ints(args.omega))
    record = field.to_dict()
    if args.table:
        record['exp'] = field.exp.tolist()
    return record, f"✅ GF({field.q}) with modulus {record['poly']} and omega {record['omega']}"


def cmd_graph(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    family = args.family
    needs = {'gp': ['p', 'k'], 'paley': ['p'], 'peisert': ['p'], 'direction': ['p'], 'partition': ['p', 'partition'],
             'orbit': ['p', 'triple'], 'orbital': ['p', 'generators'], 'merge': ['graph', 'surjection']}
    missing = [name for name in needs.get(family, []) if getattr(args, name) is None]
    if missing:
        raise ParseError(f"graph build {family} needs --{', --'.join(missing)}")
    if family in ('gp', 'paley', 'peisert', 'orbit', 'orbital'):
        field = catalog.preset_field(args.p, args.r)
    if family == 'gp':
        graph = gp_k(field, args.k)
    elif family == 'paley':
        graph = paley(field)
    elif family == 'peisert':
        graph = peisert(field)
    elif family == 'g3_5':
        graph = g3_5(catalog.G3_5_ALTERNATIVES[args.variant] if args.variant else None)
    elif family == 'g3_11':
        graph = g3_11()
    elif family == 'direction':
        graph = direction_graph(build_field(args.p, args.m), args.d)
    elif family == 'partition':
        manifest.add_input(args.partition, exporters.read_bytes(args.partition))
        graph = partition_direction_graph(build_field(args.p, args.m), args.d,
                                          exporters.import_partition(args.partition))
    elif family == 'orbit':
        graph = orbit_graph(parse_triple(args.triple), field)
    elif family == 'orbital':
        manifest.add_input(args.generators, exporters.read_bytes(args.generators))
        graph = orbital_graph(args.p, args.r, exporters.import_generators(args.generators, field), field)
    else:
        graph = merge_colors(load_graph(args.graph, manifest), parse_ints(args.surjection))
    return graph.to_dict(), f"✅ {graph.label}: {graph.vertex_count} vertices, {graph.k} colors"


def cmd_foulser(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    field = catalog.preset_field(args.p, args.r)
    triples = enumerate_k_equal_orbit_subgroups(field, args.k, overgroup_filter=not args.all)
    rows = []
    for triple in triples:
        row = {
            'triple': triple.to_dict(),
            'order': triple.order(field),
            'orbits': [orbit.tolist() for orbit in orbit_partition(triple, field)]
        }
        if args.overgroups:
            row['overgroups'] = [c.to_dict() for c in enumerate_color_transitive_overgroups(triple, field, args.k)]
        rows.append(row)
    return {'p': args.p, 'r': args.r, 'k': args.k, 'triples': rows}, \
        f"✅ {len(rows)} standard forms with {args.k} equal orbits in GF({field.q})"


def _stabilizer(spec: str, graph, manifest: RunManifest):
    if spec == 'linear':
        return linear_stabilizer(graph)
    if os.path.exists(spec):
        manifest.add_input(spec, exporters.read_bytes(spec))
        return exporters.import_generators(spec, graph.field)
    return parse_triple(spec)


def cmd_verify(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    graph = load_graph(args.graph, manifest)
    if args.check == 'lines':
        report = lines_monochromatic(graph)
        record = dict(report.to_dict(), lines=monochromatic_lines_report(graph))
        marker = "✅" if report.monochromatic else "⚠️"
        return record, f"{marker} {graph.label}: lines monochromatic = {report.monochromatic}"
    if args.check == 'correspondence':
        rows = line_correspondence(graph)
        record: Dict[str, Any] = {'rows': rows}
        if args.fixture:
            record['mismatches'] = compare_with_fixture(rows, load_fixture(args.fixture))
            marker = "✅" if not record['mismatches'] else "❌"
            return record, f"{marker} {len(record['mismatches'])} rows differ from {args.fixture}"
        return record, f"✅ {len(rows)} rows for {graph.label}"

    stabilizer = _stabilizer(args.stabilizer, graph, manifest)
    witnesses: List[Any] = []
    for path in args.witness or []:
        manifest.add_input(path, exporters.read_bytes(path))
        witnesses.extend(exporters.import_generators(path, graph.field))
    if args.exchange_search:
        witnesses.extend(exchange_witnesses(graph, args.threads).maps)
    report = verify_tsc(graph, stabilizer, witnesses)
    marker = {"TOTALLY_SYMMETRIC": "✅", "NOT_TOTALLY_SYMMETRIC": "❌"}.get(report.verdict.value, "⚠️")
    return report.to_dict(), f"{marker} {graph.label}: {report.verdict.value} ({report.reason})"


def cmd_iso(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    a = load_graph(args.a, manifest)
    b = load_graph(args.b, manifest)
    result = iso_colored(a, b, permute_colors=args.permute_colors, method=args.method)
    if result is None:
        return {'isomorphic': False}, f"❌ {a.label} and {b.label} are not isomorphic"
    return result.to_dict(), f"✅ {a.label} ~ {b.label} (colors {result.color_map})"


def cmd_search(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    graph = load_graph(args.graph, manifest)
    if args.mode == 'stabilizer':
        target = ColorPermutation.identity(graph.k)
    else:
        target = ColorPermutation.parse(args.colors, graph.k)
    search_config = SearchConfig(
        target=target,
        fix_first_column=not args.free_first_column and args.mode != 'stabilizer',
        prune_pair_sums=not args.no_prune,
        thread_count=args.threads,
        progress_interval=config.PROGRESS_INTERVAL,
        counting=args.mode == 'stabilizer',
        fast_gf2=args.fast_gf2
    )

    key = cache_key(graph.to_dict(), search_config)
    certificate = None if args.no_cache else certificate_cache.get(key)
    if certificate is None:
        if args.mode == 'stabilizer':
            certificate = stabilizer_count(graph, search_config)
        elif args.mode == 'cyclic':
            certificate = cyclic_search(graph, search_config)
        else:
            certificate = transposition_search(graph, search_config)
        if not args.no_cache:
            certificate_cache.put(key, certificate, kind=args.mode)
    certificate.manifest_id = manifest.manifest_id

    if certificate.found:
        summary = f"✅ {graph.label} {target}: witness {certificate.witness.entries.tolist()}"
    else:
        summary = f"❌ {graph.label} {target}: exhausted {certificate.covered} of {certificate.leaf_space} leaves"
    if args.mode == 'stabilizer':
        summary = f"✅ {graph.label}: {certificate.witness_count} matrices fix every color"
    if certificate.cache_hit:
        summary += " (cached)"
    return certificate.to_dict(), summary


def cmd_replay(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    report = replay_classification(parse_cases(args.cases), include_long=args.include_long,
                                   with_big_searches=args.with_big_searches, thread_count=args.threads,
                                   cache=None if args.no_cache else certificate_cache)
    report.manifest_id = manifest.manifest_id
    record = report.to_dict()
    frame = classification_frame(record)
    if not frame.empty:
        print(frame.to_string(index=False))
    counts = ", ".join(f"{value} {key}" for key, value in record['summary'].items())
    return record, f"📊 Replayed {len(report.cases)} cases: {counts}"


def cmd_cache(args, manifest: RunManifest) -> Tuple[Dict[str, Any], str]:
    if args.action == 'clear':
        removed = certificate_cache.clear()
        return {'removed': removed}, f"🧹 Removed {removed} cached certificates"
    entries = certificate_cache.list_entries()
    if not entries.empty:
        print(entries.to_string(index=False))
    return {'entries': entries.to_dict(orient='records')}, f"💾 {len(entries)} cached certificates"


COMMANDS = {
    'field': cmd_field,
    'graph': cmd_graph,
    'foulser': cmd_foulser,
    'verify': cmd_verify,
    'iso': cmd_iso,
    'search': cmd_search,
    'replay': cmd_replay,
    'cache': cmd_cache,
}


def _add_common_flags(parser: argparse.ArgumentParser, suppress: bool = False):
    """Flags accepted before or after the subcommand; after it they only override when given"""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument('--threads', type=int, default=default(config.THREADS), help="worker processes for searches")
    parser.add_argument('--cache-dir', default=default(None), help="certificate cache directory")
    parser.add_argument('--out', default=default(None), help="write JSON here instead of standard output")
    parser.add_argument('--log-level', default=default(config.LOG_LEVEL))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='tsc', description="Totally symmetric colored graph toolkit")
    _add_common_flags(parser)
    common = argparse.ArgumentParser(add_help=False)
    _add_common_flags(common, suppress=True)
    sub = parser.add_subparsers(dest='command', required=True)

    field = sub.add_parser('field', parents=[common], help="build a finite field")
    field.add_argument('action', choices=['build'])
    field.add_argument('--p', type=int, required=True)
    field.add_argument('--r', type=int, required=True)
    field.add_argument('--poly', help="modulus coefficients c0,...,cr")
    field.add_argument('--omega', help="primitive root coordinates a0,...,a(r-1)")
    field.add_argument('--table', action='store_true', help="include the exponent table")

    graph = sub.add_parser('graph', parents=[common], help="build a colored graph")
    graph.add_argument('action', choices=['build'])
    graph.add_argument('family', choices=GRAPH_FAMILIES)
    graph.add_argument('--p', type=int)
    graph.add_argument('--r', type=int, default=1)
    graph.add_argument('--k', type=int)
    graph.add_argument('--m', type=int, default=1, help="q = p^m for direction graphs")
    graph.add_argument('--d', type=int, default=2)
    graph.add_argument('--partition', help="direction partition JSON")
    graph.add_argument('--triple', help="standard form d,e,s")
    graph.add_argument('--generators', help="generator list JSON")
    graph.add_argument('--graph', help="graph JSON to recolor")
    graph.add_argument('--surjection', help="old color -> new color, comma separated")
    graph.add_argument('--variant', choices=sorted(catalog.G3_5_ALTERNATIVES))

    foulser = sub.add_parser('foulser', parents=[common], help="standard forms with k equal orbits")
    foulser.add_argument('action', choices=['enumerate'])
    foulser.add_argument('--p', type=int, required=True)
    foulser.add_argument('--r', type=int, required=True)
    foulser.add_argument('--k', type=int, required=True)
    foulser.add_argument('--overgroups', action='store_true')
    foulser.add_argument('--all', action='store_true', help="skip the overgroup filter")

    verify = sub.add_parser('verify', parents=[common], help="symmetry checks on a graph")
    verify.add_argument('check', choices=['tsc', 'lines', 'correspondence'])
    verify.add_argument('--graph', required=True)
    verify.add_argument('--stabilizer', default='linear', help="'linear', 'd,e,s' or a generator file")
    verify.add_argument('--witness', nargs='*', help="generator files")
    verify.add_argument('--exchange-search', action='store_true')
    verify.add_argument('--fixture', help="correspondence fixture to compare against")

    iso = sub.add_parser('iso', parents=[common], help="colored graph isomorphism")
    iso.add_argument('a')
    iso.add_argument('b')
    iso.add_argument('--permute-colors', action='store_true')
    iso.add_argument('--method', choices=['refine', 'vf2'], default='refine')

    search = sub.add_parser('search', parents=[common], help="certified search over GL_r(p)")
    search.add_argument('mode', choices=['transposition', 'cyclic', 'stabilizer'])
    search.add_argument('--graph', required=True)
    search.add_argument('--colors', default="1,2", help="cycle of colors, e.g. '1,2'")
    search.add_argument('--no-prune', action='store_true')
    search.add_argument('--fast-gf2', action='store_true')
    search.add_argument('--free-first-column', action='store_true')
    search.add_argument('--no-cache', action='store_true')

    replay = sub.add_parser('replay', parents=[common], help="replay the classification cases")
    replay.add_argument('--cases', help="'p,r,k;p,r,k'")
    replay.add_argument('--include-long', action='store_true')
    replay.add_argument('--with-big-searches', action='store_true')
    replay.add_argument('--no-cache', action='store_true')

    cache = sub.add_parser('cache', parents=[common], help="inspect the certificate cache")
    cache.add_argument('action', choices=['list', 'clear'])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point"""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    manifest = RunManifest(['tsc'] + argv)

    try:
        config.validate_config()
        if args.cache_dir:
            certificate_cache.use_directory(args.cache_dir)
        payload, summary = COMMANDS[args.command](args, manifest)
    except TscError as e:
        logger.debug("Command failed", exc_info=True)
        print(f"❌ {type(e).__name__}: {e.message}")
        return 2

    manifest.finish()
    if args.out:
        exporters.write_json(payload, args.out)
        manifest.add_output(args.out)
        exporters.write_json(manifest.to_dict(), exporters.manifest_path(args.out))
        print(summary)
        print(f"💾 Wrote {args.out}")
    else:
        print(summary)
        print(exporters.dumps(payload), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
