"""
JSON import and export of graphs, partitions, generators, certificates and reports
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional

from app.exceptions import ParseError
from app.gf_engine import FieldTable
from app.linear import AffineMap, LinearMap
from app.models import RunManifest, SearchCertificate
from analyzers.semilinear import FoulserTriple, GammaElem
from builders.colored_graphs import ColoredCayleyGraph, DirectionPartition

logger = logging.getLogger(__name__)


def dumps(data: Any) -> str:
    """Stable text form: sorted keys, two-space indent, trailing newline"""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(data: Any, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(dumps(data))
    logger.debug("Wrote %s", path)
    return path


def read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}", path=path)
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}", path=path)


def read_bytes(path: str) -> bytes:
    try:
        with open(path, 'rb') as handle:
            return handle.read()
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}", path=path)


# Graphs

def export_graph(graph: ColoredCayleyGraph, path: str) -> str:
    return write_json(graph.to_dict(), path)


def import_graph(path: str) -> ColoredCayleyGraph:
    return ColoredCayleyGraph.from_dict(_expect_dict(read_json(path), path))


def import_partition(path: str) -> DirectionPartition:
    return DirectionPartition.from_dict(_expect_dict(read_json(path), path))


# Generators

def parse_generator(data: Dict[str, Any], field: FieldTable) -> Any:
    """{'entries': ...} is a matrix, {'linear': ...} an affine map, {'e': .., 's': ..} omega^e alpha^s"""
    if not isinstance(data, dict):
        raise ParseError(f"Generator record must be an object, got {type(data).__name__}")
    if 'linear' in data:
        return AffineMap.from_dict(data)
    if 'entries' in data:
        return LinearMap.from_dict({'p': data.get('p', field.p), 'entries': data['entries']})
    if 'e' in data:
        try:
            return GammaElem(int(data['e']) % field.n, int(data.get('s', 0)) % field.r)
        except (TypeError, ValueError) as e:
            raise ParseError(f"Malformed semilinear generator: {e}")
    raise ParseError(f"Unrecognized generator record with keys {sorted(data)}")


def import_generators(path: str, field: FieldTable) -> List[Any]:
    """A list of generator records, or {'triple': {d, e, s}} for a standard form"""
    data = read_json(path)
    if isinstance(data, dict) and 'triple' in data:
        triple = data['triple']
        try:
            return FoulserTriple(int(triple['d']), int(triple['e']), int(triple['s'])).validate(field).generators(field)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed triple in {path}: {e}")
    if isinstance(data, dict):
        data = data.get('generators', data.get('witnesses'))
    if not isinstance(data, list):
        raise ParseError(f"{path} must hold a list of generators")
    return [parse_generator(item.get('map', item) if isinstance(item, dict) else item, field) for item in data]


# Certificates and reports

def export_certificate(certificate: SearchCertificate, path: str,
                       manifest: Optional[RunManifest] = None, include_timing: bool = True) -> str:
    if manifest is not None:
        certificate.manifest_id = manifest.manifest_id
        manifest.add_output(path)
    return write_json(certificate.to_dict(include_timing), path)


def import_certificate(path: str) -> SearchCertificate:
    return SearchCertificate.from_dict(_expect_dict(read_json(path), path))


def export_report(report: Dict[str, Any], path: str, manifest: Optional[RunManifest] = None) -> str:
    if manifest is not None:
        manifest.add_output(path)
        report = dict(report, manifest_id=manifest.manifest_id)
    return write_json(report, path)


def import_report(path: str) -> Dict[str, Any]:
    data = _expect_dict(read_json(path), path)
    if 'cases' not in data:
        raise ParseError(f"{path} is not a classification report", path=path)
    return data


def manifest_path(out_path: str) -> str:
    root, _ = os.path.splitext(out_path)
    return f"{root}.manifest.json"


def _expect_dict(data: Any, path: str) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise ParseError(f"{path} must hold a JSON object", path=path)
    return data
