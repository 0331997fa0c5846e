"""
Data models for TSC Graphs
Color permutations, search configurations, certificates and report records
"""
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from math import factorial, lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app import __version__
from app.exceptions import InvalidSearchConfig, ParseError
from app.linear import LinearMap


class ColorPermutation:
    """Bijection on colors 0..k-1, stored as its image list"""

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ParseError(f"Not a permutation of colors: {list(images)}")
        self.images = images

    @property
    def k(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, k: int) -> 'ColorPermutation':
        return cls(range(k))

    @classmethod
    def from_cycles(cls, k: int, cycles: Sequence[Sequence[int]]) -> 'ColorPermutation':
        images = list(range(k))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, k: int) -> 'ColorPermutation':
        """'1,2' is the transposition (1 2); '0,1,2,3,4' a cycle"""
        try:
            cycle = [int(t) for t in text.replace('(', '').replace(')', '').replace(' ', ',').split(',') if t]
        except ValueError:
            raise ParseError(f"Cannot parse color cycle '{text}'")
        if any(c < 0 or c >= k for c in cycle) or len(set(cycle)) != len(cycle):
            raise ParseError(f"Color cycle '{text}' is not valid for {k} colors")
        if not cycle:
            return cls.identity(k)
        return cls.from_cycles(k, [cycle])

    def __call__(self, color: int) -> int:
        return self.images[color]

    def compose(self, other: 'ColorPermutation') -> 'ColorPermutation':
        """self after other"""
        return ColorPermutation([self.images[other.images[c]] for c in range(self.k)])

    def inverse(self) -> 'ColorPermutation':
        inv = [0] * self.k
        for c, img in enumerate(self.images):
            inv[img] = c
        return ColorPermutation(inv)

    def is_identity(self) -> bool:
        return all(c == img for c, img in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.k):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def order(self) -> int:
        result = 1
        for cycle in self.cycles():
            result = lcm(result, len(cycle))
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ColorPermutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(c) for c in cycle) + ")" for cycle in cycles)

    def __repr__(self) -> str:
        return f"ColorPermutation({list(self.images)})"

    def to_dict(self) -> Dict[str, Any]:
        return {'images': list(self.images), 'cycles': str(self)}


@dataclass
class SearchConfig:
    """Parameters of a column-by-column search over GL_r(p)"""
    target: ColorPermutation
    fix_first_column: bool = True
    prune_pair_sums: bool = True
    thread_count: int = 1
    progress_interval: int = 10_000_000
    counting: bool = False
    collect_witnesses: bool = False
    fast_gf2: bool = False

    def validate(self) -> 'SearchConfig':
        if self.thread_count < 1:
            raise InvalidSearchConfig("thread_count must be positive", thread_count=self.thread_count)
        if self.progress_interval < 1:
            raise InvalidSearchConfig("progress_interval must be positive")
        if self.fix_first_column and self.target(0) != 0:
            raise InvalidSearchConfig(
                "First-column normalization requires the target to fix color 0",
                target=str(self.target))
        if self.counting and self.fix_first_column:
            raise InvalidSearchConfig("Counting mode enumerates every first column; "
                                      "disable fix_first_column")
        return self

    def to_dict(self, include_threads: bool = True) -> Dict[str, Any]:
        data = {
            'target': list(self.target.images),
            'target_cycles': str(self.target),
            'fix_first_column': self.fix_first_column,
            'prune_pair_sums': self.prune_pair_sums,
            'progress_interval': self.progress_interval,
            'counting': self.counting,
            'fast_gf2': self.fast_gf2
        }
        if include_threads:
            data['thread_count'] = self.thread_count
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SearchConfig':
        try:
            return cls(
                target=ColorPermutation(data['target']),
                fix_first_column=bool(data.get('fix_first_column', True)),
                prune_pair_sums=bool(data.get('prune_pair_sums', True)),
                thread_count=int(data.get('thread_count', 1)),
                progress_interval=int(data.get('progress_interval', 10_000_000)),
                counting=bool(data.get('counting', False)),
                fast_gf2=bool(data.get('fast_gf2', False)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed search config: {e}")


class Outcome(str, Enum):
    WITNESS_FOUND = "WITNESS_FOUND"
    EXHAUSTED = "EXHAUSTED"


@dataclass
class SearchCertificate:
    """Witness matrix, or proof that the constrained space was exhausted"""
    outcome: Outcome
    candidates_enumerated: int
    candidates_pruned: int
    leaf_space: int
    wall_time_s: float
    config: Dict[str, Any]
    witness: Optional[LinearMap] = None
    witness_count: int = 0
    witnesses: List[LinearMap] = field(default_factory=list)
    graph_label: str = ""
    fast_path: bool = False
    shards: int = 1
    cache_hit: bool = False
    manifest_id: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.outcome == Outcome.WITNESS_FOUND

    @property
    def covered(self) -> int:
        return self.candidates_enumerated + self.candidates_pruned

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            'outcome': self.outcome.value,
            'witness': self.witness.to_dict() if self.witness is not None else None,
            'candidates_enumerated': self.candidates_enumerated,
            'candidates_pruned': self.candidates_pruned,
            'leaf_space': self.leaf_space,
            'witness_count': self.witness_count,
            'graph_label': self.graph_label,
            'fast_path': self.fast_path,
            'shards': self.shards,
            'cache_hit': self.cache_hit,
            'manifest_id': self.manifest_id,
            'config': self.config
        }
        if include_timing:
            data['wall_time_s'] = round(self.wall_time_s, 6)
        if self.witnesses:
            data['witnesses'] = [w.to_dict() for w in self.witnesses]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SearchCertificate':
        try:
            witness = data.get('witness')
            return cls(
                outcome=Outcome(data['outcome']),
                candidates_enumerated=int(data['candidates_enumerated']),
                candidates_pruned=int(data['candidates_pruned']),
                leaf_space=int(data.get('leaf_space', 0)),
                wall_time_s=float(data.get('wall_time_s', 0.0)),
                config=dict(data.get('config', {})),
                witness=LinearMap.from_dict(witness) if witness else None,
                witness_count=int(data.get('witness_count', 0)),
                witnesses=[LinearMap.from_dict(w) for w in data.get('witnesses', [])],
                graph_label=data.get('graph_label', ''),
                fast_path=bool(data.get('fast_path', False)),
                shards=int(data.get('shards', 1)),
                cache_hit=bool(data.get('cache_hit', False)),
                manifest_id=data.get('manifest_id'),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed certificate: {e}")


def sha256_hex(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def canonical_json(data: Any) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(',', ':')).encode('utf-8')


class RunManifest:
    """Provenance of one CLI invocation; the only place timestamps live"""

    def __init__(self, command_line: Sequence[str], input_hashes: Optional[Dict[str, str]] = None):
        self.command_line = list(command_line)
        self.input_hashes = dict(input_hashes or {})
        self.tool_version = __version__
        self.started_at = datetime.now(timezone.utc)
        self.finished_at: Optional[datetime] = None
        self.output_paths: List[str] = []

    @property
    def manifest_id(self) -> str:
        return sha256_hex(canonical_json({
            'command_line': self.command_line,
            'input_hashes': self.input_hashes,
            'tool_version': self.tool_version
        }))[:16]

    def add_input(self, name: str, payload: bytes):
        self.input_hashes[name] = sha256_hex(payload)

    def add_output(self, path: str):
        self.output_paths.append(path)

    def finish(self):
        self.finished_at = datetime.now(timezone.utc)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'manifest_id': self.manifest_id,
            'command_line': self.command_line,
            'input_hashes': self.input_hashes,
            'tool_version': self.tool_version,
            'started_at': self.started_at.isoformat(),
            'finished_at': self.finished_at.isoformat() if self.finished_at else None,
            'output_paths': self.output_paths
        }


class Verdict(str, Enum):
    TSC = "TSC"
    NOT_TSC = "NOT_TSC"
    UNRESOLVED = "UNRESOLVED"


def close_color_group(generators: Sequence[ColorPermutation], k: int) -> List[ColorPermutation]:
    """All products of the generators, sorted by image list"""
    identity = ColorPermutation.identity(k)
    group = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for elem in frontier:
            for gen in generators:
                product = gen.compose(elem)
                if product not in group:
                    group.add(product)
                    fresh.append(product)
        frontier = fresh
    return sorted(group, key=lambda g: g.images)


@dataclass
class ColorGroupSummary:
    """Subgroup of S_k generated by induced color permutations"""
    k: int
    order: int
    is_transitive: bool
    is_cyclic: bool
    is_symmetric: bool
    generators: List[ColorPermutation] = field(default_factory=list)

    @classmethod
    def from_generators(cls, generators: Sequence[ColorPermutation], k: int) -> 'ColorGroupSummary':
        group = close_color_group(generators, k)
        orbit = {g(0) for g in group} if k else set()
        return cls(
            k=k,
            order=len(group),
            is_transitive=len(orbit) == k,
            is_cyclic=any(g.order() == len(group) for g in group),
            is_symmetric=len(group) == factorial(k),
            generators=list(generators)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'order': self.order,
            'is_transitive': self.is_transitive,
            'is_cyclic': self.is_cyclic,
            'is_symmetric': self.is_symmetric,
            'generators': [str(g) for g in self.generators]
        }
