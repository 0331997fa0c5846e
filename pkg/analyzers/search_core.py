"""
Exhaustive column-by-column search over GL_r(p)
Looks for a matrix inducing a prescribed color permutation, with pair-sum pruning,
vectorized leaf checks and work sharding at the first free column
"""
import logging
import multiprocessing as mp
import time
from dataclasses import dataclass, field as dataclass_field, replace
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import config as app_config
from app.exceptions import EnumerationTooLarge, ImpossibleTarget, InvalidSearchConfig
from app.gf_engine import FieldTable
from app.linear import LinearMap
from app.models import ColorPermutation, Outcome, SearchCertificate, SearchConfig
from builders.colored_graphs import ColoredCayleyGraph, color_classes

logger = logging.getLogger(__name__)


class PrimeFieldKernel:
    """Coordinate arithmetic used by the search; columns are element indices"""

    fast_path = False

    def __init__(self, field: FieldTable):
        self.field = field
        self.p = field.p
        self.r = field.r

    def add(self, candidates: np.ndarray, column: int) -> np.ndarray:
        return self.field.add_many(candidates, np.int64(column))

    def leaf_images(self, prefix: Sequence[int], candidates: np.ndarray,
                    vectors: np.ndarray) -> np.ndarray:
        """Images of vectors under [prefix | candidate], one column per candidate"""
        field = self.field
        coords = field.coords_table[vectors]
        head = np.zeros((len(vectors), self.r), dtype=np.int64)
        for i, column in enumerate(prefix):
            head += coords[:, i:i + 1] * field.coords_table[column][None, :]
        tail = field.coords_table[candidates]
        images = head[:, None, :] + coords[:, -1][:, None, None] * tail[None, :, :]
        return (images % self.p) @ field.weights


@dataclass
class ColumnPlan:
    """Candidate columns and the constraints derived from the target"""
    candidates: List[np.ndarray]
    basis_colors: List[int]
    pair_targets: np.ndarray
    expected: np.ndarray
    vectors: np.ndarray
    first_free: int

    @property
    def leaf_space(self) -> int:
        total = 1
        for column in self.candidates:
            total *= len(column)
        return total

    def below(self, column: int) -> int:
        """Leaves under one choice at this column"""
        total = 1
        for later in self.candidates[column + 1:]:
            total *= len(later)
        return total


def column_candidates(graph: ColoredCayleyGraph, target: ColorPermutation,
                      fix_first_column: bool = True) -> ColumnPlan:
    """Column i ranges over the elements colored target(color(e_i)), in discrete log order"""
    field = graph.field
    if target.k != graph.k:
        raise ImpossibleTarget(f"Target permutes {target.k} colors but {graph.label} has {graph.k}",
                               target=str(target))
    basis = [field.p ** i for i in range(field.r)]
    basis_colors = [graph.color(e) for e in basis]
    classes = color_classes(graph)

    candidates = [classes[target(c)] for c in basis_colors]
    first_free = 0
    if fix_first_column:
        if target(basis_colors[0]) != basis_colors[0]:
            raise InvalidSearchConfig("Pinning the first column needs the target to fix its color",
                                      color=basis_colors[0], target=str(target))
        candidates[0] = np.array([basis[0]], dtype=np.int64)
        first_free = 1
    empty = [i for i, column in enumerate(candidates) if not len(column)]
    if empty:
        raise ImpossibleTarget(f"No candidates for columns {empty}", columns=empty)

    r = field.r
    pair_targets = np.full((r, r), -1, dtype=np.int64)
    for j in range(r):
        for i in range(j + 1, r):
            pair_targets[j, i] = target(graph.color(field.add(basis[j], basis[i])))

    vectors = field.exp.copy()
    expected = np.asarray(target.images, dtype=np.int64)[graph.colors[vectors]]
    return ColumnPlan(candidates, basis_colors, pair_targets, expected, vectors, first_free)


def pair_sum_prune(graph: ColoredCayleyGraph, columns: Sequence[int], target: ColorPermutation) -> bool:
    """True when every chosen pair sums to a vector of the color the basis pair demands"""
    field = graph.field
    for i in range(len(columns)):
        for j in range(i):
            wanted = target(graph.color(field.add(field.p ** j, field.p ** i)))
            if graph.color(field.add(int(columns[j]), int(columns[i]))) != wanted:
                return False
    return True


@dataclass
class ShardResult:
    enumerated: int = 0
    pruned: int = 0
    witnesses: List[Tuple[int, ...]] = dataclass_field(default_factory=list)
    witness_count: int = 0
    # leaves accounted for at the first free column, before any descent
    root_enumerated: int = 0
    root_pruned: int = 0


class WitnessFlag:
    """Lowest shard index holding a witness, shared by every worker"""

    def __init__(self, value, lock):
        self.value = value
        self.lock = lock

    def claim(self, shard: int):
        with self.lock:
            if shard < self.value.value:
                self.value.value = shard

    def beaten(self, shard: int) -> bool:
        return self.value.value < shard


class ColumnSearch:
    """Depth-first search over one shard of the first free column"""

    poll_every = 64

    def __init__(self, graph: ColoredCayleyGraph, plan: ColumnPlan, search_config: SearchConfig,
                 kernel_cls=PrimeFieldKernel, shard: int = 0, flag: Optional[WitnessFlag] = None):
        self.graph = graph
        self.plan = plan
        self.config = search_config
        self.kernel = kernel_cls(graph.field)
        self.r = graph.field.r
        self.shard = shard
        self.flag = flag
        self.result = ShardResult()
        self._next_report = search_config.progress_interval
        self._stop = False
        self._polls = 0

    def run(self, first_choices: np.ndarray) -> ShardResult:
        plan = self.plan
        if plan.first_free >= self.r:
            self._check_leaves([], plan.candidates[-1], self.r - 1)
            return self.result
        prefix = [int(plan.candidates[0][0])] if plan.first_free == 1 else []
        self._descend(prefix, plan.first_free, np.asarray(first_choices, dtype=np.int64))
        return self.result

    def _should_stop(self) -> bool:
        if self._stop:
            return True
        if self.flag is not None and not self.config.counting:
            self._polls += 1
            if self._polls % self.poll_every == 0 and self.flag.beaten(self.shard):
                logger.debug("shard %d stops, an earlier shard holds a witness", self.shard)
                self._stop = True
        return self._stop

    def _descend(self, prefix: List[int], column: int, options: np.ndarray):
        survivors = self._prune(prefix, column, options)
        if column == self.r - 1:
            self._check_leaves(prefix, survivors, column)
            return
        for choice in survivors:
            if self._should_stop():
                return
            self._descend(prefix + [int(choice)], column + 1, self.plan.candidates[column + 1])

    def _prune(self, prefix: List[int], column: int, options: np.ndarray) -> np.ndarray:
        if not self.config.prune_pair_sums or not prefix:
            return options
        keep = np.ones(len(options), dtype=bool)
        colors = self.graph.colors
        for j, chosen in enumerate(prefix):
            sums = self.kernel.add(options, chosen)
            keep &= colors[sums] == self.plan.pair_targets[j, column]
        pruned = int((~keep).sum()) * self.plan.below(column)
        if column == self.plan.first_free:
            self.result.root_pruned += pruned
        self._count(pruned=pruned)
        return options[keep]

    def _check_leaves(self, prefix: List[int], leaves: np.ndarray, column: int):
        if column == self.plan.first_free:
            self.result.root_enumerated += len(leaves)
        self._count(enumerated=len(leaves))
        alive = leaves
        plan, colors = self.plan, self.graph.colors
        start, block = 0, 8
        while alive.size and start < len(plan.vectors):
            stop = min(start + block, len(plan.vectors))
            images = self.kernel.leaf_images(prefix, alive, plan.vectors[start:stop])
            ok = np.all(colors[images] == plan.expected[start:stop, None], axis=0)
            alive = alive[ok]
            start, block = stop, min(block * 2, 512)

        for last in alive:
            self.result.witness_count += 1
            if self.config.collect_witnesses or not self.result.witnesses:
                self.result.witnesses.append(tuple(prefix) + (int(last),))
            if not self.config.counting:
                self._stop = True
                if self.flag is not None:
                    self.flag.claim(self.shard)
                return

    def _count(self, enumerated: int = 0, pruned: int = 0):
        self.result.enumerated += enumerated
        self.result.pruned += pruned
        covered = self.result.enumerated + self.result.pruned
        if covered >= self._next_report:
            logger.info("shard %d of %s: %d enumerated, %d pruned, %d of %d leaves covered",
                        self.shard, self.graph.label, self.result.enumerated, self.result.pruned,
                        covered, self.plan.leaf_space)
            interval = self.config.progress_interval
            self._next_report = (covered // interval + 1) * interval


def _run_shard(shard: int, choices: np.ndarray, graph: ColoredCayleyGraph, plan: ColumnPlan,
               search_config: SearchConfig, kernel_cls, flag: Optional[WitnessFlag]) -> ShardResult:
    return ColumnSearch(graph, plan, search_config, kernel_cls, shard, flag).run(choices)


def _split(options: np.ndarray, parts: int) -> List[np.ndarray]:
    return [chunk for chunk in np.array_split(options, parts) if chunk.size]


def merge_shards(shards: List[ShardResult], counting: bool) -> ShardResult:
    """Totals of a single in-order pass over the shards

    Without counting, the pass ends at the first shard holding a witness; later
    shards contribute only the leaves a single pass settles at the first free column.
    """
    merged = ShardResult()
    winner = None if counting else next((i for i, s in enumerate(shards) if s.witness_count), None)
    for index, shard in enumerate(shards):
        if winner is not None and index > winner:
            merged.enumerated += shard.root_enumerated
            merged.pruned += shard.root_pruned
            continue
        merged.enumerated += shard.enumerated
        merged.pruned += shard.pruned
        merged.witnesses.extend(shard.witnesses)
        merged.witness_count += shard.witness_count
    return merged


def run_search(graph: ColoredCayleyGraph, search_config: SearchConfig,
               kernel_cls=PrimeFieldKernel) -> SearchCertificate:
    """Search GL_r(p) for matrices inducing search_config.target

    The certificate counts leaves reached (enumerated) and leaves cut off by
    pair-sum pruning; on exhaustion the two add up to the constrained leaf space.
    Outcome, witness and totals do not depend on the worker count.
    """
    search_config.validate()
    plan = column_candidates(graph, search_config.target, search_config.fix_first_column)
    started = time.perf_counter()
    first = plan.candidates[min(plan.first_free, graph.field.r - 1)]

    threads = search_config.thread_count
    if threads == 1 or plan.first_free >= graph.field.r:
        shards = [ColumnSearch(graph, plan, search_config, kernel_cls).run(first)]
    else:
        chunks = _split(first, min(len(first), threads * 4))
        with mp.Manager() as manager:
            flag = WitnessFlag(manager.Value('i', len(chunks)), manager.Lock())
            worker = partial(_run_shard, graph=graph, plan=plan, search_config=search_config,
                             kernel_cls=kernel_cls, flag=flag)
            with mp.Pool(processes=threads) as pool:
                shards = pool.starmap(worker, list(enumerate(chunks)))
        logger.info("%s: merged %d shards from %d workers", graph.label, len(chunks), threads)

    return _certificate(graph, plan, search_config, shards, time.perf_counter() - started, kernel_cls)


def _certificate(graph: ColoredCayleyGraph, plan: ColumnPlan, search_config: SearchConfig,
                 shards: List[ShardResult], elapsed: float, kernel_cls) -> SearchCertificate:
    field = graph.field
    merged = merge_shards(shards, search_config.counting)
    matrices = [LinearMap.from_column_indices(w, field) for w in merged.witnesses]
    count = merged.witness_count
    if not search_config.counting:
        matrices = matrices[:1]
        count = min(count, 1)

    certificate = SearchCertificate(
        outcome=Outcome.WITNESS_FOUND if matrices else Outcome.EXHAUSTED,
        candidates_enumerated=merged.enumerated,
        candidates_pruned=merged.pruned,
        leaf_space=plan.leaf_space,
        wall_time_s=elapsed,
        config=search_config.to_dict(),
        witness=matrices[0] if matrices else None,
        witness_count=count,
        witnesses=matrices if search_config.collect_witnesses else [],
        graph_label=graph.label,
        fast_path=kernel_cls.fast_path,
        shards=len(shards)
    )
    logger.info("%s target %s: %s after %d enumerated + %d pruned of %d leaves in %.2fs",
                graph.label, search_config.target, certificate.outcome.value,
                certificate.candidates_enumerated, certificate.candidates_pruned,
                certificate.leaf_space, elapsed)
    return certificate


def _kernel_for(graph: ColoredCayleyGraph, search_config: SearchConfig):
    if not search_config.fast_gf2:
        return PrimeFieldKernel
    # gf2_search builds on this module
    from analyzers.gf2_search import Gf2Kernel, check_binary
    check_binary(graph.field)
    return Gf2Kernel


def transposition_search(graph: ColoredCayleyGraph, search_config: SearchConfig) -> SearchCertificate:
    return run_search(graph, search_config, _kernel_for(graph, search_config))


def cyclic_search(graph: ColoredCayleyGraph, search_config: SearchConfig) -> SearchCertificate:
    """As transposition_search; the first column is left free when the target moves its color"""
    first_color = graph.color(1)
    if search_config.fix_first_column and search_config.target(first_color) != first_color:
        logger.info("Target %s moves color %d, searching every first column",
                    search_config.target, first_color)
        search_config = replace(search_config, fix_first_column=False)
    return run_search(graph, search_config, _kernel_for(graph, search_config))


def stabilizer_count(graph: ColoredCayleyGraph, search_config: Optional[SearchConfig] = None,
                     collect: bool = False) -> SearchCertificate:
    """Count the invertible matrices inducing the identity color permutation"""
    search_config = search_config or SearchConfig(target=ColorPermutation.identity(graph.k))
    search_config = replace(search_config, fix_first_column=False, counting=True,
                            collect_witnesses=collect or search_config.collect_witnesses)
    if not search_config.target.is_identity():
        raise InvalidSearchConfig("Stabilizer counting needs the identity target",
                                  target=str(search_config.target))
    plan = column_candidates(graph, search_config.target, fix_first_column=False)
    if plan.leaf_space > app_config.MAX_GROUP_ORDER:
        raise EnumerationTooLarge(f"{plan.leaf_space} constrained matrices exceed {app_config.MAX_GROUP_ORDER}",
                                  leaf_space=plan.leaf_space)
    return run_search(graph, search_config, _kernel_for(graph, search_config))
