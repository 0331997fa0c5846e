"""
GF(2^r) fast path for the column search
An element index is already the bit vector of its coordinates, so a column is a
machine word and a matrix-vector product is the exclusive-or of selected columns
"""
import logging
from typing import Sequence

import numpy as np

from app.exceptions import NotBinaryField
from app.gf_engine import FieldTable
from app.models import SearchCertificate, SearchConfig
from analyzers.search_core import run_search
from builders.colored_graphs import ColoredCayleyGraph

logger = logging.getLogger(__name__)

MAX_WORD_BITS = 8


def check_binary(field: FieldTable):
    if field.p != 2:
        raise NotBinaryField(f"{field.spec.label()} has characteristic {field.p}", p=field.p)
    if field.r > MAX_WORD_BITS:
        raise NotBinaryField(f"Byte path handles r <= {MAX_WORD_BITS}, got r = {field.r}", r=field.r)


class Gf2Kernel:
    fast_path = True

    def __init__(self, field: FieldTable):
        check_binary(field)
        self.field = field
        self.r = field.r
        self.low_mask = (1 << (self.r - 1)) - 1

    def add(self, candidates: np.ndarray, column: int) -> np.ndarray:
        return np.bitwise_xor(candidates, column)

    def span_table(self, prefix: Sequence[int]) -> np.ndarray:
        """Entry u is the exclusive-or of the prefix columns selected by the bits of u"""
        span = np.zeros(1 << len(prefix), dtype=np.int64)
        for i, column in enumerate(prefix):
            width = 1 << i
            span[width:2 * width] = span[:width] ^ column
        return span

    def leaf_images(self, prefix: Sequence[int], candidates: np.ndarray,
                    vectors: np.ndarray) -> np.ndarray:
        span = self.span_table(prefix)
        low = span[vectors & self.low_mask]
        top = (vectors >> (self.r - 1)) & 1
        return low[:, None] ^ (top[:, None] * candidates[None, :])


def gf2_fast_path(graph: ColoredCayleyGraph, search_config: SearchConfig) -> SearchCertificate:
    """Same contract as transposition_search, over machine words"""
    check_binary(graph.field)
    logger.debug("Byte path for %s with modulus %s", graph.label, list(graph.field.spec.poly))
    return run_search(graph, search_config, Gf2Kernel)
