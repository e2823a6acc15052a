"""Finite graphs with involutive oriented edges, edge paths and metrics.

Oriented edges reuse the word alphabet: the i-th edge pair is written with
the lowercase letter ``chr(97 + i)`` and its reversal with the matching
uppercase letter.  On a rose, edge paths and group words coincide, so the
word routines do all the heavy lifting.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .words import MAX_RANK, invert_word, letter_index, reduce_word

_LOWER = "abcdefghijklmnopqrstuvwxyz"


class Graph:
    """A connected graph given by a vertex count and edge-pair endpoints.

    ``endpoints[i] = (origin, terminus)`` describes the positively oriented
    i-th edge.  The reversal swaps the endpoints; the involution has no fixed
    oriented edge by construction.
    """

    def __init__(self, vertex_count: int, endpoints):
        endpoints = [tuple(pair) for pair in endpoints]
        if vertex_count < 1:
            raise InputError("graph needs at least one vertex")
        if not endpoints:
            raise InputError("graph needs at least one edge")
        if len(endpoints) > MAX_RANK:
            raise InputError(f"at most {MAX_RANK} edge pairs are supported by the letter encoding")
        for i, (o, t) in enumerate(endpoints):
            if not (0 <= o < vertex_count and 0 <= t < vertex_count):
                raise InputError(f"edge {_LOWER[i]!r} has endpoints ({o}, {t}) outside 0..{vertex_count - 1}")
        self.vertex_count = vertex_count
        self.edge_pairs = len(endpoints)
        self.endpoints = tuple(endpoints)
        # origin of each oriented edge, indexed by letter
        self._origin = {}
        for i, (o, t) in enumerate(endpoints):
            self._origin[_LOWER[i]] = o
            self._origin[_LOWER[i].upper()] = t
        if not self._connected():
            raise InputError("graph is not connected")

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for o, t in self.endpoints:
                for u, w in ((o, t), (t, o)):
                    if u == v and w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == self.vertex_count

    @property
    def letters(self) -> str:
        return _LOWER[: self.edge_pairs]

    def origin(self, letter: str) -> int:
        return self._origin[letter]

    def terminus(self, letter: str) -> int:
        return self._origin[letter.swapcase()]

    def betti(self) -> int:
        return self.edge_pairs - self.vertex_count + 1

    def is_path(self, word: str) -> bool:
        """True when consecutive letters are end-to-end composable."""
        try:
            for i in range(len(word) - 1):
                if self.terminus(word[i]) != self.origin(word[i + 1]):
                    return False
            if word:
                self.origin(word[0])
        except KeyError:
            return False
        return True

    def check_path(self, word: str) -> str:
        for i in range(len(word) - 1):
            if self.terminus(word[i]) != self.origin(word[i + 1]):
                raise InputError(
                    f"edges {word[i]!r} and {word[i + 1]!r} do not compose at position {i}"
                )
        if word and word[0] not in self._origin:
            raise InputError(f"unknown edge letter {word[0]!r}")
        return word

    def is_rose(self) -> bool:
        return self.vertex_count == 1

    def __repr__(self):
        return f"Graph(vertices={self.vertex_count}, edges={self.edge_pairs})"


def rose(rank: int) -> Graph:
    """The rose with ``rank`` loop edges at a single vertex."""
    if not 1 <= rank <= MAX_RANK:
        raise InputError(f"rank must be in 1..{MAX_RANK}, got {rank}")
    return Graph(1, [(0, 0)] * rank)


def tighten(word: str, graph: Graph | None = None) -> str:
    """Erase backtracking (an edge followed by its reversal) until none remains.

    On any graph this is exactly free reduction of the letter string, and it
    never breaks composability.
    """
    rank = graph.edge_pairs if graph is not None else None
    return reduce_word(word, rank)


class EdgePath:
    """A tight edge path in a graph.

    >>> g = rose(2)
    >>> EdgePath(g, "abA").word
    'abA'
    """

    __slots__ = ("graph", "word")

    def __init__(self, graph: Graph, word: str, pre_tightened: bool = False):
        graph.check_path(word)
        self.graph = graph
        self.word = word if pre_tightened else tighten(word, graph)

    def __len__(self):
        return len(self.word)

    def reverse(self) -> "EdgePath":
        return EdgePath(self.graph, invert_word(self.word), pre_tightened=True)

    def start(self):
        return self.graph.origin(self.word[0]) if self.word else None

    def end(self):
        return self.graph.terminus(self.word[-1]) if self.word else None

    def __eq__(self, other):
        if isinstance(other, EdgePath):
            return self.graph is other.graph and self.word == other.word
        return NotImplemented

    def __repr__(self):
        return f"EdgePath({self.word!r})"


class Metric:
    """Positive edge lengths, one per edge pair, orientation independent."""

    def __init__(self, lengths):
        lengths = np.asarray(lengths, dtype=float)
        if lengths.ndim != 1 or len(lengths) == 0:
            raise InputError("metric needs a flat, nonempty length vector")
        if not np.all(lengths > 0):
            raise InputError("edge lengths must be positive")
        self.lengths = lengths
        table = np.zeros(128, dtype=float)
        for i, val in enumerate(lengths):
            table[ord(_LOWER[i])] = val
            table[ord(_LOWER[i].upper())] = val
        self._table = table

    @property
    def table(self) -> np.ndarray:
        """Per-letter weights indexed by character code (both orientations)."""
        return self._table

    def of_pair(self, index: int) -> float:
        return float(self.lengths[index])

    def of_letter(self, letter: str) -> float:
        return float(self._table[ord(letter)])

    def volume(self) -> float:
        """Total length of the graph: the sum over edge pairs."""
        return float(self.lengths.sum())

    def scaled(self, factor: float) -> "Metric":
        return Metric(self.lengths * factor)

    def __len__(self):
        return len(self.lengths)

    def __repr__(self):
        return f"Metric({self.lengths.tolist()})"


def unit_metric(graph_or_rank) -> Metric:
    n = graph_or_rank.edge_pairs if isinstance(graph_or_rank, Graph) else int(graph_or_rank)
    return Metric(np.ones(n))


def path_length(word_or_path, metric: Metric) -> float:
    """Metric length of an edge path (a string or an :class:`EdgePath`)."""
    word = word_or_path.word if isinstance(word_or_path, EdgePath) else word_or_path
    if not word:
        return 0.0
    codes = np.frombuffer(word.encode("ascii"), dtype=np.uint8)
    return float(metric._table[codes].sum())


def block_path_length(word: str, metric: Metric, block_letters: frozenset) -> float:
    """Metric length of the part of a path lying on a given set of edge pairs."""
    if not word:
        return 0.0
    total = 0.0
    table = metric._table
    for letter in set(word):
        if letter.lower() in block_letters:
            total += word.count(letter) * table[ord(letter)]
    return float(total)


def cyclic_word_to_loop(cyclic_word: str, graph: Graph | None = None) -> str:
    """Based loop on the rose tracing a conjugacy-class representative.

    On a rose every vertex is the basepoint, so the representative itself is
    the loop.
    """
    if graph is not None and not graph.is_rose():
        raise InputError("cyclic words trace loops only on a rose")
    return cyclic_word
