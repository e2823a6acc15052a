"""Attracting-lamination leaves: nested prefixes and segment queries.

A leaf is grown from an edge e that reappears inside its own image under a
suitable power of the map: re-substituting around the recurrent occurrence
produces an increasing sequence of nested subpaths whose union is a leaf of
the attracting lamination.  Prefixes are stored as plain words together
with the index of the anchoring occurrence of the seed edge, so nesting can
be checked literally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InternalConsistencyError,
    NotALeafSegmentError,
    PreconditionError,
)
from .graphs import Metric, path_length
from .spectral import TrainTrackData
from .words import DEFAULT_WORD_BUDGET, invert_word

SEED_POWER_CAP = 24
SEED_LENGTH_BUDGET = 10**6


@dataclass(frozen=True)
class LeafSeed:
    """A self-recurring edge: tau^power(edge) crosses edge >= 3 times forward."""

    edge: str
    power: int
    anchor: int
    block: int
    occurrences: tuple


@dataclass
class LeafPrefix:
    """A nested prefix of a leaf, centered on the seed edge."""

    seed: LeafSeed
    depth: int
    word: str
    center: int
    truncated: bool

    @property
    def block(self) -> int:
        return self.seed.block

    def spelled(self, radius: int | None = None, marker: str = "|") -> str:
        """The prefix with the center edge fenced off, optionally windowed."""
        lo, hi = 0, len(self.word)
        if radius is not None:
            lo = max(0, self.center - radius)
            hi = min(len(self.word), self.center + radius + 1)
        w = self.word
        c = self.center
        return w[lo:c] + marker + w[c] + marker + w[c + 1 : hi]

    def centered_slice(self, size: int) -> str:
        half = size // 2
        lo = max(0, self.center - half)
        return self.word[lo : lo + size]


def _block_of(tt: TrainTrackData, letter: str) -> int:
    for i, block in enumerate(tt.pf.blocks):
        if letter in block:
            return i
    raise InternalConsistencyError(f"letter {letter!r} missing from every block")


def find_eigen_seed(tt: TrainTrackData, block: int | None = None, power_cap: int = SEED_POWER_CAP) -> LeafSeed:
    """Smallest power of the map under which some edge triples itself.

    Scans powers in multiples of the cyclic index (other powers send a block
    elsewhere) and, per power, edges in block order; returns the first edge
    whose image crosses it at least three times with forward orientation.
    The middle crossing anchors leaf expansion.
    """
    if not tt.verdict.is_train_track:
        raise PreconditionError("leaf generation needs a verified train track")
    if tt.pf is None:
        raise PreconditionError("leaf generation needs an irreducible transition matrix")
    if not tt.expanding:
        raise PreconditionError("leaf generation needs an expanding stretch factor")
    k = tt.pf.k
    if block is None:
        letters = [e for blk in tt.pf.blocks for e in blk]
    else:
        letters = list(tt.pf.blocks[block])
    images = {e: e for e in letters}
    power = 0
    while power + k <= power_cap:
        for _ in range(k):
            images = {e: tt.gmap.map_path(w) for e, w in images.items()}
        power += k
        if max(len(w) for w in images.values()) > SEED_LENGTH_BUDGET:
            break
        for e in letters:
            w = images[e]
            occs = tuple(i for i, ch in enumerate(w) if ch == e)
            if len(occs) >= 3:
                return LeafSeed(
                    edge=e,
                    power=power,
                    anchor=occs[len(occs) // 2],
                    block=_block_of(tt, e),
                    occurrences=occs,
                )
    raise PreconditionError(
        f"no edge recurs three times under powers up to {power_cap}"
    )


def expand_leaf(
    tt: TrainTrackData,
    seed: LeafSeed,
    depth: int,
    budget: int = DEFAULT_WORD_BUDGET,
) -> LeafPrefix:
    """Grow a leaf prefix by re-substituting depth times around the anchor.

    Each step replaces the word by its image under tau^power and re-centers
    on the seed edge carried by the anchored occurrence.  No tightening is
    needed: images of legal paths stay reduced.  When the next step would
    exceed the budget the word is first trimmed symmetrically around the
    center, which preserves nesting on the surviving window.
    """
    gmap = tt.gmap
    step = gmap
    for _ in range(seed.power - 1):
        step = gmap.compose(step)
    word = seed.edge
    center = 0
    truncated = False
    growth = step._subst.max_growth
    for _ in range(depth):
        if len(word) * growth > budget:
            half = max(1, budget // (2 * growth))
            lo = max(0, center - half)
            hi = min(len(word), center + half + 1)
            word = word[lo:hi]
            center -= lo
            truncated = True
        prefix_len = step._subst.output_length(word[:center])
        word = step.substitute(word)
        center = prefix_len + seed.anchor
        if word[center] != seed.edge:
            raise InternalConsistencyError(
                "anchored occurrence drifted during leaf expansion"
            )
    return LeafPrefix(seed=seed, depth=depth, word=word, center=center, truncated=truncated)


def leaf_contains(prefix: LeafPrefix, segment: str) -> bool:
    """Whether the segment (either orientation) sits inside the prefix."""
    if not segment:
        return True
    return segment in prefix.word or invert_word(segment) in prefix.word


@dataclass
class LeafCorpus:
    """One leaf prefix per cyclic block, with lazy matching automata."""

    tt: TrainTrackData
    prefixes: tuple
    depth: int

    def __post_init__(self):
        self._automata = {}

    @property
    def k(self) -> int:
        return len(self.prefixes)

    def sigma(self, block: int) -> int:
        """Index of the block the map sends this block's leaves into."""
        return (block + 1) % self.k

    def automaton(self, block: int, cap: int = 30_000):
        key = (block, cap)
        if key not in self._automata:
            text = self.prefixes[block].centered_slice(cap)
            self._automata[key] = _SuffixAutomaton(text)
        return self._automata[key]

    def contains(self, segment: str) -> int | None:
        """Block index of a prefix containing the segment, or None."""
        for i, prefix in enumerate(self.prefixes):
            if leaf_contains(prefix, segment):
                return i
        return None


def build_leaf_corpus(
    tt: TrainTrackData,
    depth: int = 12,
    budget: int = DEFAULT_WORD_BUDGET,
    power_cap: int = SEED_POWER_CAP,
) -> LeafCorpus:
    """One expanded leaf prefix for each cyclic block."""
    if tt.pf is None:
        raise PreconditionError("leaf generation needs an irreducible transition matrix")
    prefixes = []
    for block in range(tt.pf.k):
        seed = find_eigen_seed(tt, block=block, power_cap=power_cap)
        prefixes.append(expand_leaf(tt, seed, depth=depth, budget=budget))
    return LeafCorpus(tt=tt, prefixes=tuple(prefixes), depth=depth)


def _occurrence_positions(text: str, pattern: str) -> np.ndarray:
    """All (possibly overlapping) start positions of pattern in text."""
    if not pattern or len(pattern) > len(text):
        return np.empty(0, dtype=np.int64)
    t = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    p = np.frombuffer(pattern.encode("ascii"), dtype=np.uint8)
    n = len(t) - len(p) + 1
    mask = np.ones(n, dtype=bool)
    for j, pc in enumerate(p):
        mask &= t[j : j + n] == pc
    return np.flatnonzero(mask).astype(np.int64)


@dataclass
class WindowCertificate:
    """Quasiperiodicity witness: every window of length L meets the segment."""

    segment: str
    window: int
    status: str  # "certified" or "degenerate"
    occurrences: int
    prefix_length: int

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def quasiperiodicity_window(prefix: LeafPrefix, segment: str) -> WindowCertificate:
    """Smallest L such that every length-L window of the prefix contains the
    segment in some orientation.

    With occurrence starts p_0 < ... < p_r of width w in a prefix of length
    n, a window length L works iff p_0 + w <= L, consecutive gaps satisfy
    p_{j+1} + w <= p_j + 1 + L, and p_r >= n - L.  Validity is monotone in
    L, so the least L is found by bisection; L = n (the whole prefix) is
    reported as degenerate rather than a certificate.
    """
    if not segment:
        raise NotALeafSegmentError("empty segment")
    word = prefix.word
    n = len(word)
    w = len(segment)
    fwd = _occurrence_positions(word, segment)
    bwd = _occurrence_positions(word, invert_word(segment))
    occs = np.union1d(fwd, bwd)
    if occs.size == 0:
        raise NotALeafSegmentError(
            f"segment of length {w} does not occur in the depth-{prefix.depth} prefix"
        )
    starts = occs
    first = int(starts[0])
    last = int(starts[-1])
    gaps = np.diff(starts) if starts.size > 1 else np.empty(0, dtype=np.int64)
    max_gap = int(gaps.max()) if gaps.size else 0

    def valid(L: int) -> bool:
        if first + w > L:
            return False
        if max_gap and max_gap - 1 + w > L:
            return False
        return last >= n - L

    lo, hi = w, n
    while lo < hi:
        mid = (lo + hi) // 2
        if valid(mid):
            hi = mid
        else:
            lo = mid + 1
    status = "certified" if lo < n else "degenerate"
    return WindowCertificate(
        segment=segment,
        window=lo,
        status=status,
        occurrences=int(starts.size),
        prefix_length=n,
    )


class _SuffixAutomaton:
    """Suffix automaton over a fixed text, for matching statistics.

    matching_statistics(q)[i] is the length of the longest suffix of
    q[: i + 1] occurring in the text, i.e. the longest match ending at i.
    """

    __slots__ = ("next", "link", "length")

    def __init__(self, text: str):
        self.next = [{}]
        self.link = [-1]
        self.length = [0]
        last = 0
        for ch in text:
            cur = len(self.next)
            self.next.append({})
            self.link.append(-1)
            self.length.append(self.length[last] + 1)
            p = last
            while p != -1 and ch not in self.next[p]:
                self.next[p][ch] = cur
                p = self.link[p]
            if p == -1:
                self.link[cur] = 0
            else:
                q = self.next[p][ch]
                if self.length[p] + 1 == self.length[q]:
                    self.link[cur] = q
                else:
                    clone = len(self.next)
                    self.next.append(dict(self.next[q]))
                    self.link.append(self.link[q])
                    self.length.append(self.length[p] + 1)
                    while p != -1 and self.next[p].get(ch) == q:
                        self.next[p][ch] = clone
                        p = self.link[p]
                    self.link[q] = clone
                    self.link[cur] = clone
            last = cur

    def matching_statistics(self, query: str) -> np.ndarray:
        ms = np.zeros(len(query), dtype=np.int64)
        state = 0
        length = 0
        for i, ch in enumerate(query):
            while state != -1 and ch not in self.next[state]:
                state = self.link[state]
                length = self.length[state] if state != -1 else 0
            if state == -1:
                state = 0
                length = 0
            else:
                state = self.next[state][ch]
                length += 1
            ms[i] = length
        return ms


@dataclass
class LeafMatch:
    """Heaviest leaf segment (by a metric) found inside a cyclic word."""

    block: int | None
    length: float
    edge_count: int
    segment: str


def longest_leaf_segment(word: str, corpus: LeafCorpus, metric: Metric, cap: int = 30_000) -> LeafMatch:
    """Metric-heaviest subword of the doubled cyclic word that is a leaf
    segment of some block, in either orientation.

    Matching statistics against each block's automaton give, for every end
    position, the longest leaf match ending there; the metric weight of each
    match comes from prefix sums, and matches are capped at the period so a
    segment never wraps more than once around the loop.
    """
    best = LeafMatch(block=None, length=0.0, edge_count=0, segment="")
    if not word:
        return best
    period = len(word)
    for oriented in (word, invert_word(word)):
        doubled = oriented + oriented
        codes = np.frombuffer(doubled.encode("ascii"), dtype=np.uint8)
        weights = metric.table[codes]
        pre = np.concatenate(([0.0], np.cumsum(weights)))
        for block in range(corpus.k):
            ms = corpus.automaton(block, cap=cap).matching_statistics(doubled)
            ms = np.minimum(ms, period)
            ends = np.arange(1, len(doubled) + 1)
            vals = pre[ends] - pre[ends - ms]
            i = int(np.argmax(vals))
            if vals[i] > best.length + 1e-15:
                l = int(ms[i])
                best = LeafMatch(
                    block=block,
                    length=float(vals[i]),
                    edge_count=l,
                    segment=doubled[i + 1 - l : i + 1],
                )
    return best


@dataclass
class ProbeReport:
    """Growth of the heaviest leaf segment along the orbit of a word."""

    word: str
    values: list
    strided: list
    k: int
    verdict: bool


def weak_limit_probe(
    auto,
    word: str,
    corpus: LeafCorpus,
    metric: Metric,
    M: int = 12,
    orbit=None,
    cap: int = 30_000,
) -> ProbeReport:
    """Does the orbit of the word sweep out ever-longer leaf segments?

    Tracks the metric-heaviest leaf segment of psi^m(word) for m = 0..M and
    judges the stride-k subsequence: verdict True iff its last quartile is
    strictly increasing and exceeds three times the first quartile's
    maximum.  Exponentially growing classes shadow leaves, so their segment
    lengths blow up; bounded or polynomial classes stall.
    """
    from .limits import CyclicOrbit

    if orbit is None:
        orbit = CyclicOrbit(auto, word)
    k = corpus.k
    values = []
    for m in range(M + 1):
        w = orbit.word_at(m)
        if w is None:
            break
        match = longest_leaf_segment(w, corpus, metric, cap=cap)
        values.append(match.length)
    strided = values[::k]
    q = max(2, len(strided) // 4)
    head, tail = strided[:q], strided[-q:]
    increasing = all(b > a for a, b in zip(tail, tail[1:]))
    verdict = bool(
        len(strided) >= 2 * q
        and increasing
        and min(tail) > 3 * max(head)
        and min(tail) > 0
    )
    return ProbeReport(word=word, values=values, strided=strided, k=k, verdict=verdict)
