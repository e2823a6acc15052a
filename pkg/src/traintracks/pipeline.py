"""End-to-end analysis: parse a description, run every applicable stage,
emit a JSON-ready report.

Stages that do not apply to the input (spectral data for a reducible
matrix, laminations for a non-expanding map, ...) are skipped with a
recorded reason instead of failing, so the report shape is stable.
"""

from __future__ import annotations

import datetime
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .cancellation import cancellation_bound, measure_cancellation
from .errors import InputError, ParseError, PreconditionError
from .graphs import Graph, Metric, unit_metric
from .laminations import (
    build_leaf_corpus,
    quasiperiodicity_window,
    weak_limit_probe,
)
from .limits import (
    CyclicOrbit,
    classify_growth,
    convergence_constants,
    limit_length,
    per_block_lengths,
)
from .maps import GraphMap, rose_map, to_automorphism
from .spectral import TrainTrackData, analyze_train_track, is_simplicial
from .words import Automorphism, enumerate_cyclic_words, parse_word

_LOWER = "abcdefghijklmnopqrstuvwxyz"


@dataclass
class AnalysisConfig:
    """Knobs for the full pipeline.

    Sweeps sample the growth classifier at a reduced depth and budget to
    stay interactive; single-word queries use the full M and word budget.
    """

    M: int = 40
    tol: float = 1e-9
    word_budget: int = 10**7
    max_word_len: int = 5
    sweep_M: int = 24
    sweep_budget: int = 200_000
    probe_M: int = 12
    leaf_depth: int = 12
    leaf_budget: int = 500_000
    samples: int = 200
    seed: int = 0
    max_iter: int = 10**6
    convergence_depth: int = 14

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ParsedInput:
    gmap: GraphMap
    auto: Automorphism | None


def _parse_arrow(line: str, lineno: int):
    if "->" not in line:
        raise ParseError(f"expected 'letter -> word', got {line!r}", line=lineno)
    lhs, rhs = line.split("->", 1)
    lhs = lhs.strip()
    rhs = rhs.strip()
    if len(lhs) != 1 or not lhs.isalpha():
        raise ParseError(f"left side must be a single letter, got {lhs!r}", line=lineno)
    try:
        return lhs, parse_word(rhs)
    except InputError as exc:
        raise ParseError(str(exc), line=lineno) from None


def parse_input(text: str) -> ParsedInput:
    """Read an automorphism (rank + generator images) or a marked graph map.

    Grammar, one item per line, '#' comments::

        rank: 2          # rose on two edges
        a -> ab
        b -> a
        inverse:         # optional block certifying invertibility
        a -> b
        b -> Ba

    or, for a map on an arbitrary graph::

        graph:
        vertices: 2
        edge a: 0 1
        edge b: 1 1
        map:
        a -> ab
        b -> b
    """
    rank = None
    images: dict = {}
    inverses: dict = {}
    vertices = None
    endpoints: list = []
    edge_letters: list = []
    edge_images: dict = {}
    section = "images"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low == "inverse:":
            section = "inverse"
            continue
        if low == "graph:":
            section = "graph"
            continue
        if low == "map:":
            section = "map"
            continue
        if low.startswith("rank:"):
            try:
                rank = int(line.split(":", 1)[1])
            except ValueError:
                raise ParseError(f"rank is not an integer: {line!r}", line=lineno) from None
            continue
        if section == "graph":
            if low.startswith("vertices:"):
                try:
                    vertices = int(line.split(":", 1)[1])
                except ValueError:
                    raise ParseError(f"vertex count is not an integer: {line!r}", line=lineno) from None
                continue
            if low.startswith("edge "):
                body = line[5:]
                if ":" not in body:
                    raise ParseError(f"expected 'edge x: u v', got {line!r}", line=lineno)
                name, ends = body.split(":", 1)
                name = name.strip()
                parts = ends.split()
                if len(name) != 1 or not name.islower() or len(parts) != 2:
                    raise ParseError(f"expected 'edge x: u v', got {line!r}", line=lineno)
                try:
                    u, v = int(parts[0]), int(parts[1])
                except ValueError:
                    raise ParseError(f"edge endpoints must be integers: {line!r}", line=lineno) from None
                if name in edge_letters:
                    raise ParseError(f"duplicate edge {name!r}", line=lineno)
                edge_letters.append(name)
                endpoints.append((u, v))
                continue
            raise ParseError(f"unexpected line in graph section: {line!r}", line=lineno)
        target = {"images": images, "inverse": inverses, "map": edge_images}[section]
        lhs, rhs = _parse_arrow(line, lineno)
        if lhs in target:
            raise ParseError(f"duplicate image for {lhs!r}", line=lineno)
        target[lhs] = rhs

    if edge_letters:
        if images or inverses:
            raise ParseError("cannot mix generator images with a graph/map description")
        if vertices is None:
            raise ParseError("graph section needs a 'vertices:' line")
        expected = [_LOWER[i] for i in range(len(edge_letters))]
        if sorted(edge_letters) != expected:
            raise ParseError(f"edges must be named consecutively a..{expected[-1]}")
        order = {c: i for i, c in enumerate(edge_letters)}
        ordered = [endpoints[order[c]] for c in expected]
        graph = Graph(vertices, ordered)
        missing = [c for c in expected if c not in edge_images]
        if missing:
            raise ParseError(f"map section is missing images for {missing}")
        gmap = GraphMap(graph, [edge_images[c] for c in expected])
        auto = to_automorphism(gmap) if graph.is_rose() else None
        return ParsedInput(gmap=gmap, auto=auto)

    if rank is None:
        raise ParseError("missing 'rank:' line")
    expected = [_LOWER[i] for i in range(rank)]
    missing = [c for c in expected if c not in images]
    if missing:
        raise ParseError(f"missing images for generators {missing}")
    extra = sorted(set(images) - set(expected))
    if extra:
        raise ParseError(f"images given for letters outside rank {rank}: {extra}")
    inv = None
    if inverses:
        missing = [c for c in expected if c not in inverses]
        if missing:
            raise ParseError(f"missing inverse images for generators {missing}")
        inv = [inverses[c] for c in expected]
    auto = Automorphism([images[c] for c in expected], inverse_images=inv, rank=rank)
    return ParsedInput(gmap=rose_map(auto), auto=auto)


def _verdict_dict(verdict) -> dict:
    return {
        "is_train_track": verdict.is_train_track,
        "checked_turns": verdict.checked_turns,
        "witness_orbit": [sorted(t) for t in verdict.witness_orbit] if verdict.witness_orbit else None,
        "fails_at_iterate": verdict.fails_at_iterate,
    }


def _spectral_dict(tt: TrainTrackData) -> dict:
    pf = tt.pf
    return {
        "lambda": pf.lam,
        "nu": [float(x) for x in pf.nu],
        "k": pf.k,
        "blocks": [list(b) for b in pf.blocks],
        "residual": pf.residual,
        "primitive_first_return": list(pf.primitive_first_return),
        "iterations": pf.iterations,
        "expanding": pf.expanding,
        "simplicial": is_simplicial(tt.matrix),
    }


@dataclass
class EquivalenceReport:
    """Agreement of the three loxodromic-growth detectors over a word sweep."""

    checked: int
    exponential: int
    polynomial: int
    discrepancies: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)


def equivalence_sweep(
    auto: Automorphism,
    tt: TrainTrackData,
    corpus,
    words,
    config: AnalysisConfig | None = None,
) -> EquivalenceReport:
    """Run limit-length, growth, and leaf-probe verdicts on every word.

    All three operations share one cached orbit per word.  A word counts as
    a discrepancy when the verdicts do not agree; the limit-length verdict
    decides the reported label.  When only the probe dissents it is retried
    with a longer window before the disagreement is recorded: orbits that
    dip through short words need a few extra strides to reveal their leaf
    segments, and bounded orbits stay cheap to extend.
    """
    config = config or AnalysisConfig()
    checked = 0
    n_exp = 0
    n_poly = 0
    discrepancies = []
    labels = {}
    for word in words:
        orbit = CyclicOrbit(auto, word, budget=config.sweep_budget)
        rep = limit_length(auto, word, tt, M=config.M, tol=config.tol, orbit=orbit)
        cls = classify_growth(auto, word, M=config.sweep_M, orbit=orbit)
        probe = weak_limit_probe(auto, word, corpus, tt.metric, M=config.probe_M, orbit=orbit)
        a = rep.classification.is_exponential
        b = cls.is_exponential
        c = probe.verdict
        if a and b and not c:
            for factor in (2, 4):
                probe = weak_limit_probe(
                    auto, word, corpus, tt.metric, M=factor * config.probe_M, orbit=orbit
                )
                if probe.verdict:
                    break
            c = probe.verdict
        checked += 1
        labels[word] = rep.classification.label()
        if a:
            n_exp += 1
        else:
            n_poly += 1
        if not (a == b == c):
            discrepancies.append(
                {"word": word, "limit_length": a, "growth": b, "leaf_probe": c}
            )
    return EquivalenceReport(
        checked=checked,
        exponential=n_exp,
        polynomial=n_poly,
        discrepancies=discrepancies,
        labels=labels,
    )


def _coerce(source):
    if isinstance(source, str):
        return parse_input(source)
    if isinstance(source, Automorphism):
        return ParsedInput(gmap=rose_map(source), auto=source)
    if isinstance(source, GraphMap):
        auto = to_automorphism(source) if source.graph.is_rose() else None
        return ParsedInput(gmap=source, auto=auto)
    raise InputError(f"cannot analyze {type(source).__name__}")


def analyze(source, config: AnalysisConfig | None = None, words=None) -> dict:
    """Full analysis of an automorphism or marked graph map.

    ``source`` may be input text, an :class:`Automorphism`, or a
    :class:`GraphMap`.  ``words`` adds explicit conjugacy classes to the
    limit-length section.  Returns a JSON-ready dict; apart from the
    timestamp the output is deterministic for a fixed input and config.
    """
    t0 = time.perf_counter()
    config = config or AnalysisConfig()
    parsed = _coerce(source)
    gmap, auto = parsed.gmap, parsed.auto
    skipped: dict = {}
    report: dict = {
        "meta": {
            "tool": "traintracks",
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "config": config.to_dict(),
        },
        "input": {
            "rank": gmap.graph.edge_pairs,
            "vertices": gmap.graph.vertex_count,
            "is_rose": gmap.graph.is_rose(),
            "images": {letter: gmap.image_of_letter(letter) for letter in gmap.graph.letters},
        },
    }

    if auto is not None:
        val = auto.validate()
        report["validation"] = {
            "ok": val.ok,
            "abelianization_det": val.abelianization_det,
            "inverse_checked": val.inverse_checked,
            "problems": val.problems,
            "warnings": val.warnings,
        }
    else:
        skipped["validation"] = "not a rose map; no group automorphism to validate"

    tt = analyze_train_track(gmap, tol=min(1e-12, config.tol))
    report["train_track"] = _verdict_dict(tt.verdict)
    invariant = gmap.find_invariant_subgraph()
    report["transition"] = {
        "matrix": tt.matrix.tolist(),
        "irreducible": tt.irreducible,
        "invariant_subgraph": sorted(invariant) if invariant else None,
    }

    if tt.irreducible:
        report["spectral"] = _spectral_dict(tt)
    else:
        skipped["spectral"] = "transition matrix is reducible; no positive eigendata"

    structured = tt.verdict.is_train_track and tt.irreducible
    if structured:
        report["homothety"] = {"max_rel_defect": tt.homothety_defect()}
    else:
        skipped["homothety"] = "needs a verified irreducible train track"

    sweep = None
    eq = None
    if auto is not None:
        sweep = enumerate_cyclic_words(auto.rank, config.max_word_len)
        growth: dict = {"sweep_len": config.max_word_len, "classes": len(sweep)}
        if structured and tt.expanding:
            corpus = build_leaf_corpus(tt, depth=config.leaf_depth, budget=config.leaf_budget)
            eq = equivalence_sweep(auto, tt, corpus, sweep, config)
            growth.update(
                exponential=eq.exponential,
                polynomial=eq.polynomial,
                rate=tt.pf.lam,
            )
            report["growth"] = growth
            report["equivalence"] = {
                "checked": eq.checked,
                "discrepancies": len(eq.discrepancies),
                "details": eq.discrepancies[:10],
            }
        else:
            n_exp = 0
            n_poly = 0
            for word in sweep:
                cls = classify_growth(auto, word, M=config.sweep_M, budget=config.sweep_budget)
                if cls.is_exponential:
                    n_exp += 1
                else:
                    n_poly += 1
            growth.update(exponential=n_exp, polynomial=n_poly)
            report["growth"] = growth
            skipped["equivalence"] = "verdict comparison needs an expanding train track"
            corpus = None
    else:
        skipped["growth"] = "conjugacy sweeps need a rose map"
        skipped["equivalence"] = "conjugacy sweeps need a rose map"
        corpus = None

    if structured and tt.expanding and auto is not None:
        lengths: dict = {}
        probe_words = list(words) if words else [_LOWER[i] for i in range(min(auto.rank, 4))]
        for word in probe_words:
            orbit = CyclicOrbit(auto, word, budget=config.word_budget)
            rep = limit_length(auto, word, tt, M=config.M, tol=config.tol, orbit=orbit)
            entry = {
                "limit": rep.limit,
                "converged": rep.converged,
                "m_stop": rep.m_stop,
                "classification": rep.classification.label(),
            }
            if rep.classification.is_exponential:
                blocks = per_block_lengths(auto, word, tt, orbit=orbit)
                entry["per_block"] = blocks.limits
            lengths[word] = entry
        report["lengths"] = lengths
    else:
        skipped["lengths"] = "limit lengths need an expanding irreducible train track"

    if structured and tt.expanding:
        if corpus is None:
            corpus = build_leaf_corpus(tt, depth=config.leaf_depth, budget=config.leaf_budget)
        lam_section = {
            "k": corpus.k,
            "depth": corpus.depth,
            "seeds": [
                {"edge": p.seed.edge, "power": p.seed.power, "anchor": p.seed.anchor}
                for p in corpus.prefixes
            ],
            "prefix_lengths": [len(p.word) for p in corpus.prefixes],
            "truncated": [p.truncated for p in corpus.prefixes],
            "previews": [p.spelled(radius=15) for p in corpus.prefixes],
        }
        windows = []
        for p in corpus.prefixes:
            seg = p.centered_slice(3)
            cert = quasiperiodicity_window(p, seg)
            windows.append(
                {"segment": seg, "window": cert.window, "status": cert.status}
            )
        lam_section["windows"] = windows
        report["lamination"] = lam_section
    else:
        skipped["lamination"] = "leaves need an expanding irreducible train track"

    metric = tt.metric if tt.metric is not None else unit_metric(gmap.graph)
    lam = tt.pf.lam if tt.expanding else None
    bound = cancellation_bound(gmap, metric, lam=lam)
    cancel = {
        "metric": "eigenmetric" if tt.metric is not None else "unit",
        "lipschitz": bound.lipschitz,
        "volume": bound.volume,
        "bound": bound.bound,
        "projection_bound": bound.projection_bound,
    }
    sample = measure_cancellation(
        gmap, metric, samples=config.samples, seed=config.seed, lam=lam
    )
    cancel["random_splits"] = {
        "count": sample.count,
        "max_measured": sample.max_measured,
        "mean_measured": sample.mean_measured,
        "within_bound": sample.within_bound,
    }
    if tt.verdict.is_train_track:
        try:
            legal = measure_cancellation(
                gmap, metric, samples=config.samples, seed=config.seed, lam=lam, legal_only=True
            )
            cancel["legal_splits"] = {
                "count": legal.count,
                "max_measured": legal.max_measured,
            }
        except PreconditionError as exc:
            cancel["legal_splits"] = {"skipped": str(exc)}
    report["cancellation"] = cancel

    if structured and tt.expanding and auto is not None:
        loop_words = [
            w
            for w in (sweep or [])
            if len(w) <= 2 and eq is not None and eq.labels[w].startswith("Exponential")
        ][:6]
        conv = convergence_constants(
            auto,
            tt,
            unit_metric(gmap.graph),
            corpus=corpus,
            depth=config.convergence_depth,
            loop_words=loop_words,
        )
        report["convergence"] = {
            "alt_metric": "unit",
            "constants": conv.constants,
            "spreads": conv.spreads,
            "depth": conv.depth,
            "uniform_checked": conv.uniform_checked,
            "uniform_max_rel_error": conv.uniform_max_rel_error,
        }
    else:
        skipped["convergence"] = "comparison constants need an expanding train track"

    report["skipped"] = skipped
    report["meta"]["elapsed_seconds"] = time.perf_counter() - t0
    return report


def round_floats(obj, sig: int = 9):
    """Copy a JSON-ready structure with floats at ``sig`` significant digits."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.{sig}g}")
        return obj
    if isinstance(obj, np.floating):
        return round_floats(float(obj), sig)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v, sig) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, sig) for v in obj]
    return obj


def report_json(report: dict, sig: int = 9) -> str:
    import json

    return json.dumps(round_floats(report, sig), indent=2)
