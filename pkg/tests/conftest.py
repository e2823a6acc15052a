"""Shared fixtures: the bundled corpus maps and their analyzed spectral data.

Everything here is deterministic and cheap, so fixtures are session-scoped
and shared across test modules.
"""

import math

import pytest

from traintracks import analyze_train_track, rose_map
from traintracks import corpus

PHI = (1.0 + math.sqrt(5.0)) / 2.0


@pytest.fixture(scope="session")
def fib():
    return corpus.fibonacci()


@pytest.fixture(scope="session")
def conj_a():
    return corpus.fibonacci_conjugate_a()


@pytest.fixture(scope="session")
def conj_b():
    return corpus.fibonacci_conjugate_b()


@pytest.fixture(scope="session")
def rank4():
    return corpus.swap_fibonacci_rank4()


@pytest.fixture(scope="session")
def swap():
    return corpus.swap_rank2()


@pytest.fixture(scope="session")
def unipotent():
    return corpus.unipotent_rank2()


@pytest.fixture(scope="session")
def identity2():
    return corpus.identity_rank2()


@pytest.fixture(scope="session")
def fib_tt(fib):
    return analyze_train_track(rose_map(fib))


@pytest.fixture(scope="session")
def conj_a_tt(conj_a):
    return analyze_train_track(rose_map(conj_a))


@pytest.fixture(scope="session")
def conj_b_tt(conj_b):
    return analyze_train_track(rose_map(conj_b))


@pytest.fixture(scope="session")
def rank4_tt(rank4):
    return analyze_train_track(rose_map(rank4))


@pytest.fixture(scope="session")
def swap_tt(swap):
    return analyze_train_track(rose_map(swap))


@pytest.fixture(scope="session")
def unipotent_tt(unipotent):
    return analyze_train_track(rose_map(unipotent))


@pytest.fixture(scope="session")
def identity2_tt(identity2):
    return analyze_train_track(rose_map(identity2))


@pytest.fixture(scope="session")
def all_tts(fib_tt, conj_a_tt, conj_b_tt, rank4_tt, swap_tt, unipotent_tt, identity2_tt):
    """name -> TrainTrackData for the whole corpus."""
    return {
        "fibonacci": fib_tt,
        "fibonacci-conj-a": conj_a_tt,
        "fibonacci-conj-b": conj_b_tt,
        "swap-fibonacci": rank4_tt,
        "swap": swap_tt,
        "unipotent": unipotent_tt,
        "identity": identity2_tt,
    }


@pytest.fixture(scope="session")
def fib_corpus(fib_tt):
    from traintracks import build_leaf_corpus

    return build_leaf_corpus(fib_tt, depth=10, budget=500_000)


@pytest.fixture(scope="session")
def rank4_corpus(rank4_tt):
    from traintracks import build_leaf_corpus

    return build_leaf_corpus(rank4_tt, depth=10, budget=500_000)
