"""Walk the bundled maps and check the train track property for each.

A graph self-map is a train track map when no iterate of an edge folds back
on itself.  Instead of iterating words and watching for cancellation, the
check runs each taken turn forward under the derivative map: the orbit
either stays nondegenerate forever (it must cycle, so this is finite) or
hits a degenerate turn, which pins down the exact iterate where folding
happens.
"""

from traintracks import corpus, reduce_word, rose_map


def show(name):
    auto = corpus.get(name)
    gmap = rose_map(auto)
    verdict = gmap.is_train_track()
    gens = [chr(ord("a") + i) for i in range(auto.rank)]
    images = ", ".join(f"{g}->{w}" for g, w in zip(gens, auto.images))
    print(f"{name:18s}  {images}")
    if verdict.is_train_track:
        print(f"{'':18s}  train track: yes  (checked {verdict.checked_turns} turns)")
    else:
        print(
            f"{'':18s}  train track: NO   (first cancellation at iterate "
            f"{verdict.fails_at_iterate})"
        )
    return gmap, verdict


print("== verdicts over the whole corpus ==")
for name in sorted(corpus.REGISTRY):
    show(name)
print()

# The b-conjugated Fibonacci map is the interesting failure: the turn orbit
# ends in a degenerate turn {x, x}, i.e. two copies of the same direction.
print("== anatomy of a failure ==")
gmap, verdict = show("fibonacci-conj-b")
print("witness orbit (a turn is an unordered pair of outgoing directions):")
for step, turn in enumerate(verdict.witness_orbit):
    print(f"  D^{step}: {{{', '.join(sorted(turn))}}}")
print()

# Cross-check by brute force: substitute m times and see when the image of
# an edge stops being reduced.
for m in range(1, 5):
    w = gmap.iterate_path("a", m)
    raw = gmap.substitute(gmap.iterate_path("a", m - 1)) if m > 1 else gmap.substitute("a")
    cancelled = len(raw) - len(reduce_word(raw, gmap.graph.edge_pairs))
    print(f"  psi^{m}(a): raw length {len(raw):3d}, cancelled letters {cancelled}")
print()

# For a genuine train track map the derivative data is worth a look.
print("== Fibonacci derivative map and turns ==")
fib = rose_map(corpus.get("fibonacci"))
for letter in "abAB":
    print(f"  D{letter} = {fib.derivative(letter)}")
taken = fib.taken_turns()
print(f"  turns taken inside edge images or at junctions: "
      f"{[sorted(t) for t in taken]}")
for turn in (frozenset("ab"), frozenset("aB"), frozenset("Ab")):
    ok = "legal" if fib.is_legal_turn(turn) else "ILLEGAL"
    print(f"  turn {{{', '.join(sorted(turn))}}}: {ok}")
