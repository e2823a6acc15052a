"""How much can cancel when a map is applied across a concatenation point?

If p and q are reduced and pq is reduced, psi(p)psi(q) need not be: letters
can cancel at the junction.  The cancellation is uniformly bounded by
Lip(psi) * vol(graph), and for train track maps it vanishes entirely at
legal junctions.  This script measures both claims on random samples.
"""

import math

from traintracks import (
    analyze_train_track,
    cancellation_bound,
    corpus,
    lipschitz_constant,
    measure_cancellation,
    measure_split,
    rose_map,
    unit_metric,
)

PHI = (1 + math.sqrt(5)) / 2

fib = analyze_train_track(rose_map(corpus.get("fibonacci")))

print("== the a priori bound, Fibonacci map ==")
lip = lipschitz_constant(fib.gmap, fib.metric)
print(f"Lip(psi) in the eigenmetric = {lip:.9f}  (= lambda = phi: a homothety)")
bound = cancellation_bound(fib.gmap, fib.metric)
print(f"bound: {bound}")
print()

print("== a single junction, measured exactly ==")
for p, q in (("A", "b"), ("a", "b"), ("b", "a")):
    c = measure_split(fib.gmap, fib.metric, p, q)
    print(f"  split p={p!r} q={q!r}: cancelled length {c:.9f}")
print(f"  (A|b crosses the one illegal turn; it cancels nu_a = {1 / PHI:.9f})")
print()

print("== random samples against the bound ==")
header = f"{'map':18s} {'TT':3s} {'bound':>10s} {'max seen':>10s} {'max legal':>10s}"
print(header)
for name in sorted(corpus.REGISTRY):
    tt = analyze_train_track(rose_map(corpus.get(name)))
    metric = tt.metric if tt.metric is not None else unit_metric(tt.gmap.graph)
    b = cancellation_bound(tt.gmap, metric)
    sample = measure_cancellation(tt.gmap, metric, samples=300, seed=7)
    legal = "-"
    if tt.verdict.is_train_track:
        ls = measure_cancellation(tt.gmap, metric, samples=300, seed=7, legal_only=True)
        legal = f"{ls.max_measured:10.3g}"
    tick = "yes" if tt.verdict.is_train_track else "no"
    print(f"{name:18s} {tick:3s} {b.bound:10.6f} {sample.max_measured:10.6f} {legal:>10s}")
print()
print("Train track maps cancel nothing across legal junctions; the failing")
print("map (fibonacci-conj-b) shows real cancellation but stays inside the bound.")
