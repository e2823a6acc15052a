"""End-to-end: parse a map from text, run every stage, and emit the report.

The same pipeline backs the command line tool, e.g.

    traintracks analyze example:fibonacci
    traintracks analyze my_map.txt --json report.json

Here we drive it as a library, starting from the text format.
"""

from traintracks import AnalysisConfig, analyze, parse_input, report_json

TEXT = """\
# golden-ratio substitution on two generators
rank: 2
a -> ab
b -> a
inverse:
a -> b
b -> Ba
"""

auto = parse_input(TEXT).auto
print(f"parsed: rank {auto.rank}, images {auto.images}, "
      f"inverses {auto.inverse_images}")
print()

config = AnalysisConfig(max_word_len=4, leaf_depth=10, samples=150)
report = analyze(auto, config=config)

print("report sections:", ", ".join(sorted(report)))
print()

tt = report["train_track"]
sp = report["spectral"]
print(f"train track: {tt['is_train_track']} (checked {tt['checked_turns']} turns)")
print(f"lambda = {sp['lambda']:.9f}, nu = {sp['nu']}, k = {sp['k']}")
g = report["growth"]
print(f"growth sweep (length <= {g['sweep_len']}): {g['classes']} classes, "
      f"{g['exponential']} exponential, {g['polynomial']} polynomial")
print(f"limit ||a|| = {report['lengths']['a']['limit']:.9f}")
c = report["cancellation"]
print(f"cancellation: max measured {c['random_splits']['max_measured']:.6f} "
      f"<= bound {c['bound']:.6f}")
print(f"verdict agreement across {report['equivalence']['checked']} classes: "
      f"{report['equivalence']['discrepancies']} discrepancies")
print()

# The JSON form is deterministic apart from the timestamp, so reports diff
# cleanly across runs and machines.
blob = report_json(report)
again = analyze(auto, config=config)
for r in (report, again):
    r["meta"].pop("timestamp")
    r["meta"].pop("elapsed_seconds")
print(f"serialized report: {len(blob)} bytes of JSON")
print(f"two runs identical after dropping wall-clock fields: "
      f"{report_json(report) == report_json(again)}")
