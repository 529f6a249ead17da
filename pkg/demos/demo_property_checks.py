"""Show how the structural property checker reacts to broken diagrams.

Each example damages a healthy diagram in one way (a cycle, a second
utility node, an unreachable node, a chance node hidden behind a
decision) and prints the resulting report with its witness.

Run:  python3 demos/demo_property_checks.py
"""
from qcidgen import LabeledGraph, Symbol, check_properties
from qcidgen.qcid import QcidModel


def model(kinds, edges):
    g = LabeledGraph({v: Symbol(v) for v in kinds}, edges)
    return QcidModel(g, dict(kinds))


EXAMPLES = {
    "healthy": model(
        {"utility": "utility", "disease": "chance", "treatment": "decision",
         "future": "chance"},
        [("disease", "utility", "minus"), ("disease", "treatment", "info"),
         ("treatment", "future", "minus"), ("future", "utility", "minus"),
         ("treatment", "utility", "plain")]),
    "cycle": model(
        {"utility": "utility", "a": "chance", "b": "chance"},
        [("a", "b", "plus"), ("b", "a", "plus"),
         ("a", "utility", "minus"), ("b", "utility", "minus")]),
    "two utilities": model(
        {"u1": "utility", "u2": "utility", "c": "chance"},
        [("c", "u1", "plus"), ("c", "u2", "plus")]),
    "stranded node": model(
        {"utility": "utility", "c": "chance", "island": "chance"},
        [("c", "utility", "plus")]),
    "chance behind decision": model(
        {"utility": "utility", "c": "chance", "d": "decision"},
        [("c", "d", "plus"), ("d", "utility", "plain")]),
}


def main():
    for name, m in EXAMPLES.items():
        report = check_properties(m)
        verdict = "OK" if report.all_ok else "PROBLEMS"
        print(f"=== {name} ({verdict}) ===")
        print(report.to_table())
        print()


if __name__ == "__main__":
    main()
