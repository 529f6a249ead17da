"""Walk through the classic two-term derivation step by step.

Feeding the unordered list {Appendicitis, Appendectomy} to the shipped
medical pack grows a four-node diagram: the disease lowers the value to
the patient, the treatment ablates it, and a synthesized "Future
appendicitis" node carries the recurrence risk.

Run:  python3 demos/demo_appendicitis.py
"""
from qcidgen import (PolicyChoices, check_properties, classify_model, derive,
                     load_bundle, medical_pack_path, to_dot)


def main():
    bundle = load_bundle(medical_pack_path())
    terms = ["Appendicitis", "Appendectomy"]
    print(f"input terms: {terms}\n")

    def show_stage(stage, host, tax):
        labels = sorted(host.label(v).text for v in host.vertices)
        print(f"after stage {stage}: {labels}")

    result = derive(bundle.grammar, bundle.taxonomy, terms, PolicyChoices(),
                    on_stage=show_stage)
    assert result.success

    print("\napplications in order:")
    for s in result.transcript.stages:
        for a in s["applications"]:
            print(f"  stage {s['index']}: {a['production']} placed {a['labels']}")

    model = classify_model(result.graph, result.taxonomy)
    print("\nstructural properties:")
    print(check_properties(model).to_table())

    print("\nDOT rendering:")
    print(to_dot(model))


if __name__ == "__main__":
    main()
