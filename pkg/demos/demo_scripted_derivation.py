"""Drive a larger derivation from the pack's example files.

The scale example feeds twelve terms through a recorded choice script and
produces a model of more than twenty nodes. The script answers every
anchor-selection and embedding question deterministically, so this demo
prints the same diagram on every run.

Run:  python3 demos/demo_scripted_derivation.py
"""
import json

from qcidgen import (ScriptedChoices, check_properties, classify_model,
                     derive, layout, load_bundle, medical_pack_path,
                     to_diagram_json)


def main():
    bundle = load_bundle(medical_pack_path())
    terms = json.loads(
        (bundle.examples_dir / "terms_scale.json").read_text())["terms"]
    script = json.loads(
        (bundle.examples_dir / "script_scale.json").read_text())
    print(f"{len(terms)} input terms, {len(script)} scripted answers\n")

    result = derive(bundle.grammar, bundle.taxonomy, terms,
                    ScriptedChoices(script))
    assert result.success

    model = classify_model(result.graph, result.taxonomy)
    coords = layout(model)
    print(f"derived {len(result.graph.vertices)} nodes / "
          f"{len(result.graph.edges)} arcs in "
          f"{len(result.transcript.stages)} stages\n")

    columns = {}
    for v, (x, _) in coords.items():
        columns.setdefault(x, []).append(model.graph.label(v).text)
    for x in sorted(columns):
        print(f"column {x}: {sorted(columns[x])}")

    print()
    print(check_properties(model).to_table())
    print("\nstructured export (first 400 chars):")
    print(to_diagram_json(model, coords)[:400] + " ...")


if __name__ == "__main__":
    main()
