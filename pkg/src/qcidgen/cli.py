"""Command-line front door: derive models, check diagrams, serve sessions."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bundle import load_bundle, medical_pack_path
from .engine import (CallbackChoices, ChoiceRequest, PolicyChoices,
                     ScriptedChoices, derive)
from .errors import (DerivationError, QcidgenError, ScriptExhaustedError)
from .export import layout, to_diagram_json, to_dot, diagram_from_json
from .qcid import check_properties, classify_model

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
# argparse exits with 2 on bad flags
EXIT_IO = 3
EXIT_DERIVATION_FAILED = 4
EXIT_SCRIPT_EXHAUSTED = 5
EXIT_ERROR = 6


def _interactive_answer(request: ChoiceRequest):
    print(f"\n[{request.kind}] {json.dumps(request.context)}", file=sys.stderr)
    for i, cand in enumerate(request.candidates):
        print(f"  {i}: {json.dumps(cand)}", file=sys.stderr)
    if request.kind == "manual_classification":
        raw = input("class name (empty to decline): ").strip()
        return raw or None
    if request.kind == "extension_confirmation":
        raw = input("candidate index (-1 rejects all): ").strip()
        return int(raw)
    raw = input("candidate index: ").strip()
    return int(raw)


def cmd_derive(args) -> int:
    try:
        bundle = load_bundle(args.bundle)
    except QcidgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.terms_file:
        try:
            doc = json.loads(Path(args.terms_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read terms file: {exc}", file=sys.stderr)
            return EXIT_IO
        terms = doc["terms"] if isinstance(doc, dict) else doc
    else:
        terms = [t.strip() for t in (args.terms or "").split(",") if t.strip()]

    if args.mode == "policy":
        provider = PolicyChoices()
    elif args.mode == "interactive":
        provider = CallbackChoices(_interactive_answer)
    else:
        try:
            answers = json.loads(Path(args.script).read_text())
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            print(f"error: cannot read script file: {exc}", file=sys.stderr)
            return EXIT_IO
        provider = ScriptedChoices(answers)

    try:
        result = derive(bundle.grammar, bundle.taxonomy, terms, provider)
    except ScriptExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCRIPT_EXHAUSTED
    except QcidgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if not result.success:
        assert result.failure is not None
        print("derivation failed; stuck terms:", file=sys.stderr)
        for term, hints in result.failure.stuck.items():
            hint = f" (candidate productions: {', '.join(hints)})" if hints else ""
            print(f"  {term}{hint}", file=sys.stderr)
        return EXIT_DERIVATION_FAILED

    model = classify_model(result.graph, result.taxonomy)
    coords = layout(model)
    report = check_properties(model)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "diagram.json").write_text(to_diagram_json(model, coords))
    (out / "diagram.dot").write_text(to_dot(model, coords))
    (out / "transcript.json").write_text(result.transcript.to_json())
    (out / "properties.txt").write_text(report.to_table() + "\n")
    print(report.to_table())
    print(f"wrote diagram.json, diagram.dot, transcript.json, properties.txt to {out}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        model = diagram_from_json(Path(args.diagram).read_text())
    except (OSError, json.JSONDecodeError, QcidgenError, KeyError) as exc:
        print(f"error: cannot read diagram: {exc}", file=sys.stderr)
        return EXIT_IO
    report = check_properties(model)
    print(report.to_table())
    return EXIT_OK if report.all_ok else EXIT_CHECK_FAILED


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        bundle = load_bundle(args.bundle)
    except QcidgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    uvicorn.run(create_app(bundle), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcidgen")
    sub = parser.add_subparsers(dest="command", required=True)

    default_bundle = os.environ.get("QCIDGEN_BUNDLE", str(medical_pack_path()))

    d = sub.add_parser("derive", help="derive a model from a term list")
    d.add_argument("--bundle", default=default_bundle)
    d.add_argument("--terms", help="comma-separated inline terms")
    d.add_argument("--terms-file", help="JSON file with a term list")
    d.add_argument("--mode", choices=("policy", "interactive", "script"),
                   default="policy")
    d.add_argument("--script", help="JSON answer list (mode=script)")
    d.add_argument("--out-dir", default="out")
    d.set_defaults(fn=cmd_derive)

    c = sub.add_parser("check", help="check structural properties of a diagram")
    c.add_argument("diagram")
    c.set_defaults(fn=cmd_check)

    s = sub.add_parser("serve", help="run the session service")
    s.add_argument("--bundle", default=default_bundle)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8754)
    s.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "derive" and args.mode == "script" and not args.script:
        print("error: --script is required with --mode script", file=sys.stderr)
        return 2
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
