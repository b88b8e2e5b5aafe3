"""Batch command-line interface: validate, score, critique, report, serve.

Exit codes: 0 success (including findings that are the product, not a
failure), 1 when the subcommand's own check fails (validate with
violations), 2 for usage, IO, parse, and configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import PropagationConfig, propagate
from .errors import ArgugraphError, ProviderConfigError
from .figures import save_credibility_chart, save_graph_diagram
from .graph import validate_graph
from .llm.provider import provider_from_env
from .patterns import default_pattern_bank, detect_semantic, detect_structural, load_pattern_bank_file
from .report import (
    generate_report,
    markdown_filename,
    render_markdown,
    report_to_document,
    write_scores_csv,
)
from .serialize import load_graph_file, save_graph_file


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def cmd_validate(args: argparse.Namespace) -> int:
    graph = load_graph_file(args.file, validate=False)
    violations = validate_graph(graph)
    if args.json:
        _print_json(
            {"violations": [{"code": v.code, "subject": v.subject, "message": v.message} for v in violations]}
        )
    else:
        for violation in violations:
            print(f"{violation.subject}  {violation.code}  {violation.message}")
        print(f"{len(violations)} violation(s)")
    return 1 if violations else 0


def cmd_score(args: argparse.Namespace) -> int:
    graph = load_graph_file(args.file)
    config = PropagationConfig(epsilon=args.epsilon, max_iterations=args.max_iters, delta=args.delta)
    result = propagate(graph, config)
    if args.json:
        _print_json(result.to_document())
    else:
        for node_id in graph.nodes:
            print(f"{node_id:<16}{result.scores[node_id]: .5f}")
        status = "converged in" if result.converged else "not converged after"
        print(f"{status} {result.iterations_used} iteration(s) (max residual {result.max_residual:.3e})")
    if not result.converged:
        print("warning: propagation did not converge; scores are the last iterate", file=sys.stderr)
    if args.in_place:
        save_graph_file(graph, args.file)
    return 0


def cmd_critique(args: argparse.Namespace) -> int:
    graph = load_graph_file(args.file)
    bank = load_pattern_bank_file(args.bank) if args.bank else default_pattern_bank()
    findings = detect_structural(graph, bank)
    diagnostics: list[str] = []
    if args.semantic:
        provider = provider_from_env()
        detection = detect_semantic(graph, bank, provider)
        findings = findings + detection.findings
        diagnostics = detection.diagnostics
    if args.json:
        _print_json(
            {"findings": [f.to_document() for f in findings], "diagnostics": diagnostics}
        )
    else:
        for finding in findings:
            nodes = ",".join(finding.involved_node_ids) or "-"
            edges = ",".join(finding.involved_edge_ids) or "-"
            print(f"{finding.pattern_id}  [{finding.severity.value}]  nodes={nodes}  edges={edges}")
            print(f"  {finding.explanation}")
        print(f"{len(findings)} finding(s)")
    for diagnostic in diagnostics:
        print(f"diagnostic: {diagnostic}", file=sys.stderr)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    graph = load_graph_file(args.file)
    result = propagate(graph, PropagationConfig())
    bank = default_pattern_bank()
    findings = detect_structural(graph, bank)
    try:
        provider = provider_from_env()
    except ProviderConfigError:
        provider = None
    if args.semantic:
        if provider is None:
            raise ProviderConfigError("--semantic requires a configured provider")
        findings = findings + detect_semantic(graph, bank, provider).findings

    report = generate_report(graph, result, findings, provider=provider)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{graph.id}-report.json"
    md_path = out_dir / markdown_filename(graph.id)
    csv_path = out_dir / f"{graph.id}-scores.csv"
    chart_path = out_dir / f"{graph.id}-credibility.png"
    diagram_path = out_dir / f"{graph.id}-graph.png"

    json_path.write_text(json.dumps(report_to_document(report), indent=2) + "\n", encoding="utf-8")
    md_path.write_text(render_markdown(report), encoding="utf-8")
    write_scores_csv(graph, result, csv_path)
    save_credibility_chart(graph, result.scores, chart_path)
    save_graph_diagram(graph, diagram_path)

    for path in (json_path, md_path, csv_path, chart_path, diagram_path):
        print(f"wrote {path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argugraph",
        description="Analyze argumentation graphs: validate, score, critique, report, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a graph file against every invariant")
    p_validate.add_argument("file")
    p_validate.add_argument("--json", action="store_true", help="machine-readable output")
    p_validate.set_defaults(func=cmd_validate)

    p_score = sub.add_parser("score", help="propagate credibility scores")
    p_score.add_argument("file")
    p_score.add_argument("--delta", type=float, default=None, help="override the graph's evidence scaling")
    p_score.add_argument("--epsilon", type=float, default=1e-6, help="convergence tolerance")
    p_score.add_argument("--max-iters", type=int, default=1000, help="iteration budget")
    p_score.add_argument("--in-place", action="store_true", help="write scores back into the file")
    p_score.add_argument("--json", action="store_true", help="machine-readable output")
    p_score.set_defaults(func=cmd_score)

    p_critique = sub.add_parser("critique", help="match the graph against the pattern bank")
    p_critique.add_argument("file")
    p_critique.add_argument("--bank", default=None, help="pattern bank YAML (default: built-in bank)")
    p_critique.add_argument("--semantic", action="store_true",
                            help="also run provider-backed semantic patterns")
    p_critique.add_argument("--json", action="store_true", help="machine-readable output")
    p_critique.set_defaults(func=cmd_critique)

    p_report = sub.add_parser("report", help="write the eight-section report plus figures")
    p_report.add_argument("file")
    p_report.add_argument("-o", "--output", required=True, help="output directory")
    p_report.add_argument("--semantic", action="store_true",
                          help="include provider-backed semantic findings")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ArgugraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
