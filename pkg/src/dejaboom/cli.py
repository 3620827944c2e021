"""Command-line interface: interactive play, batch analysis, graph export,
world validation and the HTTP server."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from dejaboom.errors import DejaboomError, EmptyInputError, SessionOverError
from dejaboom.gateway import RemoteConfig, RemoteProvider, RuleBasedProvider
from dejaboom.narrative import build_designer_graph, build_player_graph, emergence_report
from dejaboom.narrative.io import graph_from_json, graph_to_dot, graph_to_json
from dejaboom.session import load_records, persist_session, start_session, step
from dejaboom.world import bundled_world_path, load_world_file

WON = "WON"


def _fail(error: str, detail: str) -> int:
    print(json.dumps({"error": error, "detail": detail}), file=sys.stderr)
    return 1


def _load_world(path: str | None):
    return load_world_file(path or bundled_world_path())


def _make_provider(name: str, spec):
    if name == "rule":
        return RuleBasedProvider(spec)
    if name == "remote":
        return RemoteProvider(spec, config=RemoteConfig.from_env())
    raise DejaboomError(f"unknown provider '{name}'")


def cmd_play(args: argparse.Namespace) -> int:
    spec = _load_world(args.world)
    provider = _make_provider(args.provider, spec)
    session = start_session(spec, provider)
    print(f"[session {session.session_id}]")
    print(spec.intro_text)
    for line in sys.stdin:
        text = line.strip()
        if text.lower() in ("quit", "exit"):
            break
        try:
            records = step(session, text)
        except EmptyInputError:
            continue
        except SessionOverError:
            break
        for record in records:
            if record.role != "player":
                speaker = record.role.split(":", 1)[-1].replace("_", " ").title() if record.role.startswith("npc:") else ""
                prefix = f"{speaker}: " if speaker else ""
                print(f"{prefix}{record.text}")
        if session.status == WON:
            break
    if args.save:
        persist_session(args.save, session)
        print(f"[log saved to {Path(args.save) / (session.session_id + '.jsonl')}]")
    print(f"[{session.status} after day {session.state.day}]")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    spec = _load_world(args.world)
    provider = _make_provider(args.provider, spec)
    designer_files = sorted(Path(args.designer).glob("*.jsonl"))
    player_files = sorted(Path(args.logs).glob("*.jsonl"))
    if not designer_files:
        return _fail("no_designer_logs", f"no *.jsonl under {args.designer}")
    if not player_files:
        return _fail("no_player_logs", f"no *.jsonl under {args.logs}")

    designer = [(p.stem, load_records(p)) for p in designer_files]
    graph0 = build_designer_graph(designer, provider)
    player_graphs = {p.stem: build_player_graph(load_records(p), provider, p.stem) for p in player_files}
    report = emergence_report(graph0, player_graphs, provider)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "designer_graph.json").write_text(graph_to_json(graph0), encoding="utf-8")
    (out / "merged_graph.json").write_text(graph_to_json(report.merged_graph), encoding="utf-8")
    (out / "merged_graph.dot").write_text(graph_to_dot(report.merged_graph), encoding="utf-8")
    (out / "emergence.json").write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True), encoding="utf-8"
    )
    print(
        f"analyzed {len(player_graphs)} player log(s): "
        f"{report.total} emergent node(s), {report.unique} unique"
    )
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    graph = graph_from_json(Path(args.input).read_text(encoding="utf-8"))
    document = graph_to_dot(graph) if args.format == "dot" else graph_to_json(graph)
    if args.out:
        Path(args.out).write_text(document, encoding="utf-8")
    else:
        print(document, end="")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    spec = load_world_file(args.world)
    print(
        f"ok: {len(spec.locations)} locations, {len(spec.objects)} objects, "
        f"{len(spec.npcs)} npcs, {len(spec.milestones)} milestones"
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from dejaboom.server import AppConfig, create_app

    config = AppConfig.from_file(args.config) if args.config else AppConfig()
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dejaboom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="interactive terminal session (commands on stdin)")
    play.add_argument("--world", help="world JSON file (default: bundled village)")
    play.add_argument("--provider", choices=["rule", "remote"], default="rule")
    play.add_argument("--save", help="directory to persist the session log into")
    play.set_defaults(func=cmd_play)

    analyze = sub.add_parser("analyze", help="batch log analysis: graphs + emergence report")
    analyze.add_argument("--logs", required=True, help="directory of player *.jsonl logs")
    analyze.add_argument("--designer", required=True, help="directory of designer walkthrough logs")
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument("--world", help="world JSON file (default: bundled village)")
    analyze.add_argument("--provider", choices=["rule", "remote"], default="rule")
    analyze.set_defaults(func=cmd_analyze)

    graph = sub.add_parser("graph", help="convert a graph JSON document")
    graph_sub = graph.add_subparsers(dest="graph_command", required=True)
    export = graph_sub.add_parser("export", help="export graph JSON as dot or normalized json")
    export.add_argument("--in", dest="input", required=True, help="graph JSON file")
    export.add_argument("--format", choices=["dot", "json"], default="dot")
    export.add_argument("--out", help="output file (default: stdout)")
    export.set_defaults(func=cmd_graph)

    validate = sub.add_parser("validate", help="validate a world file")
    validate.add_argument("--world", required=True)
    validate.set_defaults(func=cmd_validate)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--config", help="AppConfig JSON file")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DejaboomError as exc:
        return _fail(type(exc).__name__, str(exc))
    except FileNotFoundError as exc:
        return _fail("file_not_found", str(exc))


if __name__ == "__main__":
    sys.exit(main())
