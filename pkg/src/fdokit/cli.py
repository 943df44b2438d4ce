"""Command-line interface.

Configuration precedence: flags > ``FDO_*`` environment variables >
``fdo.toml`` (or ``--config``) > defaults.

Exit codes: 0 success, 1 operational failure or non-conformance, 2 usage
error or malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from fdokit.conformance import render_report
from fdokit.errors import FdoError, MalformedRecordDocument, MalformedSnapshot, ValidationFailed
from fdokit.graph import (
    build_graph,
    export_graph,
    path as graph_path,
    strongly_connected_components,
)
from fdokit.model import ValidationOutcome, dumps, parse_record
from fdokit.pid import is_pid
from fdokit.registry import DEFAULT_PREFIX, PidRegistry
from fdokit.resources import ENERGY, EXTERNAL, FIXTURES
from fdokit.toolkit import Toolkit

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

logger = logging.getLogger("fdokit")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TRUE_WORDS = {"1", "true", "yes", "on"}


@dataclass
class CliConfig:
    registry_path: Path = Path(".fdo")
    fixtures: list[str] = field(default_factory=lambda: [str(ENERGY), str(EXTERNAL)])
    pid_prefix: str = DEFAULT_PREFIX
    online: bool = False
    output_format: str = "table"
    resource_root: str = str(FIXTURES)
    host: str = "127.0.0.1"
    port: int = 8000


def _as_bool(value) -> bool:
    return value if isinstance(value, bool) else str(value).strip().lower() in TRUE_WORDS


def load_config(args: argparse.Namespace, environ: Mapping[str, str] = os.environ) -> CliConfig:
    cfg = CliConfig()
    config_file = Path(args.config) if args.config else Path("fdo.toml")
    if config_file.is_file():
        with config_file.open("rb") as fh:
            data = tomllib.load(fh)
        data = data.get("fdo", data)
        for key in ("registry_path", "pid_prefix", "output_format", "resource_root", "host", "port"):
            if key in data:
                setattr(cfg, key, data[key])
        if "fixtures" in data:
            cfg.fixtures = [str(f) for f in data["fixtures"]]
        if "online" in data:
            cfg.online = _as_bool(data["online"])
    elif args.config:
        raise FileNotFoundError(args.config)

    if "FDO_REGISTRY_PATH" in environ:
        cfg.registry_path = environ["FDO_REGISTRY_PATH"]
    if "FDO_PID_PREFIX" in environ:
        cfg.pid_prefix = environ["FDO_PID_PREFIX"]
    if "FDO_ONLINE" in environ:
        cfg.online = _as_bool(environ["FDO_ONLINE"])
    if "FDO_FIXTURES" in environ:
        cfg.fixtures = [p for p in environ["FDO_FIXTURES"].split(os.pathsep) if p]
    if "FDO_OUTPUT_FORMAT" in environ:
        cfg.output_format = environ["FDO_OUTPUT_FORMAT"]
    if "FDO_HOST" in environ:
        cfg.host = environ["FDO_HOST"]
    if "FDO_PORT" in environ:
        cfg.port = environ["FDO_PORT"]

    if args.registry_path is not None:
        cfg.registry_path = args.registry_path
    if args.fixtures is not None:
        cfg.fixtures = args.fixtures
    if args.pid_prefix is not None:
        cfg.pid_prefix = args.pid_prefix
    if args.online is not None:
        cfg.online = args.online
    if args.output_format is not None:
        cfg.output_format = args.output_format
    if args.resource_root is not None:
        cfg.resource_root = args.resource_root
    if getattr(args, "host", None) is not None:
        cfg.host = args.host
    if getattr(args, "port", None) is not None:
        cfg.port = args.port
    cfg.port = int(cfg.port)
    cfg.registry_path = Path(cfg.registry_path)
    if cfg.output_format not in ("table", "document"):
        raise ValueError(f"unknown output format {cfg.output_format!r}")
    return cfg


def _global_options() -> argparse.ArgumentParser:
    # defaults are suppressed so the same options can appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="configuration file (default: ./fdo.toml)")
    common.add_argument("--registry-path", help="directory for locally registered records and profiles")
    common.add_argument("--fixtures", action="append", help="fixture directory to load (repeatable)")
    common.add_argument("--pid-prefix", help="handle prefix for minted PIDs")
    common.add_argument("--online", action="store_true", help="resolve unknown PIDs via the Handle proxy")
    common.add_argument("--output-format", choices=["table", "document"])
    common.add_argument("--resource-root", help="base directory for relative file: locations")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


GLOBAL_OPTIONS = ("config", "registry_path", "fixtures", "pid_prefix", "online", "output_format", "resource_root", "verbose")


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog="fdokit", description="FAIR Digital Object toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(group, name, **kwargs):
        return group.add_parser(name, parents=[common], **kwargs)

    profile = leaf(sub, "profile", help="profile snapshots").add_subparsers(dest="action", required=True)
    p = leaf(profile, "import", help="import a profile snapshot")
    p.add_argument("file")

    record = leaf(sub, "record", help="information records").add_subparsers(dest="action", required=True)
    p = leaf(record, "create", help="instantiate a profile and register the record")
    p.add_argument("--profile", required=True)
    p.add_argument("--set", dest="values", action="append", default=[], metavar="ATTR_PID=VALUE")
    p = leaf(record, "validate", help="validate a record document or registered PID")
    p.add_argument("target")
    p.add_argument("--against", help="profile PID to validate against")

    p = leaf(sub, "resolve", help="resolve a PID")
    p.add_argument("pid")

    graph = leaf(sub, "graph", help="FDO graph").add_subparsers(dest="action", required=True)
    p = leaf(graph, "build", help="build the graph from fixture directories")
    p.add_argument("dirs", nargs="*")
    p.add_argument("--export", choices=["triples", "dot"])
    p = leaf(graph, "scc", help="strongly connected components")
    p.add_argument("dirs", nargs="*")
    p = leaf(graph, "path", help="shortest path between two FDOs")
    p.add_argument("source")
    p.add_argument("target")

    ops = leaf(sub, "ops", help="operations").add_subparsers(dest="action", required=True)
    p = leaf(ops, "list", help="operations associated with a record")
    p.add_argument("pid")
    p = leaf(ops, "run", help="execute an operation on a record")
    p.add_argument("name")
    p.add_argument("pid")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")

    conf = leaf(sub, "conformance", help="conformance rubric").add_subparsers(dest="action", required=True)
    p = leaf(conf, "check", help="check PIDs or snapshot files")
    p.add_argument("targets", nargs="+")

    p = leaf(sub, "serve", help="run the HTTP service")
    p.add_argument("--host", default=None, help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, default=None, help="bind port (default 8000)")
    return parser


class Cli:
    def __init__(self, cfg: CliConfig, out=sys.stdout, err=sys.stderr) -> None:
        self.cfg = cfg
        self.out = out
        self.err = err
        self._toolkit: Optional[Toolkit] = None

    @property
    def toolkit(self) -> Toolkit:
        if self._toolkit is None:
            self._toolkit = Toolkit.create(
                fixtures=self.cfg.fixtures,
                storage_dir=self.cfg.registry_path / "records",
                prefix=self.cfg.pid_prefix,
                online=self.cfg.online,
                resource_root=self.cfg.resource_root,
                profile_dir=self.cfg.registry_path / "profiles",
            )
        return self._toolkit

    @property
    def document_output(self) -> bool:
        return self.cfg.output_format == "document"

    def emit(self, document, table: str) -> None:
        self.out.write(json.dumps(document, indent=2) + "\n" if self.document_output else table)

    def _load_record(self, target: str):
        path = Path(target)
        if path.is_file():
            return parse_record(path.read_text(encoding="utf-8"), lenient=True), path.read_text(encoding="utf-8")
        if is_pid(target):
            return self.toolkit.registry.resolve(target).record, None
        raise MalformedRecordDocument(f"{target}: neither a file nor a PID")

    # -- commands ----------------------------------------------------------------------

    def profile_import(self, args) -> int:
        text = Path(args.file).read_text(encoding="utf-8")
        profile = self.toolkit.types.import_profile_snapshot(text)
        outcome = self.toolkit.types.validate_profile(profile)
        target = self.cfg.registry_path / "profiles"
        target.mkdir(parents=True, exist_ok=True)
        name = profile.profile_pid.replace("/", "_") + ".json"
        (target / name).write_text(text, encoding="utf-8")
        self.emit(
            {"profile_pid": profile.profile_pid, "attributes": len(profile.attributes), **outcome.to_document()},
            f"imported {profile.profile_pid} ({len(profile.attributes)} attributes)"
            + ("" if outcome.valid else f"; not a complete KIP: {', '.join(sorted(outcome.missing_roles))}")
            + "\n",
        )
        return EXIT_OK

    def record_create(self, args) -> int:
        values: dict[str, list[str]] = {}
        for item in args.values:
            key, sep, value = item.partition("=")
            if not sep:
                self.err.write(f"--set expects ATTR_PID=VALUE, got {item!r}\n")
                return EXIT_USAGE
            values.setdefault(key, []).append(value)
        tk = self.toolkit
        try:
            record = tk.records.instantiate_profile(args.profile, values)
        except ValidationFailed as exc:
            self._outcome(exc.outcome)
            return EXIT_FAIL
        pid = tk.records.register_record(record)
        self.emit({"pid": pid}, pid + "\n")
        return EXIT_OK

    def _outcome(self, outcome: ValidationOutcome) -> None:
        lines = ["valid" if outcome.valid else "invalid"]
        lines += [f"  {v}  {v.attribute_pid or '-'}  {v.detail}" for v in outcome.violations]
        self.emit(outcome.to_document(), "\n".join(lines) + "\n")

    def record_validate(self, args) -> int:
        record, _ = self._load_record(args.target)
        outcome = self.toolkit.records.validate_record(record, against=args.against)
        self._outcome(outcome)
        return EXIT_OK if outcome.valid else EXIT_FAIL

    def resolve(self, args) -> int:
        entry = self.toolkit.registry.resolve(args.pid)
        doc = self.toolkit.records.serialize(entry.record)
        self.out.write(dumps(doc) if not self.document_output else dumps({**doc, "source": entry.source.value}))
        return EXIT_OK

    def _graph_for(self, dirs: Sequence[str]):
        if not dirs:
            return self.toolkit.graph()
        registry = PidRegistry()
        for d in dirs:
            registry.load_fixture_set(d)
        return build_graph(registry.records(), self.toolkit.types)

    def graph_build(self, args) -> int:
        graph = self._graph_for(args.dirs)
        if args.export:
            self.out.write(export_graph(graph, args.export))
            return EXIT_OK
        self.emit(
            {
                "nodes": sorted(graph.nodes),
                "predicates": sorted(graph.predicates),
                "triples": [list(t) for t in sorted(graph.triples)],
            },
            f"nodes: {len(graph.nodes)}\npredicates: {len(graph.predicates)}\ntriples: {len(graph.triples)}\n",
        )
        return EXIT_OK

    def graph_scc(self, args) -> int:
        components = strongly_connected_components(self._graph_for(args.dirs))
        self.emit(components, "".join(" ".join(c) + "\n" for c in components))
        return EXIT_OK

    def graph_path(self, args) -> int:
        hops = graph_path(self.toolkit.graph(), args.source, args.target)
        if hops is None:
            self.emit({"reachable": False, "path": None}, "unreachable\n")
            return EXIT_FAIL
        self.emit(
            {"reachable": True, "path": [list(t) for t in hops]},
            "".join(f"{t.subject} {t.predicate} {t.object}\n" for t in hops),
        )
        return EXIT_OK

    def ops_list(self, args) -> int:
        tk = self.toolkit
        record = tk.registry.resolve(args.pid).record
        ops = tk.operations.associate(record)
        docs = [{**d.to_document(), "applicable": tk.operations.applicable(d, record)} for d in ops]
        table = "".join(
            f"{d['name']:<22} {d['target']:<13} {'applicable' if d['applicable'] else 'not applicable'}\n" for d in docs
        )
        self.emit(docs, table)
        return EXIT_OK

    def ops_run(self, args) -> int:
        params = {}
        for item in args.param:
            key, sep, value = item.partition("=")
            if not sep:
                self.err.write(f"--param expects KEY=VALUE, got {item!r}\n")
                return EXIT_USAGE
            params[key] = value
        tk = self.toolkit
        record = tk.registry.resolve(args.pid).record
        result = tk.operations.execute(args.name, record, params)
        doc = result.to_document()
        if args.name == "get_digital_resource" and not self.document_output:
            doc["payload"].pop("content", None)
        self.emit(doc, f"{result.operation}: {result.status}\n" + json.dumps(doc["payload"], indent=2) + "\n")
        return EXIT_OK if result.status in ("ok", "match") else EXIT_FAIL

    def conformance_check(self, args) -> int:
        checker = self.toolkit.conformance
        reports = []
        for target in args.targets:
            path = Path(target)
            if path.is_file():
                reports.append(checker.check_document(path.read_text(encoding="utf-8")))
            elif is_pid(target):
                reports.append(checker.check(self.toolkit.registry.resolve(target).record))
            else:
                raise MalformedRecordDocument(f"{target}: neither a file nor a PID")
        if self.document_output:
            self.out.write(json.dumps([r.to_document() for r in reports], indent=2) + "\n")
        else:
            self.out.write(render_report(reports, "table"))
        return EXIT_OK if all(r.overall for r in reports) else EXIT_FAIL

    def serve(self, args) -> int:
        import uvicorn

        from fdokit.service import create_app

        uvicorn.run(create_app(self.toolkit), host=self.cfg.host, port=self.cfg.port)
        return EXIT_OK


COMMANDS = {
    ("profile", "import"): Cli.profile_import,
    ("record", "create"): Cli.record_create,
    ("record", "validate"): Cli.record_validate,
    ("resolve", None): Cli.resolve,
    ("graph", "build"): Cli.graph_build,
    ("graph", "scc"): Cli.graph_scc,
    ("graph", "path"): Cli.graph_path,
    ("ops", "list"): Cli.ops_list,
    ("ops", "run"): Cli.ops_run,
    ("conformance", "check"): Cli.conformance_check,
    ("serve", None): Cli.serve,
}


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    for name in GLOBAL_OPTIONS:
        if not hasattr(args, name):
            setattr(args, name, None)
    return args


def main(argv: Optional[Sequence[str]] = None, out=None, err=None, environ: Mapping[str, str] = os.environ) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = parse_arguments(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args, environ)
    except (OSError, ValueError) as exc:
        err.write(f"configuration error: {exc}\n")
        return EXIT_USAGE
    handler = COMMANDS[(args.command, getattr(args, "action", None))]
    try:
        return handler(Cli(cfg, out, err), args)
    except (MalformedRecordDocument, MalformedSnapshot) as exc:
        err.write(f"{exc.code}: {exc.detail}\n")
        return EXIT_USAGE
    except FdoError as exc:
        err.write(f"{exc.code}: {exc.detail}\n")
        return EXIT_FAIL
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
