"""Module entry point for the Guarded Commands workbench."""
import argparse
import logging
from pathlib import Path
import sys

from .controller import OUTPUT_FORMATS, RunConfig, WorkbenchController
from .formatting import format_version, load_package_info
from .services import ANALYSIS_KINDS, DATALOG_KINDS, SecflowMode, Widening
from .settings import WORKLIST_CHOICES, SettingsStorage


def _thresholds(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted({int(part) for part in text.split(",") if part.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _names(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _relation_input(text: str) -> tuple[str, Path]:
    name, separator, path = text.partition("=")
    if not separator or not name or not path:
        raise argparse.ArgumentTypeError(f"expected PREDICATE=FILE, got {text!r}")
    return name.strip(), Path(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gclwb", description="Guarded Commands analysis workbench")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--settings", type=Path, help="Settings file (default ~/.gclwb_settings.json)")
    parser.add_argument("--version", action="store_true", help="Print the version and exit")
    commands = parser.add_subparsers(dest="command")

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        command = commands.add_parser(name, help=help_text)
        command.add_argument("program", type=Path, help="Program file")
        command.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
        return command

    graph = add_command("graph", "Print the program graph")
    graph.add_argument("--paths", action="store_true", help="List complete paths up to the configured length")

    run = add_command("run", "Execute the program from an initial memory")
    run.add_argument("--memory", type=Path, help="Initial memory (JSON)")
    run.add_argument("--seed", type=int)
    run.add_argument("--max-steps", type=int)

    analyze = add_command("analyze", "Solve an analysis on the program graph")
    analyze.add_argument("--analysis", required=True, choices=ANALYSIS_KINDS)
    analyze.add_argument("--worklist", choices=WORKLIST_CHOICES)
    analyze.add_argument("--widening", default=Widening.NONE.value, choices=[w.value for w in Widening])
    analyze.add_argument("--K", type=_thresholds, help="Interval endpoints, e.g. 0,9,10")
    analyze.add_argument("--memory", type=Path, help="Concrete memory giving array lengths (JSON)")
    analyze.add_argument("--abstract-memory", type=Path, help="Initial abstract memory (JSON)")
    analyze.add_argument("--live-at-exit", type=_names, default=(), help="Names live after the program, e.g. y,z")
    analyze.add_argument("--trace", action="store_true", help="Print every worklist step")
    analyze.add_argument("--whole-components", action="store_true")

    secflow = add_command("secflow", "Infer information flows or type the program against a policy")
    secflow.add_argument("--mode", default=SecflowMode.MEASURE.value, choices=[m.value for m in SecflowMode])
    secflow.add_argument("--policy", type=Path, help="Security policy (JSON)")

    datalog = add_command("datalog", "Solve an analysis through Datalog, or solve a Datalog program file")
    datalog.add_argument("--analysis", choices=DATALOG_KINDS)
    datalog.add_argument(
        "--input",
        dest="inputs",
        type=_relation_input,
        action="append",
        default=[],
        help="Rank-0 relation as PREDICATE=FILE.csv (repeatable)",
    )
    return parser


def config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        program=args.program,
        analysis=getattr(args, "analysis", None),
        worklist=getattr(args, "worklist", None),
        widening=getattr(args, "widening", Widening.NONE.value),
        K=getattr(args, "K", None),
        memory=getattr(args, "memory", None),
        abstract_memory=getattr(args, "abstract_memory", None),
        policy=getattr(args, "policy", None),
        mode=getattr(args, "mode", SecflowMode.MEASURE.value),
        output_format=args.output_format,
        seed=getattr(args, "seed", None),
        max_steps=getattr(args, "max_steps", None),
        live_at_exit=getattr(args, "live_at_exit", ()),
        trace=getattr(args, "trace", False),
        whole_components=getattr(args, "whole_components", False),
        paths=getattr(args, "paths", False),
        inputs=tuple(getattr(args, "inputs", ())),
    )


def main(argv: list[str] | None = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )

    if args.version:
        print(format_version(load_package_info()))
        sys.exit(0)
    if args.command is None:
        parser.print_help()
        sys.exit(1)

    controller = WorkbenchController(storage=SettingsStorage(args.settings))
    sys.exit(controller.run(config_from(args)))


if __name__ == "__main__":
    main()
