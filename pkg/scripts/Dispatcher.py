import argparse
import hashlib
import json
import logging
import random
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from adapters.documents import canonical_json
from adapters.schemas import RunReport
from algebra.pathalg import AlgebraInputError
from config.logger import logger
from config.settings import DEFAULT_SEED, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, LOG_LEVEL
from scripts.CommandUnit import CommandUnit, default_units, render_dot

# Flags that change presentation only and stay out of the digest
_PRESENTATION_FLAGS = {"format", "log_level", "command"}


class UsageError(AlgebraInputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def input_digest(command: str, document: Any, flags: Dict[str, Any]) -> str:
    payload = {"command": command, "document": document, "flags": flags}
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def _table(report: RunReport, rows: Optional[List[Dict[str, Any]]]) -> str:
    if not rows:
        rows = [{"key": k, "value": json.dumps(v, sort_keys=True)} for k, v in report.result.items()]
    frame = pd.DataFrame(rows)
    header = f"{' '.join(report.command)}  passed={report.passed}  digest={report.digest[:12]}"
    return header + "\n\n" + frame.to_markdown(index=False) + "\n"


class Dispatcher:
    def __init__(self, units: Optional[Dict[str, CommandUnit]] = None):
        self.units = units or default_units()
        self.parser = self._build_parser()
        self.last_context: Optional[Dict[str, Any]] = None

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = _Parser(prog="cyquivers", description="Graded Calabi-Yau algebras from McKay quivers and dimers")
        parser.add_argument("--format", default="json", choices=["json", "table", "dot"])
        parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
        parser.add_argument("--log-level", dest="log_level", default=LOG_LEVEL)
        commands = parser.add_subparsers(dest="command", parser_class=_Parser)
        commands.required = True
        for name, unit in self.units.items():
            sub = commands.add_parser(name, help=unit.help)
            # the global flags are also accepted after the subcommand
            sub.add_argument("--format", default=argparse.SUPPRESS, choices=["json", "table", "dot"])
            sub.add_argument("--seed", type=int, default=argparse.SUPPRESS)
            sub.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS)
            unit.configure(sub)
        return parser

    @staticmethod
    def _record_timing(context: Dict[str, Any], unit_key: str, duration: float) -> None:
        timings = context.setdefault("timings", {})
        timings[f"{unit_key}_secs"] = duration

    def _run_unit(self, unit_key: str, context: Dict[str, Any]) -> Dict[str, Any]:
        start = time.perf_counter()
        try:
            return self.units[unit_key].run(context)
        finally:
            self._record_timing(context, unit_key, time.perf_counter() - start)

    def dispatch(self, argv: Sequence[str]) -> Tuple[int, str]:
        """Exit code and the text for standard output."""
        argv = list(argv)
        args = self.parser.parse_args(argv)
        logger.setLevel(getattr(logging, str(args.log_level).upper(), logging.INFO))
        random.seed(args.seed)
        context: Dict[str, Any] = {"args": args, "passed": True, "timings": {}}
        context = self._run_unit(args.command, context)
        self.last_context = context
        elapsed = context["timings"][f"{args.command}_secs"]
        flags = {k: v for k, v in sorted(vars(args).items()) if k not in _PRESENTATION_FLAGS}
        report = RunReport(
            command=argv,
            digest=input_digest(args.command, context.get("document"), flags),
            result=context.get("result", {}),
            passed=bool(context.get("passed", True)),
            elapsed_ms=round(elapsed * 1000.0, 3),
        )
        logger.info("%s finished in %.1f ms: passed=%s", args.command, report.elapsed_ms, report.passed)
        if args.format == "dot":
            text = render_dot(context)
        elif args.format == "table":
            text = _table(report, context.get("rows"))
        else:
            text = json.dumps(report.model_dump(), indent=2, default=str) + "\n"
        return (EXIT_OK if report.passed else EXIT_CHECK_FAILED), text


def run(argv: Sequence[str], dispatcher: Optional[Dispatcher] = None) -> Tuple[int, str, str]:
    """(exit code, stdout text, stderr text); input errors become exit 2 with a diagnostic."""
    dispatcher = dispatcher or Dispatcher()
    try:
        code, out = dispatcher.dispatch(argv)
        return code, out, ""
    except AlgebraInputError as exc:
        payload = getattr(exc, "payload", None) or {}
        logger.warning("Input error: %s", exc)
        detail = f"error: {exc}"
        if payload:
            detail += "\n" + json.dumps(payload, sort_keys=True, default=str)
        return EXIT_INPUT_ERROR, "", detail + "\n"
