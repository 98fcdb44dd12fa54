"""Command-line interface: REPL, script runner, dataset tools, explanations."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional, TextIO

from .calculus import Closure, Judgment
from .dialogue import Session, read_script
from .engine import Engine
from .harness.dataset import dump_dataset, generate_dataset, parse_dataset
from .harness.evaluate import evaluate, relabel
from .harness.soundness import check_soundness
from .logic import LogicError
from .sexpr import SExprError

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_MISMATCH = 4
EXIT_INVARIANT = 5

# parse, vocabulary, dataset-format and file errors all surface as these
INPUT_ERRORS = (ValueError, SExprError, LogicError, OSError)

HELP = """\
Type statements such as:
  I like juice.
  Do not share my preferences about drinks with Socrates.
  What does Plato like?
Commands:
  :speaker <name>   switch the current speaker
  :explain          show the reasoning behind the last answer
  :norms            list the testimony frames with timestamps
  :help             this text
  :quit             leave (the session is saved first if --save was given)"""


def shipped_dataset_text() -> str:
    return resources.files("normguard").joinpath("data/dataset.txt").read_text(encoding="utf-8")


def _engine(args) -> Engine:
    return Engine.from_files(args.taxonomy, args.kb or (), Closure(args.closure), args.depth)


def _judgment_json(j: Judgment) -> dict:
    return {
        "agent": j.agent, "query": j.query.value, "verdict": j.verdict.value, "closure": j.closure.value,
        "basis": j.basis.norm or "closure", "examined": list(j.basis.examined),
        "behavior": str(j.behavior), "context": str(j.context), "trace": list(j.trace),
    }


def explain_last(session: Session) -> List[Judgment]:
    out = session.last_outcome
    if out is None:
        return []
    return list(out.judgments)


def norms_listing(session: Session) -> List[dict]:
    return [{"id": f.id, "owner": f.owner, "timestamp": f.timestamp, "evaluation": f.evaluation.value,
             "context": str(f.context), "behavior": str(f.behavior)} for f in session.engine.frames()]


class Repl:
    def __init__(self, session: Session, out: TextIO, fmt: str = "text", save: Optional[Path] = None):
        self.session = session
        self.out = out
        self.fmt = fmt
        self.save = save

    def emit(self, text: str, data=None) -> None:
        if self.fmt == "json":
            print(json.dumps(data if data is not None else {"output": text}), file=self.out)
        else:
            print(text, file=self.out)

    def command(self, line: str) -> bool:
        """Handle a ``:`` command.  Returns False when the loop should stop."""
        name, _, arg = line[1:].partition(" ")
        name, arg = name.lower(), arg.strip()
        if name == "quit":
            return False
        if name == "speaker" and arg:
            self.line(f"#speaker: {arg}")
        elif name == "explain":
            judgments = explain_last(self.session)
            if not judgments:
                reason = self.session.last_outcome.reason if self.session.last_outcome else "no query yet"
                self.emit(reason, {"judgments": [], "reason": reason})
            else:
                self.emit("\n\n".join(j.explain() for j in judgments),
                          {"judgments": [_judgment_json(j) for j in judgments]})
        elif name == "norms":
            rows = norms_listing(self.session)
            text = "\n".join(f"{r['id']} t={r['timestamp']} {r['owner']} {r['evaluation']} "
                             f"context={r['context']} behavior={r['behavior']}" for r in rows)
            self.emit(text or "no norms", {"norms": rows})
        else:
            self.emit(HELP, {"help": HELP})
        return True

    def line(self, text: str) -> None:
        try:
            response = self.session.say(text)
        except (ValueError, LogicError) as e:
            self.emit(f"error: {e}", {"error": str(e)})
            return
        if response is not None:
            self.emit(response.text, {"speaker": self.session.speaker, "response": response.text,
                                      "kind": response.kind.value})

    def run(self, lines) -> None:
        for raw in lines:
            text = raw.strip()
            if not text:
                continue
            if text.startswith(":"):
                if not self.command(text):
                    break
            else:
                self.line(text)
        if self.save is not None:
            self.save.write_text(self.session.script(), encoding="utf-8")


def _interactive_lines(prompt: str = "> "):
    while True:
        try:
            yield input(prompt)
        except EOFError:
            return


def cmd_repl(args, out: TextIO) -> int:
    session = Session(_engine(args))
    save = Path(args.save) if args.save else None
    if save is not None and save.exists():
        for line in read_script(save.read_text(encoding="utf-8")):
            session.say(line)
    repl = Repl(session, out, args.format, save)
    lines = _interactive_lines() if sys.stdin.isatty() else sys.stdin
    if sys.stdin.isatty() and args.format == "text":
        print("normguard dialogue (:help for commands)", file=out)
    repl.run(lines)
    return EXIT_OK


def _run_script(args) -> Session:
    session = Session(_engine(args))
    for line in read_script(Path(args.script).read_text(encoding="utf-8")):
        session.say(line)
    return session


def cmd_run_script(args, out: TextIO) -> int:
    session = _run_script(args)
    turns = [{"speaker": t.speaker, "text": t.text, "response": t.response.text if t.response else None}
             for t in session.turns]
    if args.format == "json":
        print(json.dumps({"transcript": turns}, indent=2), file=out)
    else:
        for t in turns:
            if t["response"] is None:
                print(t["text"], file=out)
            else:
                print(f"{t['speaker']}: {t['text']}\n  -> {t['response']}", file=out)
    if args.save:
        Path(args.save).write_text(session.script(), encoding="utf-8")
    return EXIT_OK


def cmd_explain(args, out: TextIO) -> int:
    session = _run_script(args)
    judgments = explain_last(session)
    if args.format == "json":
        reason = session.last_outcome.reason if session.last_outcome else ""
        print(json.dumps({"judgments": [_judgment_json(j) for j in judgments], "reason": reason}, indent=2),
              file=out)
    elif judgments:
        print("\n\n".join(j.explain() for j in judgments), file=out)
    else:
        print(session.last_outcome.reason if session.last_outcome else "no query in script", file=out)
    return EXIT_OK


def cmd_gen_dataset(args, out: TextIO) -> int:
    engine = _engine(args)
    cases = generate_dataset(engine=engine)
    if Closure(args.closure) is not Closure.PROHIBITIVE:
        cases = relabel(cases, Closure(args.closure), engine)
    text = dump_dataset(cases)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {len(cases)} cases to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_eval_dataset(args, out: TextIO) -> int:
    text = Path(args.path).read_text(encoding="utf-8") if args.path else shipped_dataset_text()
    cases = parse_dataset(text)
    closure = Closure(args.closure)
    if args.relabel:
        cases = relabel(cases, closure)
    report = evaluate(cases, closure, jobs=args.jobs)
    print(report.to_json() if args.format == "json" else report.summary(), file=out)
    if report.guard_rail_violations:
        return EXIT_INVARIANT
    return EXIT_OK if report.all_correct else EXIT_MISMATCH


def cmd_check_soundness(args, out: TextIO) -> int:
    report = check_soundness(args.stores, args.probes, args.seed, args.max_frames, engine=_engine(args))
    if args.format == "json":
        print(json.dumps({"stores": report.stores, "probes": report.probes, "checks": report.checks,
                          "violations": [v.__dict__ for v in report.violations]}, indent=2), file=out)
    else:
        print(report.summary(), file=out)
    return EXIT_OK if report.ok else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--closure", choices=[c.value for c in Closure], default=Closure.PROHIBITIVE.value)
    common.add_argument("--taxonomy", type=Path, help="topic taxonomy file (default: built in)")
    common.add_argument("--kb", type=Path, action="append", help="extra knowledge or norm file (repeatable)")
    common.add_argument("--depth", type=int, help="maximum nested rule expansions")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="normguard", description="Defeasible norm reasoning for dialogue agents.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("repl", parents=[common], help="interactive dialogue")
    r.add_argument("--save", help="load this script on start if it exists, and save the session to it")
    r.set_defaults(func=cmd_repl)

    s = sub.add_parser("run-script", parents=[common], help="run a dialogue script")
    s.add_argument("script")
    s.add_argument("--save", help="write the replayable session script here")
    s.set_defaults(func=cmd_run_script)

    e = sub.add_parser("explain", parents=[common], help="run a script and explain its last answer")
    e.add_argument("script")
    e.set_defaults(func=cmd_explain)

    g = sub.add_parser("gen-dataset", parents=[common], help="generate the synthetic dialogue dataset")
    g.add_argument("--out", help="output file (default: stdout)")
    g.set_defaults(func=cmd_gen_dataset)

    v = sub.add_parser("eval-dataset", parents=[common], help="evaluate a dataset file")
    v.add_argument("path", nargs="?", help="dataset file (default: the shipped dataset)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--relabel", action="store_true", help="recompute labels with the oracle under --closure")
    v.set_defaults(func=cmd_eval_dataset)

    c = sub.add_parser("check-soundness", parents=[common], help="fuzz random stores for incoherent verdicts")
    c.add_argument("--stores", type=int, default=10_000)
    c.add_argument("--probes", type=int, default=4)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-frames", type=int, default=6)
    c.set_defaults(func=cmd_check_soundness)
    return p


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    try:
        return args.func(args, out)
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
