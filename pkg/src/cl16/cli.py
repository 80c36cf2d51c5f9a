"""Command-line front end.

Exit codes: 0 success, 1 invalid cirquent or failed check, 2 usage or
resource error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Callable, TextIO

from . import syntax
from .calculus import Proof, check_proof
from .harness import (
    cluster_pool,
    count_cirquents,
    differential_sweep,
    enumerate_cirquents,
    letter_pool,
    random_cirquent,
)
from .oracle import WAIT, Decision, OracleCapError, Resolve, decide_uniform
from .prover import prove
from .purifier import is_pure, purify
from .semantics import (
    ENVIRONMENT,
    MACHINE,
    LabeledMove,
    Move,
    all_interpretations,
    check_legal,
    format_interpretation,
    format_run,
    letter_masks_for,
    parse_interpretation,
    parse_run,
    resolution_of,
    truth_mask,
    UncoveredLetterError,
    win_eval,
)
from .syntax import (
    CirquentSyntaxError,
    ClusterId,
    RankOverflowError,
    cluster_sort_key,
    clusters_of,
    letters_of,
    parse,
    to_text,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(out: TextIO, args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=1), file=out)
    else:
        print(text, file=out)


def _expr(text: str):
    try:
        return parse(text)
    except CirquentSyntaxError as e:
        raise UsageError(f"syntax error: {e}") from None


# ---------------------------------------------------------------------------
# subcommands

def cmd_fmt(args, out):
    c = _expr(args.expr)
    _emit(out, args, to_text(c), {"text": to_text(c), "ast": syntax.to_json(c)})
    return EXIT_OK


def cmd_rank(args, out):
    c = _expr(args.expr)
    try:
        r = syntax.rank(c)
    except RankOverflowError as e:
        raise UsageError(f"rank unavailable: {e}") from None
    _emit(out, args, str(r), {"rank": str(r)})
    return EXIT_OK


def cmd_negate(args, out):
    c = syntax.negate(_expr(args.expr))
    _emit(out, args, to_text(c), {"text": to_text(c)})
    return EXIT_OK


def _illegal_winner(run, violation) -> str:
    # an illegal run is lost by whoever made the first illegal move
    offender = run[violation.index].player
    return ENVIRONMENT if offender == MACHINE else MACHINE


def cmd_eval(args, out):
    c = _expr(args.expr)
    try:
        run = parse_run(args.run)
        interp = parse_interpretation(args.interp)
    except ValueError as e:
        raise UsageError(str(e)) from None
    violation = check_legal(run)
    if violation is not None:
        winner = _illegal_winner(run, violation)
        _emit(out, args, f"illegal: {violation}; winner: {winner}",
              {"legal": False, "index": violation.index, "condition": violation.condition, "winner": winner})
        return EXIT_OK
    try:
        won = win_eval(c, resolution_of(run), interp)
    except UncoveredLetterError as e:
        raise UsageError(f"interpretation does not cover letter {e.args[0]!r}") from None
    winner = MACHINE if won else ENVIRONMENT
    _emit(out, args, f"legal; winner: {winner}", {"legal": True, "winner": winner})
    return EXIT_OK


def cmd_oracle(args, out):
    c = _expr(args.expr)
    try:
        d = decide_uniform(c, witness=args.witness)
    except OracleCapError as e:
        raise UsageError(str(e)) from None
    lines = ["VALID" if d.valid else "INVALID"]
    payload: dict = {"valid": d.valid}
    if d.valid and args.strategy:
        lines.append(d.dump_policy())
        payload["policy"] = d.dump_policy().splitlines()
    if not d.valid and args.witness:
        lines.append(json.dumps(d.refutation, indent=1))
        payload["refutation"] = d.refutation
    _emit(out, args, "\n".join(lines), payload)
    return EXIT_OK if d.valid else EXIT_FAIL


def cmd_prove(args, out):
    c = _expr(args.expr)
    verdict = prove(c)
    if not verdict.valid:
        _emit(out, args, f"INVALID ({verdict.reason})", {"valid": False, "reason": verdict.reason})
        return EXIT_FAIL
    proof = verdict.proof
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(proof.dumps() + "\n")
    text = f"VALID ({len(proof)} lines)"
    if not args.out:
        text += "\n" + proof.render()
    _emit(out, args, text, {"valid": True, "lines": len(proof), "proof": proof.to_json()})
    return EXIT_OK


def cmd_check(args, out):
    try:
        with open(args.proof_file) as fh:
            proof = Proof.from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot read proof: {e}") from None
    result = check_proof(proof)
    if result.ok:
        _emit(out, args, f"OK {to_text(result.conclusion)}",
              {"ok": True, "conclusion": to_text(result.conclusion), "lines": len(proof)})
        return EXIT_OK
    err = result.error
    _emit(out, args, f"FAILED {err}", {"ok": False, "line": err.line, "kind": err.kind, "reason": err.reason})
    return EXIT_FAIL


def cmd_purify(args, out):
    c = _expr(args.expr)
    result = purify(c)
    text = to_text(result.pure)
    if args.trace and result.trace:
        text = result.format_trace() + "\n" + text
    _emit(out, args, text, {
        "pure": to_text(result.pure),
        "trace": [str(s) for s in result.trace],
        "is_pure": is_pure(result.pure).pure,
    })
    return EXIT_OK


def _pools(args):
    try:
        return letter_pool(args.letters), cluster_pool(args.clusters)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _population(args):
    letters, clusters = _pools(args)
    if args.random:
        rng = random.Random(args.seed)
        return (random_cirquent(rng, args.max_nodes, letters, clusters) for _ in range(args.random))
    return enumerate_cirquents(args.max_nodes, letters, clusters)


def cmd_xcheck(args, out):
    report = differential_sweep(_population(args), check=not args.no_check)
    payload = {
        "total": report.total,
        "valid": report.valid,
        "agreement": report.agreement,
        "counterexamples": [{"cirquent": t, "prover": p, "oracle": o} for t, p, o in report.disagreements],
        "bad_proofs": [{"cirquent": t, "error": e} for t, e in report.bad_proofs],
        "seconds": report.seconds,
    }
    _emit(out, args, report.summary(), payload)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_gen(args, out):
    if args.count:
        letters, clusters = _pools(args)
        print(count_cirquents(args.max_nodes, len(letters), len(clusters)), file=out)
        return EXIT_OK
    for c in _population(args):
        print(json.dumps(syntax.to_json(c)) if args.json else to_text(c), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# interactive play

@dataclass
class PlaySession:
    cirquent: syntax.Cirquent
    decision: Decision
    resolution: dict[ClusterId, int] = field(default_factory=dict)
    transcript: list[LabeledMove] = field(default_factory=list)

    @classmethod
    def start(cls, c: syntax.Cirquent) -> tuple["PlaySession", list[str]]:
        session = cls(c, decide_uniform(c))
        banner = [f"playing {to_text(c)}; you are the environment (B)"]
        if not session.decision.valid:
            banner.append("warning: no winning strategy exists; the machine plays greedily")
        return session, banner + session.machine_turn()

    def machine_action(self):
        if self.decision.valid:
            return self.decision.action_for(self.resolution)
        return greedy_action(self.cirquent, self.resolution)

    def machine_turn(self) -> list[str]:
        said = []
        while True:
            action = self.machine_action()
            if action == WAIT:
                return said
            self.resolution[action.cluster] = action.choice
            self.transcript.append(LabeledMove(MACHINE, Move(action.cluster, action.choice)))
            said.append(f"machine: {action}")

    def state_text(self) -> str:
        clusters = sorted(clusters_of(self.cirquent) | set(self.resolution), key=cluster_sort_key)
        shown = ",".join(f"{k}={self.resolution.get(k, '?')}" for k in clusters)
        return f"state {{{shown}}}; run: {format_run(self.transcript) or '(empty)'}"

    def adjudicate(self) -> list[str]:
        lines = []
        all_won = True
        for interp in all_interpretations(letters_of(self.cirquent)):
            won = win_eval(self.cirquent, self.resolution, interp)
            all_won &= won
            label = format_interpretation(interp) or "(no letters)"
            lines.append(f"  {label}: {'T' if won else 'B'} wins")
        lines.append("T wins under all interpretations" if all_won
                     else "B wins under some interpretation")
        return lines


def greedy_action(c: syntax.Cirquent, res: dict[ClusterId, int]):
    """Resolve the disjunctive cluster that most increases the won count, else wait."""
    masks, full = letter_masks_for(letters_of(c))

    def score(r):
        return bin(truth_mask(c, r, masks, full)).count("1")

    best, best_score = WAIT, score(res)
    for cl in sorted(clusters_of(c), key=cluster_sort_key):
        if cl.disjunctive and cl not in res:
            for v in (0, 1):
                s = score({**res, cl: v})
                if s > best_score:
                    best, best_score = Resolve(cl, v), s
    return best


def play_step(session: PlaySession, command: str) -> list[str]:
    """Apply one human command; returns the lines to show."""
    command = command.strip()
    if command == "state":
        return [session.state_text()]
    if command == "end":
        return session.adjudicate()
    if command == "pass":
        return session.machine_turn() or ["machine: waits"]
    name, sep, value = command.partition("=")
    try:
        cluster = ClusterId.parse(name)
    except ValueError:
        cluster = None
    if not sep or cluster is None or value.strip() not in ("0", "1"):
        return ["unknown command; use c<n>=0|1, pass, state or end"]
    move = LabeledMove(ENVIRONMENT, Move(cluster, int(value)))
    violation = check_legal(session.transcript + [move])
    if violation is not None:
        why = {2: f"{cluster} is disjunctive; only the machine (T) moves there",
               3: "impossible", 4: f"{cluster} is already resolved"}[violation.condition]
        return [f"illegal move: {why}"]
    session.transcript.append(move)
    session.resolution[cluster] = move.move.choice
    return session.machine_turn() or ["machine: waits"]


def cmd_play(args, out, inp: TextIO | None = None):
    inp = inp or sys.stdin
    c = _expr(args.expr)
    try:
        session, lines = PlaySession.start(c)
    except OracleCapError as e:
        raise UsageError(str(e)) from None
    for line in lines:
        print(line, file=out)
    for raw in inp:
        if not raw.strip():
            continue
        for line in play_step(session, raw):
            print(line, file=out)
        if raw.strip() == "end":
            break
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cl16", description="Cirquent calculus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, expr: bool = True):
        p = sub.add_parser(name, help=help)
        if expr:
            p.add_argument("expr", help="cirquent in surface syntax")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("fmt", cmd_fmt, "print canonical form")
    add("rank", cmd_rank, "exact rank")
    add("negate", cmd_negate, "de Morgan dual")
    p = add("eval", cmd_eval, "evaluate a run under an interpretation")
    p.add_argument("--run", default="", help='e.g. "T d1.0; B c2.1"')
    p.add_argument("--interp", default="", help='e.g. "p=1,q=0"')
    p = add("oracle", cmd_oracle, "brute-force uniform validity")
    p.add_argument("--strategy", action="store_true", help="dump the machine policy")
    p.add_argument("--witness", action="store_true", help="print a refutation when invalid")
    p = add("prove", cmd_prove, "search for a proof")
    p.add_argument("--out", help="write the proof file here")
    p = add("check", cmd_check, "check a proof file", expr=False)
    p.add_argument("proof_file")
    p = add("purify", cmd_purify, "purification")
    p.add_argument("--trace", action="store_true", help="print every rewrite step")
    add("play", cmd_play, "play against the machine as the environment")
    for name, func, help in (("xcheck", cmd_xcheck, "prover versus oracle sweep"),
                             ("gen", cmd_gen, "enumerate cirquents")):
        p = add(name, func, help, expr=False)
        p.add_argument("--max-nodes", type=int, default=3, help="maximum number of connectives")
        p.add_argument("--letters", type=int, default=2, help="letters p, q, r, ...")
        p.add_argument("--clusters", type=int, default=2, help="clusters d1, c1, d2, c2, ...")
        p.add_argument("--random", type=int, default=0, help="sample this many instead of enumerating")
        p.add_argument("--seed", type=int, default=0)
        if name == "xcheck":
            p.add_argument("--no-check", action="store_true", help="skip checking emitted proofs")
        else:
            p.add_argument("--count", action="store_true", help="only print how many would be enumerated")
    return parser


def main(argv=None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
