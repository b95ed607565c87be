"""Command line: ``lassosynth synth|invariants|verify|simulate|bench``.

Exit codes: 0 success (certified), 1 unsat, 2 unknown or timeout,
3 input error, 4 a check failed (model not certified, invariant rejected,
run is not a valid execution).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import corpus
from .conditions import EXIT_FACTOR, GENERIC, Omega, assemble
from .constraints import STATE, ConstraintSystem
from .errors import DSLSyntaxError, LassoError, SolverError
from .linear import Reduction, simplify_linear
from .polyring import Poly, is_primed, prime
from .program import (
    LassoProgram, SynthesisProblem, execute, parse_file, parse_polynomial, parse_valuation,
)
from .smt import SAT, UNSAT, SolverConfig, SolverModel, emit_smtlib, parse_answer, recheck_model, solve
from .verify import SolutionReport, check_invariant, check_post, check_solution

EXIT_OK, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_INPUT, EXIT_FAILED = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


@dataclass
class Outcome:
    problem: SynthesisProblem
    system: ConstraintSystem
    status: str = ""
    reason: str = ""
    model: SolverModel | None = None
    report: SolutionReport | None = None
    recheck: bool | None = None
    generation_time: float = 0.0
    solver_time: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        if self.report is None:
            return False
        return self.report.ok or (self.report.algebraic and bool(self.recheck))

    @property
    def exit_code(self) -> int:
        if self.status == SAT:
            return EXIT_OK if self.certified else EXIT_FAILED
        return EXIT_UNSAT if self.status == UNSAT else EXIT_UNKNOWN

    @property
    def verdict(self) -> str:
        if self.status != SAT:
            return self.status + (f" ({self.reason})" if self.reason else "")
        if self.report.algebraic:
            return "sat, solver-certified" if self.recheck else "sat, recheck failed"
        return "sat, certified" if self.report.ok else "sat, certification failed"


def run_pipeline(problem: SynthesisProblem, degree: int, *, omega: Omega = Omega(),
                 nontrivial: bool | None = None, phi_degree: int | None = None,
                 phi_shape: str = GENERIC, simplify: bool = True,
                 cfg: SolverConfig | None = None, emit: str | None = None,
                 answer: str | None = None) -> Outcome:
    """Generate constraints, solve (or read ``answer``), and certify."""
    t0 = time.perf_counter()
    cs = assemble(problem, degree, omega, nontrivial, phi_degree=phi_degree, phi_shape=phi_shape)
    reduction = simplify_linear(cs) if simplify else Reduction(cs, {})
    query_cs = reduction.system
    out = Outcome(problem, cs, generation_time=time.perf_counter() - t0)
    out.notes += cs.warnings
    cfg = cfg or SolverConfig.from_env()
    text = emit_smtlib(query_cs, cfg.logic, cfg.seed)
    if emit:
        Path(emit).write_text(text, encoding="utf-8")
    t1 = time.perf_counter()
    result = parse_answer(answer, query_cs, text) if answer is not None else solve(query_cs, cfg)
    out.solver_time = time.perf_counter() - t1
    out.status, out.reason = result.status, result.reason
    if result.status != SAT:
        return out
    model = reduction.extend(result.model)
    for n in cs.ordered_unknowns():
        if n not in model:
            model.values[n] = Fraction(0)
    out.model = model
    out.report = check_solution(problem, model, cs.psi_spec)
    if out.report.algebraic:
        out.recheck = recheck_model(cs, model, cfg)
    return out


# ---------------------------------------------------------------------------
# rendering

def render_lasso(lasso: LassoProgram) -> str:
    lines = []
    if lasso.stem:
        lines.append("stem: " + ", ".join(f"{g} = 0" for g in lasso.stem))
    for t in lasso.transitions:
        view = t.deterministic_view
        if view is None:
            lines.append(f"{t.name}: " + ", ".join(f"{g} = 0" for g in t.generators))
            continue
        items = []
        for u in view.updates:
            if u.denominator == 1 and u.numerator == Poly.var(u.target):
                continue
            rhs = str(u.numerator) if u.denominator == 1 else f"({u.numerator}) / ({u.denominator})"
            items.append(f"{prime(u.target)} = {rhs}")
        items += [f"guard {h} = 0" for h in view.guards]
        lines.append(f"{t.name}: " + (", ".join(items) or "skip"))
    lines.append("exit: " + (", ".join(f"{g} = 0" for g in lasso.exit) or "true"))
    return "\n".join(lines)


def _fmt_state(state) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in state.items()) + "}"


def render_outcome(out: Outcome) -> str:
    cs = out.system
    counts = cs.summary()
    n_state = counts[STATE]
    lines = [f"problem {out.problem.name}: {out.verdict}",
             f"unknowns: {len(cs.unknowns) - n_state} (+{n_state} test-case state), "
             f"equalities: {len(cs.equalities)}, disequalities: {len(cs.disequalities)}"]
    lines += [f"warning: {w}" for w in out.notes]
    if out.status != SAT:
        return "\n".join(lines)
    rep = out.report
    params = out.problem.synth_vars
    if params:
        lines.append("parameters:")
        for c in params:
            v = out.model[c]
            approx = "" if isinstance(v, Fraction) else f"  (approx. {v.approximate():.6g})"
            lines.append(f"  {c} = {v}{approx}")
    if rep.algebraic:
        lines.append("model has irrational values; exact certification skipped, "
                     f"solver recheck {'passed' if out.recheck else 'FAILED'}")
        lines.append("test-case adherence: solver-certified only")
        return "\n".join(lines)
    if params:
        lines.append("program:")
        lines += ["  " + ln for ln in render_lasso(rep.program).splitlines()]
    lines += rep.render().splitlines()[1:]
    for j, run in enumerate(rep.runs):
        if run is None:
            continue
        lines.append(f"  run {j}: " + " -> ".join(_fmt_state(s) for s in run.states))
    return "\n".join(lines)


def outcome_dict(out: Outcome) -> dict:
    d = {
        "problem": out.problem.name, "status": out.status, "verdict": out.verdict,
        "certified": out.certified, "reason": out.reason,
        "unknowns": out.system.summary(), "equalities": len(out.system.equalities),
        "disequalities": len(out.system.disequalities),
        "generation_time": out.generation_time, "solver_time": out.solver_time,
        "warnings": out.notes,
    }
    if out.model is not None:
        d["model"] = out.model.to_dict()
    if out.report is not None:
        d["report"] = out.report.to_dict()
        d["recheck"] = out.recheck
    return d


# ---------------------------------------------------------------------------
# commands

def _load(path: str) -> SynthesisProblem:
    try:
        return parse_file(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _config(args) -> SolverConfig:
    return SolverConfig.from_env(args.solver_cmd, timeout=args.timeout, seed=args.seed)


def _solve_command(args, mode: str) -> int:
    problem = _load(args.file)
    if mode == "synth" and not problem.post and not problem.testcases:
        raise InputError("synth needs a post condition or test cases")
    answer = Path(args.model_file).read_text(encoding="utf-8") if args.model_file else None
    nontrivial = False if args.no_nontrivial else (True if mode == "invariants" else None)
    out = run_pipeline(
        problem, args.degree, omega=Omega.parse(args.omega), nontrivial=nontrivial,
        phi_degree=args.phi_degree, phi_shape=args.phi_shape, simplify=not args.no_simplify,
        cfg=_config(args), emit=args.emit, answer=answer)
    print(json.dumps(outcome_dict(out), indent=2) if args.json else render_outcome(out))
    return out.exit_code


def _parameters(args, problem: SynthesisProblem) -> LassoProgram:
    if not problem.synth_vars:
        return problem.lasso
    if not args.params:
        raise InputError("cannot simulate parametric program without --params")
    values = parse_valuation(args.params, problem.synth_vars)
    missing = [c for c in problem.synth_vars if c not in values]
    if missing:
        raise InputError(f"no value for parameters {', '.join(missing)}")
    return problem.instantiate(values)


def cmd_verify(args) -> int:
    problem = _load(args.file)
    lasso = _parameters(args, problem)
    p = parse_polynomial(args.invariant, lasso.vars)
    if any(is_primed(v) for v in p.variables()):
        raise InputError("an invariant is a polynomial over the current-state variables")
    if p.is_zero():
        raise InputError("the zero polynomial is not a useful invariant")
    rep = check_invariant(lasso, p, exponent=args.degree)
    post_ok = check_post(p, lasso.exit, problem.post, lasso.vars) if problem.post else None
    ok = rep.ok and post_ok is not False
    if args.json:
        d = rep.to_dict()
        d["post_ok"] = post_ok
        d["verdict"] = "PASS" if ok else "FAIL"
        print(json.dumps(d, indent=2))
    else:
        print(f"{'PASS' if ok else 'FAIL'}: {p} = 0")
        print(f"  stem: {'ok' if rep.stem_ok else 'fails'}")
        for c in rep.consecution:
            status = f"ok, witness {c.witness}" if c.ok else "not certified"
            print(f"  consecution({c.transition}): {status}")
        if post_ok is not None:
            print(f"  post: {'entailed' if post_ok else 'not entailed'}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_simulate(args) -> int:
    problem = _load(args.file)
    lasso = _parameters(args, problem)
    if args.testcase is not None:
        if not 0 <= args.testcase < len(problem.testcases):
            raise InputError(f"no test case {args.testcase}")
        tc = problem.testcases[args.testcase]
        init, path = tc.init, tc.path
    else:
        if not args.init or args.path is None:
            raise InputError("give --testcase or both --init and --path")
        init = parse_valuation(args.init, lasso.vars)
        path = tuple(s for s in args.path.replace(",", " ").split())
    try:
        run = execute(lasso, init, path)
    except LassoError as e:
        print(f"run aborted: {e}")
        return EXIT_FAILED
    if args.json:
        print(json.dumps({"states": [{k: str(v) for k, v in s.items()} for s in run.states],
                          "valid": run.valid, "notes": run.notes}, indent=2))
    else:
        for i, s in enumerate(run.states):
            flag = " (exit)" if run.exit_flags[i] and not run.exit_empty else ""
            print(f"state {i}: {_fmt_state(s)}{flag}")
        for n in run.notes:
            print(f"note: {n}")
        print("valid execution" if run.valid else "not a valid execution")
    return EXIT_OK if run.valid else EXIT_FAILED


def _bench_one(name: str, args) -> dict:
    problem = corpus.load(name)
    d = corpus.degree(name)
    row = {"name": name, "C": len(problem.synth_vars), "d": d, "tc": len(problem.testcases)}
    try:
        out = run_pipeline(problem, d, simplify=not args.no_simplify, cfg=_config(args))
    except (LassoError, SolverError) as e:
        row.update(verdict=f"error: {e}")
        return row
    counts = out.system.summary()
    row.update(A=counts["A"], vars=len(out.system.unknowns) - counts[STATE],
               gen=out.generation_time, solve=out.solver_time, verdict=out.verdict,
               certified=out.certified)
    return row


def cmd_bench(args) -> int:
    names = args.only or [n for n in corpus.names() if args.slow or n not in corpus.SLOW]
    unknown = sorted(set(names) - set(corpus.names()))
    if unknown:
        raise InputError(f"unknown corpus programs: {', '.join(unknown)}")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(lambda n: _bench_one(n, args), names))
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        head = f"{'program':<11} {'#C':>3} {'d':>2} {'#A':>4} {'#vars':>6} {'#tc':>4} " \
               f"{'gen(s)':>8} {'solve(s)':>9}  verdict"
        print(head)
        print("-" * len(head))
        for r in rows:
            print(f"{r['name']:<11} {r['C']:>3} {r['d']:>2} {r.get('A', '-'):>4} "
                  f"{r.get('vars', '-'):>6} {r['tc']:>4} {r.get('gen', 0):>8.2f} "
                  f"{r.get('solve', 0):>9.2f}  {r['verdict']}")
    return EXIT_OK if all(r.get("certified") for r in rows) else EXIT_FAILED


# ---------------------------------------------------------------------------

def _solver_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver-cmd", help="solver command line (default: $LASSOSYNTH_SOLVER or 'z3 -in')")
    p.add_argument("--timeout", type=float, default=600.0, help="solver timeout in seconds")
    p.add_argument("--seed", type=int, default=None, help="random seed passed to the solver")
    p.add_argument("--no-simplify", action="store_true",
                   help="send constraints without the linear elimination pass")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lassosynth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("synth", "synthesize parameters and a certifying invariant"),
                           ("invariants", "search for a polynomial invariant")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("--degree", type=int, default=2, help="invariant template degree")
        p.add_argument("--omega", default="one", help="post multiplier: one or template:<k>")
        p.add_argument("--no-nontrivial", action="store_true",
                       help="do not require a nonzero invariant template")
        p.add_argument("--phi-degree", type=int, default=None,
                       help="override the consecution witness degree")
        p.add_argument("--phi-shape", choices=(GENERIC, EXIT_FACTOR), default=GENERIC)
        p.add_argument("--emit", metavar="PATH", help="write the SMT-LIB query to PATH")
        p.add_argument("--model-file", metavar="PATH",
                       help="read the solver answer from PATH instead of running the solver")
        _solver_options(p)

    p = sub.add_parser("verify", help="check a given polynomial invariant")
    p.add_argument("file")
    p.add_argument("--invariant", required=True)
    p.add_argument("--params", help="parameter values, e.g. '{c0: 1, c1: 0}'")
    p.add_argument("--degree", type=int, default=None,
                   help="denominator power to try besides the invariant's degree")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("simulate", help="run the program on concrete inputs")
    p.add_argument("file")
    p.add_argument("--testcase", type=int, default=None)
    p.add_argument("--init", help="initial state, e.g. '{x0: 3, y0: 1, y: 1, s: 0}'")
    p.add_argument("--path", help="transition names separated by commas")
    p.add_argument("--params", help="parameter values")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="run the bundled benchmark programs")
    p.add_argument("--only", nargs="*", help="restrict to these programs")
    p.add_argument("--slow", action="store_true", help="include the slow degree-3 programs")
    p.add_argument("--jobs", type=int, default=1, help="programs run concurrently")
    _solver_options(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"synth": lambda a: _solve_command(a, "synth"),
                "invariants": lambda a: _solve_command(a, "invariants"),
                "verify": cmd_verify, "simulate": cmd_simulate, "bench": cmd_bench}
    try:
        return handlers[args.command](args)
    except (InputError, DSLSyntaxError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as e:
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except LassoError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
