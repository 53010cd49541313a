"""Command-line front end: ``splitorder analyze`` and ``splitorder scan``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from . import __version__
from .polyring import ParseError, RingSpec, is_prime, parse_poly
from .verdicts import HypersurfaceSpec, VerdictReport, analyze

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
VERDICT_KINDS = ("auto", "cy", "fano", "general")


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemFile:
    weights: tuple[int, ...]
    d: int
    f: str
    p: int | None = None
    e: int = 2
    n_max: int | None = None
    verdict: str = "auto"
    ceiling: int | None = None
    primes: tuple[int, int] | None = None


def parse_prime_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise ProblemError(f"prime range must look like A..B, got {text!r}") from None
    if not sep or a < 0 or b < 0:
        raise ProblemError(f"prime range must look like A..B, got {text!r}")
    return a, b


def _int(key, value, lineno):
    try:
        return int(value)
    except ValueError:
        raise ProblemError(f"line {lineno}: {key} must be an integer, got {value!r}") from None


def load_problem(text: str) -> ProblemFile:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ProblemError(f"line {lineno}: expected key = value")
        if key in raw:
            raise ProblemError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = (value.strip(), lineno)

    known = {"p", "e", "weights", "d", "f", "n_max", "verdict", "ceiling", "primes"}
    for key, (_, lineno) in raw.items():
        if key not in known:
            raise ProblemError(f"line {lineno}: unknown key {key!r}")
    for key in ("weights", "d", "f"):
        if key not in raw:
            raise ProblemError(f"missing required key {key!r}")

    value, lineno = raw["weights"]
    weights = tuple(_int("weights", w.strip(), lineno) for w in value.split(","))
    fields = {"weights": weights, "f": raw["f"][0], "d": _int("d", *raw["d"])}
    for key in ("p", "e", "n_max", "ceiling"):
        if key in raw:
            fields[key] = _int(key, *raw[key])
    if "verdict" in raw:
        value, lineno = raw["verdict"]
        if value not in VERDICT_KINDS:
            raise ProblemError(f"line {lineno}: verdict must be one of {', '.join(VERDICT_KINDS)}")
        fields["verdict"] = value
    if "primes" in raw:
        fields["primes"] = parse_prime_range(raw["primes"][0])
    return ProblemFile(**fields)


def build_spec(problem: ProblemFile, p: int, allow_ill_formed: bool = False) -> HypersurfaceSpec:
    try:
        ring = RingSpec(p, problem.e, problem.weights)
    except ValueError as exc:
        raise ProblemError(str(exc)) from None
    if not (ring.well_formed or allow_ill_formed):
        raise ProblemError(f"weights {problem.weights} are not well-formed (use --allow-ill-formed)")
    f = parse_poly(problem.f, ring)
    if f.is_zero():
        raise ProblemError(f"f vanishes modulo {p}^{problem.e}")
    if not f.homogeneous:
        raise ProblemError("f is not weighted homogeneous")
    if f.degree != problem.d:
        raise ProblemError(f"f has weighted degree {f.degree}, but d = {problem.d}")
    try:
        return HypersurfaceSpec.from_poly(f, problem.d)
    except ValueError as exc:
        raise ProblemError(str(exc)) from None


def run_problem(problem: ProblemFile, p: int, allow_ill_formed: bool = False) -> VerdictReport:
    spec = build_spec(problem, p, allow_ill_formed)
    return analyze(spec, problem.verdict, problem.n_max, problem.ceiling)


def _fmt_frac(x: dict | None) -> str:
    return "-" if x is None else f"{x['num']}/{x['den']}"


def format_table(report: VerdictReport) -> str:
    pr, ev = report.problem, report.evidence
    weights = ",".join(map(str, pr["weights"]))
    lines = [
        f"problem     p={pr['p']} e={pr['e']} weights=({weights}) d={pr['d']}",
        f"f           {pr['f_canonical']}",
        "checks",
    ]
    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        tail = f"  {c.detail}" if c.detail else ""
        lines.append(f"  {c.status:<12} {c.name:<{width}}  [{c.cite}]{tail}")
    bounded = "bounded" if ev["bounded"] else "unbounded"
    lines.append(f"prefix      {tuple(ev['prefix'])}  depth {ev['depth']}/{ev['requested_depth']}  {bounded}")
    ppt = ev.get("ppt")
    if ppt and ppt["lower_num"] is not None:
        lines.append(
            f"ppt         [{ppt['lower_num']}/{ppt['lower_den']}, {_fmt_frac(ppt['upper'])}]"
            f"  theorem >= {_fmt_frac(ppt['theorem_lower'])}"
        )
    if ev.get("thresholds"):
        lines.append("thresholds  " + " ".join(f"{k}={v}" for k, v in ev["thresholds"].items()))
    lines.append(f"conclusion  {report.conclusion.value}")
    lines.append(f"basis       {'; '.join(report.basis) or '-'}")
    lines.extend(f"note        {n}" for n in report.notes)
    return "\n".join(lines)


def cmd_analyze(problem: ProblemFile, fmt: str = "json", allow_ill_formed: bool = False) -> VerdictReport:
    if problem.p is None:
        raise ProblemError("missing required key 'p'")
    report = run_problem(problem, problem.p, allow_ill_formed)
    if fmt == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(format_table(report))
    return report


def problem_key(problem: ProblemFile, prime: int) -> str:
    fields = asdict(replace(problem, p=None, primes=None))
    blob = json.dumps({"problem": fields, "prime": prime}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def scan_one(problem: ProblemFile, prime: int, allow_ill_formed: bool = False) -> dict:
    """One ScanRecord; failures become records with conclusion "Error"."""
    start = time.perf_counter()
    record = {"key": problem_key(problem, prime), "prime": prime, "version": __version__}
    try:
        report = run_problem(problem, prime, allow_ill_formed)
    except Exception as exc:  # recorded, the scan goes on
        log.warning("prime %d failed: %s", prime, exc)
        record.update(conclusion="Error", error=f"{type(exc).__name__}: {exc}", prefix=None, bounded=None, ppt=None)
    else:
        ev = report.evidence
        record.update(
            conclusion=report.conclusion.value,
            prefix=ev["prefix"],
            bounded=ev["bounded"],
            ppt=ev.get("ppt"),
            report=report.to_dict(),
        )
    record["wall_time"] = round(time.perf_counter() - start, 3)
    return record


def read_log(path: Path) -> list[dict]:
    if not path.exists():
        return []
    records = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                log.warning("%s:%d: skipping unreadable record", path, lineno)
    return records


def summarize(records: list[dict]) -> list[tuple[int, str]]:
    """(prime, conclusion) rows, one per prime, sorted; later records win."""
    latest = {r["prime"]: r["conclusion"] for r in records}
    return sorted(latest.items())


def format_summary(rows: list[tuple[int, str]]) -> str:
    lines = ["prime  conclusion"]
    lines += [f"{p:>5}  {c}" for p, c in rows]
    lines.append(f"({len(rows)} rows)")
    return "\n".join(lines)


def cmd_scan(
    problem: ProblemFile,
    primes: tuple[int, int],
    out: Path,
    jobs: int = 1,
    allow_ill_formed: bool = False,
) -> list[tuple[int, str]]:
    lo, hi = primes
    todo_primes = [q for q in range(lo, hi + 1) if is_prime(q)]
    out = Path(out)
    done = {r.get("key") for r in read_log(out)}
    todo = [q for q in todo_primes if problem_key(problem, q) not in done]
    log.info("scan: %d primes in range, %d already logged", len(todo_primes), len(todo_primes) - len(todo))

    with out.open("a") as fh:

        def write(record):
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()

        if jobs <= 1 or len(todo) <= 1:
            for q in todo:
                write(scan_one(problem, q, allow_ill_formed))
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(scan_one, problem, q, allow_ill_formed) for q in todo]
                for fut in as_completed(futures):
                    write(fut.result())

    wanted = set(todo_primes)
    keys = {problem_key(problem, q) for q in todo_primes}
    return summarize([r for r in read_log(out) if r.get("key") in keys and r["prime"] in wanted])


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitorder", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", type=Path, help="problem file (key = value lines)")
    common.add_argument("--n-max", type=_positive, help="depth of the computed prefix")
    common.add_argument("--ceiling", type=_positive, help="degree ceiling for the m-primary scan")
    common.add_argument("--allow-ill-formed", action="store_true", help="accept non-well-formed weights")

    a = sub.add_parser("analyze", parents=[common], help="run a verdict for one prime")
    a.add_argument("--format", choices=("json", "table"), default="json")

    s = sub.add_parser("scan", parents=[common], help="run verdicts over a prime range")
    s.add_argument("--primes", type=parse_prime_range, help="range A..B (overrides the file)")
    s.add_argument("--out", type=Path, required=True, help="JSONL log, appended to")
    s.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        problem = load_problem(args.file.read_text())
        overrides = {k: v for k, v in (("n_max", args.n_max), ("ceiling", args.ceiling)) if v is not None}
        problem = replace(problem, **overrides)
        if args.command == "analyze":
            cmd_analyze(problem, args.format, args.allow_ill_formed)
        else:
            primes = args.primes or problem.primes
            if primes is None:
                raise ProblemError("no prime range: pass --primes A..B or set primes = A..B")
            rows = cmd_scan(problem, primes, args.out, args.jobs, args.allow_ill_formed)
            print(format_summary(rows))
    except ParseError as exc:
        print(f"splitorder: parse error in f: {exc}", file=sys.stderr)
        print(f"  {problem.f}\n  {' ' * exc.offset}^", file=sys.stderr)
        return EXIT_INPUT
    except (ProblemError, OSError) as exc:
        print(f"splitorder: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        log.exception("internal error")
        print(f"splitorder: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
