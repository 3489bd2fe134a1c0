"""Command-line front end.

Exit status: 0 all checks passed, 1 a checked property failed, 2 input
error, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import certificates as certs
from .errors import InputError, InternalError, PreconditionError, ResourceLimitError
from .filters import FilterFamily, enumerate_filters
from .spaces import HOMEOMORPHISM, LABELED, enumerate_topologies
from .theorems import comfort_report, cor54_check, thm21_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
DEDUP = {"labeled": LABELED, "homeo": HOMEOMORPHISM, HOMEOMORPHISM: HOMEOMORPHISM}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_json(arg: str):
    """Inline JSON, or a path to a JSON file."""
    text = arg if arg.lstrip()[:1] in ("{", "[") else None
    if text is None:
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {arg[:40]!r} at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _evaluate_chunk(name: str, chunk: list[dict]) -> list[str]:
    return [certs.evaluate(name, inp).dumps() for inp in chunk]


def run_checks(name: str, inputs: list[dict], workers: int = 1) -> list[str]:
    """Evaluate instances in order; parallel runs merge chunks back in input order."""
    if workers <= 1 or len(inputs) < 2:
        return _evaluate_chunk(name, inputs)
    size = max(1, len(inputs) // (workers * 4))
    chunks = [inputs[i:i + size] for i in range(0, len(inputs), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(partial(_evaluate_chunk, name), chunks)
        return [line for part in parts for line in part]


def _text_line(line: str) -> str:
    c = json.loads(line)
    status = "PASS" if c["value"] else "FAIL"
    return f"{status} {c['claim']} checked={c['checked']} method={c['method']}"


class Output:
    def __init__(self, path: str | None, fmt: str):
        self.fmt = fmt
        self.fh = open(path, "w", encoding="utf-8") if path else sys.stdout

    def cert(self, line: str) -> None:
        self.fh.write((line if self.fmt == "json" else _text_line(line)) + "\n")

    def record(self, obj: dict, text: str | None = None) -> None:
        if self.fmt == "json" or text is None:
            self.fh.write(_dumps(obj) + "\n")
        else:
            self.fh.write(text + "\n")

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


# --- commands ------------------------------------------------------------------


def cmd_enumerate(args, out: Output) -> int:
    dedup = DEDUP[args.dedup]
    cat = enumerate_topologies(args.points, dedup, args.limit)
    label = "labeled" if dedup == LABELED else "up-to-homeomorphism"
    summary = f"{len(cat)} {label} topologies"
    out.record({"summary": summary, "count": len(cat), "points": args.points, "dedup": dedup,
                "spaces": [s.to_json() for s in cat]}, f"{summary} on {args.points} points")
    return EXIT_OK


def _instances(args) -> list[dict]:
    return certs.instances(args.name, args.points, args.max_points, args.max_index, DEDUP[args.dedup])


def cmd_check(args, out: Output) -> int:
    lines = run_checks(certs.resolve(args.name), _instances(args), args.workers)
    failed = 0
    for line in lines:
        out.cert(line)
        failed += not json.loads(line)["value"]
    out.record({"summary": {"check": certs.resolve(args.name), "certificates": len(lines), "failed": failed}},
               f"{len(lines)} certificates, {failed} failed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_search(args, out: Output) -> int:
    lines = run_checks(certs.resolve(args.name), _instances(args), args.workers)
    violations = 0
    for line in lines:
        if not json.loads(line)["value"]:
            violations += 1
            out.cert(line)
    out.record({"summary": {"predicate": certs.resolve(args.name), "checked": len(lines), "violations": violations}},
               f"checked {len(lines)}, violations {violations}")
    return EXIT_FAIL if violations else EXIT_OK


def cmd_certify(args, out: Output) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    total = bad = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON at line {lineno} column {exc.colno}: {exc.msg}") from exc
        if "claim" not in data:
            continue
        total += 1
        ok = certs.verify(data)
        bad += not ok
        out.record({"line": lineno, "claim": data["claim"], "reverified": ok},
                   f"{'OK ' if ok else 'BAD'} line {lineno} {data['claim']}")
    out.record({"summary": {"certificates": total, "failed_reverification": bad}},
               f"{total} certificates, {bad} failed re-verification")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_comfort(args, out: Output) -> int:
    cat = certs.load_catalogue({"enumerate": {"max_points": args.max_points, "dedup": DEDUP[args.dedup]}})
    fs = [F for k in range(1, args.max_index + 1) for F in enumerate_filters(k)]
    rep = comfort_report(fs, cat.spaces)
    by_core = all(rep.relation[i][j] == (F.core_size <= G.core_size)
                  for i, F in enumerate(fs) for j, G in enumerate(fs))
    by_rule = all(rep.relation[i][j] == (min(F.core_size, 2) <= min(G.core_size, 2))
                  for i, F in enumerate(fs) for j, G in enumerate(fs))
    payload = rep.to_json()
    payload["catalogue"] = {"max_points": args.max_points, "dedup": DEDUP[args.dedup], "size": len(cat)}
    payload["matches_core_size_order"] = by_core
    payload["matches_ultra_vs_nonultra_order"] = by_rule
    out.record(payload, f"{len(rep.classes)} classes; core-size order match: {by_core}")
    return EXIT_OK


def cmd_thm21(args, out: Output) -> int:
    K = certs.load_catalogue(_load_json(args.catalogue))
    P = FilterFamily.from_json(_load_json(args.family))
    rep = thm21_check(K.spaces, P, args.product_bound)
    out.record(rep.to_json(), f"cond3={'holds' if rep.cond3 is not None else 'fails'} consistent={rep.consistent}")
    return EXIT_OK if rep.consistent else EXIT_FAIL


def cmd_cor54(args, out: Output) -> int:
    T = certs.load_catalogue(_load_json(args.catalogue))
    rep = cor54_check(T.spaces, args.power_bound)
    ok = rep["cond3_iff_cond4"] and rep["cond3_implies_cond1"]
    out.record(rep, f"cond3={rep['cond3']} cond4_bounded={rep['cond4_bounded']}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--workers", "-j", type=int, default=1)
    common.add_argument("--dedup", choices=sorted(DEDUP), default="labeled")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--points", type=int, default=None, help="spaces with exactly this many points")
    bounds.add_argument("--max-points", type=int, default=None, help="spaces with at most this many points")
    bounds.add_argument("--max-index", type=int, default=2)

    p = argparse.ArgumentParser(prog="filterlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common])
    e.add_argument("--points", type=int, required=True)
    e.add_argument("--limit", type=int, default=None)
    e.set_defaults(func=cmd_enumerate)

    for name, func in (("check", cmd_check), ("search", cmd_search)):
        c = sub.add_parser(name, parents=[common, bounds])
        c.add_argument("name")
        c.set_defaults(func=func)

    c = sub.add_parser("certify", parents=[common])
    c.add_argument("file")
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("comfort", parents=[common])
    c.add_argument("--max-points", type=int, default=3)
    c.add_argument("--max-index", type=int, default=2)
    c.set_defaults(func=cmd_comfort)

    c = sub.add_parser("thm21", parents=[common])
    c.add_argument("--catalogue", required=True)
    c.add_argument("--family", required=True)
    c.add_argument("--product-bound", type=int, default=None)
    c.set_defaults(func=cmd_thm21)

    c = sub.add_parser("cor54", parents=[common])
    c.add_argument("--catalogue", required=True)
    c.add_argument("--power-bound", type=int, default=2)
    c.set_defaults(func=cmd_cor54)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    for attr in ("max_points", "max_index", "points", "workers", "product_bound", "power_bound"):
        v = getattr(args, attr, None)
        if v is not None and v < 1:
            sys.stderr.write(f"error: --{attr.replace('_', '-')} must be positive\n")
            return EXIT_INPUT
    out = Output(args.output, args.format)
    try:
        return args.func(args, out)
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except InternalError as exc:
        sys.stderr.write(f"soundness alarm: {exc}\n")
        return EXIT_FAIL
    except (InputError, PreconditionError, KeyError, TypeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
