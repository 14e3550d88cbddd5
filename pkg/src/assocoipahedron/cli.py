"""Command-line driver: counting, realization, complexes, verification, export.

Exit codes: 0 success, 1 a verification or agreement check failed, 2 usage,
parse or input errors.  All state comes from the command line.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import complex as cx
from .counting import (
    DEFAULT_CAP,
    CapExceeded,
    NonIntegerResult,
    c_pair_closed,
    count_bruteforce,
    count_closed,
    count_recursive,
    pair_signature,
)
from .geometry import GeometryError, build_polygon, h_roundtrip_problems, load_polygon
from .trees import SignatureError, TreeError, parse_signature

SUITES = ("euler", "boundary", "dims", "hT", "rotation", "hull")
HT_SEED = 0
HT_SAMPLES = 20


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    alpha: str | None = None
    polygon: tuple[str, ...] = ("parabola",)
    out: str | None = None
    format: str = "json"
    suite: str = "all"
    method: str = "all"
    cap: int = DEFAULT_CAP
    bound: int = 6
    hull: bool = True


def _polygon(cfg: RunConfig, n: int):
    scheme = cfg.polygon
    if scheme == ("parabola",):
        return build_polygon(n) if n >= 3 else None
    if len(scheme) == 2 and scheme[0] == "file":
        Q = load_polygon(scheme[1])
        if Q.n != n:
            raise UsageError(f"polygon file has {Q.n} corners, signature needs {n}")
        return Q
    raise UsageError("--polygon takes 'parabola' or 'file PATH'")


def _signature(cfg: RunConfig):
    if cfg.alpha is None:
        raise UsageError("--alpha is required")
    return parse_signature(cfg.alpha)


def _complex(cfg: RunConfig):
    s = _signature(cfg)
    return cx.build_complex(s, _polygon(cfg, s.n))


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands -------------------------------------------------------------------


def cmd_count(cfg: RunConfig) -> int:
    s = _signature(cfg)
    methods = ("recursion", "closed", "brute") if cfg.method == "all" else (cfg.method,)
    results, parts = {}, []
    for m in methods:
        if m == "recursion":
            results[m] = count_recursive(s)
        elif m == "closed":
            results[m] = count_closed(s)
        elif m == "brute":
            if cfg.method == "all" and s.n > cfg.cap:
                results[m] = None
                parts.append(f"brute=skipped(n>{cfg.cap})")
                continue
            results[m] = count_bruteforce(s, cfg.cap)
        parts.append(f"{m}={'n/a' if results[m] is None else results[m]}")
    values = {v for v in results.values() if v is not None}
    agree = len(values) == 1
    if len(methods) > 1:
        parts.append("AGREE" if agree else "DISAGREE")
    _emit(cfg, " ".join(parts) + "\n")
    return 0 if agree else 1


def cmd_realize(cfg: RunConfig) -> int:
    _emit(cfg, _dump(cx.vertices_to_json(_complex(cfg))))
    return 0


def cmd_complex(cfg: RunConfig) -> int:
    _emit(cfg, _dump(cx.complex_to_json(_complex(cfg))))
    return 0


def _run_suite(name: str, c, cfg: RunConfig) -> tuple[list[str], str]:
    """Problems found by one suite and a short summary of what was checked."""
    s = c.signature
    if name == "euler":
        chi = cx.euler_characteristic(c)
        return ([] if chi == 1 else [f"Euler characteristic {chi} != 1"]), f"f={list(c.f_vector)} chi={chi}"
    if name == "boundary":
        problems = cx.pseudomanifold_check(c) + cx.poset_problems(c)
        return problems, f"dim={c.dim} cells={len(c.cells)}"
    if name == "dims":
        problems = cx.verify_geometric_dims(c)
        nv = len(c.vertices())
        expected = count_recursive(s)
        if nv != expected:
            problems.append(f"{nv} vertices but the count is {expected}")
        return problems, f"cells={len(c.cells)} vertices={nv}"
    if name == "hT":
        if c.polygon is None:
            return [], "skipped (point complex)"
        rng = random.Random(HT_SEED)
        problems = []
        for cell in c.cells:
            problems += h_roundtrip_problems(cell.tree, c.polygon, rng, HT_SAMPLES)
        return problems, f"cells={len(c.cells)} samples/cell={HT_SAMPLES}"
    if name == "rotation":
        problems = []
        for r in range(1, s.n):
            problems += [f"r={r}: {p}" for p in cx.rotation_isomorphism_check(s, r)]
        return problems, f"rotations={s.n - 1}"
    if name == "hull":
        if not cfg.hull or s.n > cx.HULL_CHECK_MAX_N:
            return [], f"skipped (n > {cx.HULL_CHECK_MAX_N})"
        return cx.hull_check(c), f"vertices={len(c.vertices())}"
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(cfg: RunConfig) -> int:
    c = _complex(cfg)
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    lines, failed = [], False
    for name in names:
        problems, summary = _run_suite(name, c, cfg)
        failed |= bool(problems)
        lines.append(f"{name}: {'FAIL' if problems else 'PASS'} ({summary}; problems={len(problems)})")
        lines += [f"  {p}" for p in problems[:20]]
    _emit(cfg, "\n".join(lines) + "\n")
    return 1 if failed else 0


def cmd_table(cfg: RunConfig) -> int:
    """Pair counts c(l, m) for 0 <= l, m <= bound, cross-checked with the closed form."""
    if cfg.bound < 0:
        raise UsageError("--bound must be non-negative")
    rows, bad = [], []
    for l in range(cfg.bound + 1):
        row = []
        for m in range(cfg.bound + 1):
            v = count_recursive(pair_signature(l, m))
            if v != c_pair_closed(l, m):
                bad.append((l, m))
            row.append(v)
        rows.append(row)
    if cfg.format == "json":
        text = _dump({"bound": cfg.bound, "rows": rows, "closed_form_disagreements": bad})
    elif cfg.format == "tsv":
        header = "l\\m\t" + "\t".join(map(str, range(cfg.bound + 1)))
        text = "\n".join([header] + [f"{l}\t" + "\t".join(map(str, r)) for l, r in enumerate(rows)]) + "\n"
    else:
        raise UsageError("table supports --format json or tsv")
    _emit(cfg, text)
    return 1 if bad else 0


def cmd_export(cfg: RunConfig) -> int:
    c = _complex(cfg)
    if cfg.format == "off":
        text = cx.to_off(c)
    elif cfg.format == "json":
        text = _dump(cx.complex_to_json(c))
    else:
        raise UsageError("export supports --format off or json")
    _emit(cfg, text)
    return 0


COMMANDS = {
    "count": cmd_count,
    "realize": cmd_realize,
    "complex": cmd_complex,
    "verify": cmd_verify,
    "table": cmd_table,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assocoipahedron",
        description="Count, realize and verify complexes of directed planar trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="signature word over {o, i}, e.g. oioi")
    common.add_argument("--polygon", nargs="+", default=["parabola"], metavar="SCHEME",
                        help="'parabola' (default) or 'file PATH' with a JSON list of [x, y] corners")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n for brute-force enumeration")

    p = sub.add_parser("count", parents=[common], help="vertex counts by several methods")
    p.add_argument("--method", choices=("recursion", "closed", "brute", "all"), default="all")
    sub.add_parser("realize", parents=[common], help="vertex coordinates as JSON")
    sub.add_parser("complex", parents=[common], help="face poset as JSON")
    p = sub.add_parser("verify", parents=[common], help="run invariant checks")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--no-hull", dest="hull", action="store_false", help="skip the convex-hull check")
    p = sub.add_parser("table", parents=[common], help="table of two-outgoing counts")
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--format", choices=("json", "tsv"), default="tsv")
    p = sub.add_parser("export", parents=[common], help="export the complex")
    p.add_argument("--format", choices=("json", "off"), default="off")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    fields["polygon"] = tuple(fields.get("polygon", ("parabola",)))
    cfg = RunConfig(**fields)
    try:
        return COMMANDS[args.command](cfg)
    except (SignatureError, TreeError, GeometryError, CapExceeded, NonIntegerResult,
            cx.FormatUnsupported, UsageError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
