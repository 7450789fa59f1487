"""Command-line front end.

Exit codes:
    0  success
    1  an identity or cross-route comparison failed
    2  unreadable / invalid input or bad arguments
    3  the requested evaluation point is a pole
    4  the enumeration cap was exceeded
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Poly,
    PoleError,
    RationalFunction,
    evaluate,
    format_factored,
    format_poly,
    format_ratfun,
    parse_rational,
)
from .factors import (
    DEFAULT_CAP,
    EnumerationCapError,
    enumerate_H,
    enumerate_H_pair,
    factor_term,
    greens_function_factors,
    iota1,
    iota2,
    weight_table,
)
from .graph import BoundaryGraph, GraphError, deform, load_graph
from .graphs import named_graph, named_graphs
from .identities import CHECKS, PreconditionError, forest_census, run_checks
from .operators import build_theta, det_fraction_free, greens_function_linear_algebra, minor

EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_POLE, EXIT_CAP = 0, 1, 2, 3, 4

COMMANDS = ("greens", "iota", "verify", "census", "factors")
MODES = ("L", "Q", "matrix", "all")


class UsageError(ValueError):
    pass


class RouteMismatch(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    graph: str | None = None
    boundary: list[str] | None = None
    mode: str | None = None
    pair: tuple[str, str] | None = None
    eval_at: Fraction | None = None
    output: str = "text"
    cap: int = DEFAULT_CAP
    factored: bool = False
    checks: list[str] | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.pair is not None and self.command not in ("iota", "factors"):
            raise UsageError("--pair is only valid with iota and factors")
        if self.eval_at is not None and self.command not in ("greens", "iota"):
            raise UsageError("--eval-at is only valid with greens and iota")
        if (self.input is None) == (self.graph is None):
            raise UsageError("give exactly one of --input FILE or --graph NAME")
        if self.boundary is not None and self.graph is None:
            raise UsageError("--boundary only applies to --graph")
        if self.mode is not None and self.mode not in MODES:
            raise UsageError(f"--mode must be one of {', '.join(MODES)}")
        if self.command == "factors" and self.mode not in (None, "L", "Q"):
            raise UsageError("factors needs --mode L or Q")
        if self.output not in ("text", "json"):
            raise UsageError("--output must be text or json")


def _load(config: RunConfig) -> BoundaryGraph:
    if config.input is not None:
        return load_graph(config.input)
    try:
        probe = named_graph(config.graph)
    except KeyError as exc:
        raise GraphError(str(exc.args[0])) from None
    if config.boundary is None:
        return probe
    lookup = {str(x): x for x in probe.vertices}
    try:
        bnd = [lookup[b] for b in config.boundary]
    except KeyError as exc:
        raise GraphError(f"unknown boundary vertex {exc.args[0]}") from None
    return named_graph(config.graph, bnd)


def _vertex(g: BoundaryGraph, name: str):
    for x in g.vertices:
        if str(x) == str(name):
            return x
    raise UsageError(f"unknown vertex {name!r}")


def _pairs(g: BoundaryGraph):
    inner = g.interior
    return [(inner[i], inner[j]) for i in range(len(inner)) for j in range(i, len(inner))]


def _key(pair) -> str:
    return f"{pair[0]},{pair[1]}"


def _matrix_json(mat) -> list:
    return [[f.to_json() for f in row] for row in mat]


def _base_payload(command: str, g: BoundaryGraph) -> dict:
    return {
        "command": command,
        "interior": [str(x) for x in g.interior],
        "iota1": None,
        "greens": None,
        "reports": [],
    }


# ---------------------------------------------------------------------------
# command implementations: each returns (exit code, payload)
# ---------------------------------------------------------------------------


def _greens(g: BoundaryGraph, config: RunConfig) -> tuple[int, dict]:
    mode = config.mode or "matrix"
    payload = _base_payload("greens", g)
    payload["mode"] = mode
    routes = {}
    if mode in ("matrix", "all"):
        routes["matrix"] = greens_function_linear_algebra(g)
    for m in ("L", "Q"):
        if mode in (m, "all"):
            routes[m] = greens_function_factors(g, m, config.cap)
    ref_name = "matrix" if "matrix" in routes else mode
    ref = routes[ref_name]
    for name, mat in routes.items():
        if name == ref_name:
            continue
        agree = mat == ref
        payload["reports"].append({"id": f"greens[{name}]=greens[{ref_name}]", "holds": agree})
        if not agree:
            raise RouteMismatch(f"route {name} disagrees with route {ref_name}")
    payload["greens"] = _matrix_json(ref)
    if mode in ("L", "Q"):
        payload["iota1"] = iota1(g, mode, config.cap).value.to_json()
    else:
        payload["iota1"] = det_fraction_free(build_theta(g)).to_json()
    if config.eval_at is not None:
        z0 = config.eval_at
        payload["eval_at"] = str(z0)
        payload["values"] = [[str(evaluate(f, z0)) for f in row] for row in ref]
    return EXIT_OK, payload


def _iota(g: BoundaryGraph, config: RunConfig) -> tuple[int, dict]:
    mode = config.mode or "L"
    payload = _base_payload("iota", g)
    payload["mode"] = mode
    pairs = _pairs(g)
    if config.pair is not None:
        pair = tuple(_vertex(g, p) for p in config.pair)
        for x in pair:
            if x in g.boundary:
                raise UsageError(f"pair vertex {x!r} is on the boundary")
        pairs = [pair]
    modes = ["L", "Q"] if mode == "all" else ([mode] if mode in ("L", "Q") else [])
    theta = build_theta(g)
    results = {}
    if mode in ("matrix", "all"):
        pos = {x: i for i, x in enumerate(g.interior)}
        cof = {}
        for l, m in pairs:
            a, b = pos[l], pos[m]
            c = det_fraction_free(minor(theta, a, b))
            cof[(l, m)] = -c if (a + b) % 2 else c
        results["matrix"] = (det_fraction_free(theta), cof, None, None)
    for m_ in modes:
        r1 = iota1(g, m_, config.cap)
        r2 = {p: iota2(g, m_, *p, cap=config.cap) for p in pairs}
        results[m_] = (r1.value, {p: r.value for p, r in r2.items()}, r1, r2)
    ref_name = next(iter(results))
    ref1, ref2 = results[ref_name][0], results[ref_name][1]
    for name, (v1, v2, _, _) in results.items():
        if name == ref_name:
            continue
        agree = v1 == ref1 and v2 == ref2
        payload["reports"].append({"id": f"iota[{name}]=iota[{ref_name}]", "holds": agree})
        if not agree:
            raise RouteMismatch(f"route {name} disagrees with route {ref_name}")
    payload["iota1"] = ref1.to_json()
    payload["iota2"] = {_key(p): v.to_json() for p, v in ref2.items()}
    hists = {}
    for name, (_, _, r1, r2) in results.items():
        if r1 is None:
            continue
        hists[name] = {
            "iota1": {"factors": r1.factor_count, "classes": r1.n_classes, "histogram": _hist_json(r1.class_histogram)},
            "iota2": {
                _key(p): {"factors": r.factor_count, "classes": r.n_classes, "histogram": _hist_json(r.class_histogram)}
                for p, r in r2.items()
            },
        }
    payload["histograms"] = hists
    if config.eval_at is not None:
        z0 = config.eval_at
        payload["eval_at"] = str(z0)
        payload["values"] = {
            "iota1": str(ref1(z0)),
            "iota2": {_key(p): str(v(z0)) for p, v in ref2.items()},
        }
    return EXIT_OK, payload


def _hist_json(hist: dict) -> list:
    return [
        {"omega": k[0], "loops": k[1], "b1": k[2], "count": n} for k, n in sorted(hist.items())
    ]


def _verify(g: BoundaryGraph, config: RunConfig) -> tuple[int, dict]:
    payload = _base_payload("verify", g)
    unknown = [c for c in config.checks or () if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check {unknown[0]!r}; choose from {', '.join(CHECKS)}")
    reports, skipped = run_checks(g, config.checks or None, config.cap)
    payload["iota1"] = det_fraction_free(build_theta(g)).to_json()
    payload["reports"] = [r.to_json() for r in reports]
    payload["skipped"] = skipped
    ok = all(r.holds for r in reports)
    return (EXIT_OK if ok else EXIT_IDENTITY), payload


def _census(g: BoundaryGraph, config: RunConfig) -> tuple[int, dict]:
    payload = _base_payload("census", g)
    census = forest_census(g)
    payload["census"] = {
        "boundary": census.n_boundary,
        "pairs": {_key(p): n for p, n in census.n_pair.items()},
    }
    return EXIT_OK, payload


def _factors(g: BoundaryGraph, config: RunConfig) -> tuple[int, dict]:
    mode = config.mode or "L"
    payload = _base_payload("factors", g)
    payload["mode"] = mode
    dg = deform(g)
    table = weight_table(g, mode)
    if config.pair is not None:
        l, m = (_vertex(g, p) for p in config.pair)
        if l in g.boundary or m in g.boundary:
            raise UsageError("pair vertices must be interior")
        payload["pair"] = _key((l, m))
        stream = enumerate_H_pair(dg, mode, l, m, config.cap)
    else:
        stream = enumerate_H(dg, mode, config.cap)
    items = []
    total = Poly()
    for h in stream:
        term = factor_term(h, table)
        total = total + term
        entry = h.to_json(dg)
        entry["term"] = term.to_json()
        items.append(entry)
    payload["factors"] = items
    payload["sum"] = total.to_json()
    return EXIT_OK, payload


_DISPATCH = {"greens": _greens, "iota": _iota, "verify": _verify, "census": _census, "factors": _factors}


# ---------------------------------------------------------------------------
# text rendering (always from the JSON payload)
# ---------------------------------------------------------------------------


def _poly(data) -> str:
    return format_poly(Poly.from_json(data))


def _poly_f(data, factored: bool) -> str:
    p = Poly.from_json(data)
    s = format_poly(p)
    if factored and not p.is_zero() and p.degree > 0:
        s += f"    = {format_factored(p)}"
    return s


def _ratfun(data, factored: bool) -> str:
    f = RationalFunction.from_json(data)
    s = format_ratfun(f)
    if factored and f.den.degree > 0:
        s += f"    = {format_ratfun(f, factored=True)}"
    return s


def _render_report(r: dict, indent: str = "") -> list[str]:
    status = "PASS" if r["holds"] else "FAIL"
    line = f"{indent}[{status}] {r['id']}"
    if r.get("detail"):
        line += f"  ({r['detail']})"
    lines = [line]
    if not r["holds"]:
        if r.get("parts"):
            for p in r["parts"]:
                if not p["holds"]:
                    lines.extend(_render_report(p, indent + "    "))
        else:
            lines.append(f"{indent}    left:  {_render_value(r['left'])}")
            lines.append(f"{indent}    right: {_render_value(r['right'])}")
    return lines


def _render_value(v) -> str:
    if isinstance(v, list) and (not v or isinstance(v[0], str)):
        return format_poly(Poly.from_json(v))
    if isinstance(v, dict) and "num" in v:
        return format_ratfun(RationalFunction.from_json(v))
    if isinstance(v, list):
        return "[" + ", ".join(_render_value(x) for x in v) + "]"
    return str(v)


def render_text(payload: dict, factored: bool = False) -> str:
    cmd = payload["command"]
    out: list[str] = [f"interior vertices: {', '.join(payload['interior'])}"]
    if cmd == "greens":
        out.append(f"route: {payload['mode']}")
        for r in payload["reports"]:
            out.append(f"[{'PASS' if r['holds'] else 'FAIL'}] {r['id']}")
        out.append(f"denominator sum: {_poly_f(payload['iota1'], factored)}")
        inner = payload["interior"]
        for i, row in enumerate(payload["greens"]):
            for j, entry in enumerate(row):
                out.append(f"G({inner[i]},{inner[j]}) = {_ratfun(entry, factored)}")
        if "values" in payload:
            out.append(f"at z = {payload['eval_at']}:")
            for i, row in enumerate(payload["values"]):
                out.append("  " + "  ".join(row))
    elif cmd == "iota":
        out.append(f"route: {payload['mode']}")
        for r in payload["reports"]:
            out.append(f"[{'PASS' if r['holds'] else 'FAIL'}] {r['id']}")
        out.append(f"iota1 = {_poly_f(payload['iota1'], factored)}")
        for key, coeffs in payload["iota2"].items():
            out.append(f"iota2({key}) = {_poly_f(coeffs, factored)}")
        for name, h in payload.get("histograms", {}).items():
            out.append(f"{name} family: {h['iota1']['factors']} factors, {h['iota1']['classes']} weight classes")
            for row in h["iota1"]["histogram"]:
                out.append(f"    omega={row['omega']} loops={row['loops']} b1={row['b1']}: {row['count']}")
            for key, hp in h["iota2"].items():
                out.append(f"  pair ({key}): {hp['factors']} factors, {hp['classes']} weight classes")
        if "values" in payload:
            v = payload["values"]
            out.append(f"at z = {payload['eval_at']}: iota1 = {v['iota1']}")
            for key, val in v["iota2"].items():
                out.append(f"  iota2({key}) = {val}")
    elif cmd == "verify":
        for r in payload["reports"]:
            out.extend(_render_report(r))
        for cid, why in payload.get("skipped", {}).items():
            out.append(f"[SKIP] {cid}  ({why})")
    elif cmd == "census":
        c = payload["census"]
        out.append(f"boundary-rooted spanning forests: {c['boundary']}")
        for key, n in c["pairs"].items():
            out.append(f"  pair ({key}): {n}")
    elif cmd == "factors":
        head = f"{payload['mode']} family"
        if "pair" in payload:
            head += f" for pair ({payload['pair']})"
        out.append(f"{head}: {len(payload['factors'])} factors")
        for f in payload["factors"]:
            kinds = "; ".join(f"{{{','.join(map(str, c['vertices']))}}} {c['kind']}" for c in f["components"])
            extra = f" dist={f['dist']}" if "dist" in f else ""
            out.append(f"  [{' '.join(f['labels'])}] omega={f['omega']}{extra} term={_poly(f['term'])} | {kinds}")
        out.append(f"sum = {_poly_f(payload['sum'], factored)}")
    return "\n".join(out)


# ---------------------------------------------------------------------------


def run(config: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns (exit code, text to print)."""
    try:
        config.validate()
        g = _load(config)
        code, payload = _DISPATCH[config.command](g, config)
    except (UsageError, GraphError, PreconditionError) as exc:
        return EXIT_INPUT, f"error: {exc}"
    except PoleError as exc:
        return EXIT_POLE, f"error: z = {exc.point} is a pole of the Green's function"
    except EnumerationCapError as exc:
        return EXIT_CAP, f"error: {exc}"
    except RouteMismatch as exc:
        return EXIT_IDENTITY, f"error: {exc}"
    if config.output == "json":
        return code, json.dumps(payload, indent=2)
    return code, render_text(payload, config.factored)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphgreen",
        description="Exact Green's functions of discrete Schroedinger operators on graphs with boundary.",
    )
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="FILE", help="graph JSON file")
    src.add_argument("--graph", metavar="NAME", help=f"bundled graph: {', '.join(named_graphs())}")
    common.add_argument("--boundary", nargs="*", metavar="V", help="boundary vertices for --graph")
    common.add_argument("--mode", choices=MODES)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max candidate subsets per enumeration")
    common.add_argument("--factored", action="store_true", help="also print square-free factorizations")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("greens", parents=[common], help="print the Green's function matrix")
    p.add_argument("--eval-at", metavar="P/Q", help="evaluate at a rational point")
    p = sub.add_parser("iota", parents=[common], help="print the factor sums and class histograms")
    p.add_argument("--pair", nargs=2, metavar=("L", "M"))
    p.add_argument("--eval-at", metavar="P/Q")
    p = sub.add_parser("verify", parents=[common], help="run identity checks; nonzero exit on failure")
    p.add_argument("checks", nargs="*", metavar="CHECK", help=f"any of: {', '.join(CHECKS)}")
    sub.add_parser("census", parents=[common], help="count boundary-rooted spanning forests")
    p = sub.add_parser("factors", parents=[common], help="list the enumerated factors")
    p.add_argument("--pair", nargs=2, metavar=("L", "M"))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    eval_at = getattr(args, "eval_at", None)
    if eval_at is not None:
        try:
            eval_at = parse_rational(eval_at)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    pair = getattr(args, "pair", None)
    return RunConfig(
        command=args.command,
        input=args.input,
        graph=args.graph,
        boundary=args.boundary,
        mode=args.mode,
        pair=tuple(pair) if pair else None,
        eval_at=eval_at,
        output=args.output,
        cap=args.cap,
        factored=args.factored,
        checks=getattr(args, "checks", None) or None,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, text = run(config)
    stream = sys.stderr if text.startswith("error:") else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
