"""Command-line front end.

Exit codes: 0 when everything checked passes, 1 when a verification fails,
2 for invalid input.  Data goes to stdout (or ``--out``), diagnostics to stderr.
Set ``HITCHMONO_THREADS`` to run verification groups on a thread pool.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .monodromy import CHECK_GROUPS, Certificate, MonodromyModel, model
from .orbits import (EnumerationRangeError, MAX_ENUMERATE_GENUS, OrbitReport, component_count,
                     enumerate_orbits, orbit_report)
from .serialize import (SchemaError, dumps, graph_from_json, graph_to_dot, graph_to_json,
                        graph_to_text)
from .spectral_graph import SpectralGraph, UnsupportedGenusError, build

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "HITCHMONO_THREADS"


class InputError(ValueError):
    """Bad command-line input; maps to exit code 2."""


@dataclass
class CheckEntry:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""


@dataclass
class RunReport:
    tool: str
    version: str
    genus: int
    command: str
    checks: list[CheckEntry] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        out = {"tool": self.tool, "version": self.version, "genus": self.genus,
               "command": self.command, "passed": self.passed,
               "checks": self.checks, "data": self.data}
        if self.timings is not None:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out


def _report(genus: int, command: str) -> RunReport:
    return RunReport("hitchmono", __version__, genus, command)


def _entries(cert: Certificate) -> list[CheckEntry]:
    out = []
    for c in cert.checks:
        witness = c.witness
        if not c.passed and witness is None:
            witness = c.detail or "check failed"
        out.append(CheckEntry(c.name, c.passed, witness, c.detail))
    return out


# -- helpers ----------------------------------------------------------------------------


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _load_graph(args: argparse.Namespace) -> SpectralGraph:
    if getattr(args, "graph_file", None):
        try:
            with open(args.graph_file, encoding="utf-8") as fh:
                graph = graph_from_json(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read graph file: {exc}") from None
        if args.genus is not None and args.genus != graph.genus:
            raise InputError(f"--genus {args.genus} disagrees with graph file genus {graph.genus}")
        if graph.genus < 3:
            raise UnsupportedGenusError("genus ≥ 3 required")
        return graph
    if args.genus is None:
        raise InputError("--genus or --graph-file is required")
    return build(args.genus)


def _model(args: argparse.Namespace) -> MonodromyModel:
    if getattr(args, "graph_file", None):
        return MonodromyModel(_load_graph(args))
    if args.genus is None:
        raise InputError("--genus or --graph-file is required")
    return model(args.genus)


def _require_genus(args: argparse.Namespace, minimum: int = 3) -> int:
    if args.genus is None:
        raise InputError("--genus is required")
    if args.genus < minimum:
        raise UnsupportedGenusError(f"genus ≥ {minimum} required")
    return args.genus


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(args: argparse.Namespace, rep: RunReport, text: Callable[[], str]) -> int:
    if not args.timings:
        rep.timings = None
    _emit(args, text() if args.format == "text" else dumps(rep.to_dict()))
    for c in rep.checks:
        if not c.passed:
            print(f"FAILED {c.name}: {c.witness}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _checks_text(rep: RunReport) -> str:
    lines = [f"genus {rep.genus} {rep.command}"]
    for c in rep.checks:
        tail = f"  ({c.witness})" if not c.passed else (f"  [{c.detail}]" if c.detail else "")
        lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.name}{tail}")
    for k, v in rep.data.items():
        if not isinstance(v, (dict, list)):
            lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


# -- orbit and component data -------------------------------------------------------------


def _orbit_data(rep: OrbitReport) -> dict[str, Any]:
    return {
        "mode": rep.mode,
        "enumeration": rep.enumeration,
        "total_points": str(rep.total_points),
        "orbit_count": rep.orbit_count,
        "classes": [{"kind": c.kind, "m": c.m, "euler_class": c.euler_class,
                     "orbit_count": c.orbit_count, "orbit_size": str(c.orbit_size)}
                    for c in rep.classes],
        "orbits": [{"representative": str(o.representative), "size": str(o.size),
                    "label": str(o.label), "euler_class": o.euler_class} for o in rep.orbits],
    }


def _orbit_checks(rep: OrbitReport) -> list[CheckEntry]:
    g = rep.genus
    want = 2 ** (2 * g) + g - 1
    total = sum(c.orbit_count * c.orbit_size for c in rep.classes)
    out = [CheckEntry("orbits: count = 2^(2g)+g-1", rep.orbit_count == want,
                      None if rep.orbit_count == want else rep.orbit_count, str(rep.orbit_count)),
           CheckEntry("orbits: sizes sum to 2^(6g-6)", total == rep.total_points,
                      None if total == rep.total_points else str(total))]
    bad = [c for c in rep.classes if not 0 <= c.euler_class <= g - 1]
    out.append(CheckEntry("orbits: 0 <= euler class <= g-1", not bad,
                          [c.m for c in bad] if bad else None))
    return out


def _component_run(genus: int, enumerated: OrbitReport | None) -> RunReport:
    count = component_count(genus, enumerated)
    rep = _report(genus, "components")
    rep.data = {"as_complex": count.as_complex, "full_real": count.full_real,
                "decomposition": count.decomposition,
                "decomposition_sum": count.decomposition_sum,
                "enumerated_orbits": count.enumerated_orbits, "notes": count.notes}
    ok = count.decomposition_sum == count.full_real
    rep.checks.append(CheckEntry("components: decomposition sum = full_real", ok,
                                 None if ok else count.decomposition_sum))
    if count.enumerated_orbits is not None:
        ok = count.enumerated_orbits == count.as_complex
        rep.checks.append(CheckEntry("components: enumerated orbits = as_complex", ok,
                                     None if ok else count.enumerated_orbits))
    return rep


# -- commands -----------------------------------------------------------------------------


def cmd_graph(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    writer = {"json": graph_to_json, "dot": graph_to_dot, "text": graph_to_text}[args.format]
    _emit(args, writer(graph))
    return EXIT_OK


def cmd_generators(args: argparse.Namespace) -> int:
    mdl = _model(args)
    graph = mdl.graph
    try:
        mdl.p2_generators
    except (ValueError, AssertionError, KeyError, IndexError) as exc:
        print(f"error: cannot build generators on this graph: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rows = []
    for e, (gen, mat) in enumerate(zip(mdl.generators, mdl.p2_generators)):
        rows.append({"id": e, "edge": str(graph.edges[e].label),
                     "transposition": list(gen.perm.cycles()[0]),
                     "pairs_with": [str(graph.edges[f].label) for f in range(graph.n_edges)
                                    if (graph.pairing_mask(e) >> f) & 1],
                     "p2_matrix": mat.to_strings()})
    if args.format == "text":
        lines = [f"genus {graph.genus}: {len(rows)} generators on P[2] (dim {mdl.basis.dim})"]
        for r in rows:
            lines.append(f"{r['edge']}: swaps {r['transposition'][0]} {r['transposition'][1]}")
            lines.extend("  " + s for s in r["p2_matrix"])
        _emit(args, "\n".join(lines) + "\n")
    else:
        basis = [str(v) for v in mdl.basis.vectors]
        _emit(args, dumps({"genus": graph.genus, "basis": basis, "generators": rows}))
    return EXIT_OK


def _parse_checks(spec: str | None) -> tuple[str, ...]:
    if not spec:
        return CHECK_GROUPS
    names = tuple(s.strip() for s in spec.split(",") if s.strip())
    unknown = [n for n in names if n not in CHECK_GROUPS]
    if unknown:
        raise InputError(f"unknown check group(s) {unknown}; choose from {', '.join(CHECK_GROUPS)}")
    return names


def _verify_run(args: argparse.Namespace) -> RunReport:
    groups = _parse_checks(args.checks)
    threads = _threads()
    t0 = time.perf_counter()
    mdl = _model(args)
    cert = mdl.verify(groups, threads)
    rep = _report(mdl.genus, "verify")
    rep.checks = _entries(cert)
    rep.data = {"groups": list(groups), "observations": cert.observations,
                "group_order": None if cert.group_order is None else str(cert.group_order)}
    if cert.kernel is not None:
        k = cert.kernel
        rep.data["kernel"] = {"rank": k.rank, "target": k.target, "seeds": k.seeds,
                              "conjugations": k.conjugations, "random_samples": k.random_samples}
    rep.timings = {"verify": time.perf_counter() - t0}
    return rep


def cmd_verify(args: argparse.Namespace) -> int:
    rep = _verify_run(args)
    return _emit_report(args, rep, lambda: _checks_text(rep))


def _orbits_run(args: argparse.Namespace) -> RunReport:
    genus = _require_genus(args)
    t0 = time.perf_counter()
    orb = orbit_report(genus, args.mode)
    rep = _report(genus, "orbits")
    rep.checks = _orbit_checks(orb)
    rep.data = _orbit_data(orb)
    rep.timings = {"orbits": time.perf_counter() - t0}
    return rep


def _orbits_text(rep: RunReport) -> str:
    d = rep.data
    lines = [f"genus {rep.genus}: {d['orbit_count']} orbits on {d['total_points']} points"
             f" ({d['mode']}, enumeration {d['enumeration']})"]
    for c in d["classes"]:
        tag = "section" if c["kind"] == "section" else f"m={c['m']}"
        lines.append(f"  {tag:8} k={c['euler_class']}  orbits={c['orbit_count']}"
                     f"  size={c['orbit_size']}")
    lines.extend(_checks_text(rep).splitlines()[1:])
    return "\n".join(lines) + "\n"


def cmd_orbits(args: argparse.Namespace) -> int:
    rep = _orbits_run(args)
    return _emit_report(args, rep, lambda: _orbits_text(rep))


def _components_run(args: argparse.Namespace) -> RunReport:
    genus = _require_genus(args, minimum=2)
    t0 = time.perf_counter()
    enumerated = None
    do_enum = args.mode == "enumerate" or (args.mode == "auto" and 3 <= genus <= 4)
    if do_enum:
        enumerated = enumerate_orbits(genus)
    rep = _component_run(genus, enumerated)
    rep.timings = {"components": time.perf_counter() - t0}
    return rep


def cmd_components(args: argparse.Namespace) -> int:
    rep = _components_run(args)
    return _emit_report(args, rep, lambda: _checks_text(rep))


def cmd_report(args: argparse.Namespace) -> int:
    genus = _require_genus(args)
    parts = [_verify_run(args), _orbits_run(args), _components_run(args)]
    rep = _report(genus, "report")
    for p in parts:
        rep.checks.extend(p.checks)
        rep.data[p.command] = p.data
    rep.timings = {k: v for p in parts for k, v in (p.timings or {}).items()}
    return _emit_report(args, rep, lambda: "".join(_checks_text(p) for p in parts))


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hitchmono", description="Mod-2 monodromy and orbit census on Copeland's graph.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats: tuple[str, ...], graph_file: bool) -> None:
        p.add_argument("--genus", type=int, help="genus g >= 3")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", help="write output to this file instead of stdout")
        if graph_file:
            p.add_argument("--graph-file", help="graph JSON document to use instead of the built graph")

    def mode_flags(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--enumerate", dest="mode", action="store_const", const="enumerate",
                           help=f"exhaustive orbit enumeration (genus <= {MAX_ENUMERATE_GENUS})")
        group.add_argument("--classify", dest="mode", action="store_const", const="classify",
                           help="counts from the orbit invariant, without enumeration")
        p.set_defaults(mode="auto")

    def timing_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (output is then not reproducible)")

    p = sub.add_parser("graph", help="emit the spectral graph")
    common(p, ("json", "dot", "text"), graph_file=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("generators", help="emit generator permutations and P[2] matrices")
    common(p, ("json", "text"), graph_file=True)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("verify", help="run the verification suite")
    common(p, ("json", "text"), graph_file=True)
    p.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECK_GROUPS)}")
    timing_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbits", help="orbit census on P[2]")
    common(p, ("json", "text"), graph_file=False)
    mode_flags(p)
    timing_flag(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("components", help="connected-component counts")
    common(p, ("json", "text"), graph_file=False)
    mode_flags(p)
    timing_flag(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("report", help="verify, orbits and components together")
    common(p, ("json", "text"), graph_file=False)
    mode_flags(p)
    p.add_argument("--checks", help="check groups for the verify part")
    timing_flag(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnumerationRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: rerun with --classify", file=sys.stderr)
        return EXIT_INPUT
    except (UnsupportedGenusError, InputError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
