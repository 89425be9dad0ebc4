"""Command-line front end.

Subcommands parse a PD-code JSON diagram and run one pipeline stage.  Output
is machine-readable JSON by default (`--table` renders aligned text where it
makes sense).  Exit codes: 0 success (identities passing where applicable),
1 input error, 2 identity failure, 3 state-space cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bicomplex import Bicomplex
from .bracket import bracket, colored_jones, jones
from .cable import cable
from .conventions import Conventions
from .diagram import DiagramError, FramedLinkDiagram, parse_diagram
from .errors import DEFAULT_STATE_CAP, CapExceeded
from .khovanov import KhovanovCube
from .pairing import all_pairings_by_grade, pairing_complex

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IDENTITY = 2
EXIT_CAP = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khovacable",
        description="Exact Khovanov bicomplexes for colored Jones polynomials of cables",
    )
    parser.add_argument(
        "--cap",
        type=int,
        default=None,
        help="state-space cap (default 2^24; also via KHOVACABLE_CAP)",
    )
    parser.add_argument("--table", action="store_true", help="human-readable output")
    parser.add_argument(
        "--strand-order",
        choices=("leftmost", "rightmost"),
        default="leftmost",
        help="which parallel copy is strand 1",
    )
    parser.add_argument(
        "--line-order",
        choices=("smaller", "larger"),
        default="smaller",
        help="pairing-sign convention: which component indices count as above",
    )
    parser.add_argument(
        "--a-reading",
        choices=("behind", "ahead"),
        default="behind",
        help="bridge side at corridor crossings with a single other strand",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, needs_colors, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("diagram", help="path to a PD-code JSON file")
        if needs_colors:
            p.add_argument(
                "--colors",
                required=True,
                help="comma-separated colors, one per component (e.g. 2 or 2,1)",
            )
        return p

    add("jones", False, "unnormalized Jones polynomial via the bracket state sum")
    add("colored-jones", True, "colored Jones polynomial via the cabling formula")
    add("cable", True, "emit the cable diagram as PD-code JSON")
    add("khovanov", False, "Khovanov homology table")
    add("pairings", True, "pairing complex of the colors: counts, edges, d^2 check")
    add("bicomplex-verify", True, "build the bicomplex and verify every identity")
    add("total-homology", True, "homology of the total complex of the bicomplex")
    return parser


def _load_diagram(path: str) -> FramedLinkDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_diagram(fh.read())


def _parse_colors(text: str, diagram: FramedLinkDiagram) -> tuple[int, ...]:
    try:
        colors = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise DiagramError(f"bad color tuple {text!r}") from exc
    if len(colors) != diagram.n_components:
        raise DiagramError(
            f"color tuple has {len(colors)} entries, diagram has {diagram.n_components} components"
        )
    return colors


def _emit(payload: dict, table: bool) -> None:
    if table and "table" in payload:
        print(payload["table"])
    else:
        payload = {k: v for k, v in payload.items() if k != "table"}
        print(json.dumps(payload, indent=2, sort_keys=True))


def _homology_table(rows) -> str:
    lines = ["   i    j  group"]
    for (i, j), summary in rows:
        lines.append(f"{i:4d} {j:4d}  {summary}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cap = args.cap
    if cap is None:
        cap = int(os.environ.get("KHOVACABLE_CAP", DEFAULT_STATE_CAP))
    conventions = Conventions(
        strand_order=args.strand_order,
        above_lines=args.line_order,
        a_bridge=args.a_reading,
    )
    try:
        return _run(args, cap, conventions)
    except CapExceeded as exc:
        print(json.dumps({"error": "cap exceeded", "detail": str(exc)}), file=sys.stderr)
        return EXIT_CAP
    except (DiagramError, OSError, ValueError) as exc:
        print(json.dumps({"error": "input", "detail": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


def _run(args, cap: int, conventions: Conventions) -> int:
    if args.command == "pairings":
        try:
            colors = tuple(int(part) for part in args.colors.split(","))
        except ValueError as exc:
            raise DiagramError(f"bad color tuple {args.colors!r}") from exc
        graph = pairing_complex(colors, above=conventions.above_lines)
        payload = graph.to_json_dict()
        payload["counts"] = [len(level) for level in graph.grades]
        payload["d_squared"] = "ok"
        payload["table"] = "\n".join(
            f"k={k}: {len(level)} pairings: " + " ".join(str(p) for p in level)
            for k, level in enumerate(graph.grades)
        )
        _emit(payload, args.table)
        return EXIT_OK

    diagram = _load_diagram(args.diagram)

    if args.command == "jones":
        poly = jones(diagram, cap=cap)
        _emit(
            {
                "polynomial": poly.to_json_dict(),
                "writhe": diagram.writhe(),
                "table": str(poly),
            },
            args.table,
        )
        return EXIT_OK

    if args.command == "colored-jones":
        colors = _parse_colors(args.colors, diagram)
        poly = colored_jones(diagram, colors, cap=cap)
        _emit({"polynomial": poly.to_json_dict(), "colors": list(colors), "table": str(poly)}, args.table)
        return EXIT_OK

    if args.command == "cable":
        colors = _parse_colors(args.colors, diagram)
        cd = cable(diagram, colors, conventions.strand_order)
        payload = cd.diagram.to_json_dict()
        payload["strands"] = [list(s) for s in cd.strands]
        payload["table"] = cd.diagram.serialize().rstrip("\n")
        _emit(payload, args.table)
        return EXIT_OK

    if args.command == "khovanov":
        cube = KhovanovCube(diagram, cap=cap)
        cube.verify_d_squared()
        homology = sorted(cube.homology(cap=cap).items())
        payload = {
            "euler": cube.graded_euler().to_json_dict(),
            "homology": [
                {"i": i, "j": j, "rank": h.rank, "torsion": list(h.torsion)}
                for (i, j), h in homology
            ],
            "table": _homology_table(homology),
        }
        _emit(payload, args.table)
        return EXIT_OK

    if args.command == "bicomplex-verify":
        colors = _parse_colors(args.colors, diagram)
        bic = Bicomplex(diagram, colors, conventions, cap=cap)
        report = bic.verify_all()
        flat = " ".join(f"{k}={v}" for k, v in report["identities"].items())
        report["table"] = flat
        _emit(report, args.table)
        return EXIT_OK if report["ok"] else EXIT_IDENTITY

    if args.command == "total-homology":
        colors = _parse_colors(args.colors, diagram)
        bic = Bicomplex(diagram, colors, conventions, cap=cap)
        homology = bic.total_homology()
        payload = {
            "total_homology": {
                str(n): {"rank": h.rank, "torsion": list(h.torsion)}
                for n, h in sorted(homology.items())
            },
            "table": "\n".join(f"degree {n}: {h}" for n, h in sorted(homology.items())),
        }
        _emit(payload, args.table)
        return EXIT_OK

    raise DiagramError(f"unknown subcommand {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
