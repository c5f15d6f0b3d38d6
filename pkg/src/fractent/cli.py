"""Command-line entry point.

Exit codes: 0 ok, 2 usage, 3 size cap, 4 parse error, 5 oracle margin.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as region_io
from .errors import (CapExceeded, FractentError, LSystemParseError, MarginTooSmall,
                     RegionParseError, TooManySpins, WordTooLarge)
from .families import FAMILIES, get_family
from .lsystem import (KOCH, MOORE, close_moore, parse_lsystem, path_to_region, rewrite,
                      turtle)
from .oracle import oracle_report
from .region import count_features, count_inward_angles_by_turns
from .render import render_pgm, render_svg
from .scaling import check_gamma_bound, emit_table1

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_PARSE, EXIT_MARGIN = 0, 2, 3, 4, 5

BUILTIN_SYSTEMS = {"moore": MOORE, "koch": KOCH}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text, out: str | None) -> None:
    if out is None or out == "-":
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(text)
        return
    path = Path(out)
    if isinstance(text, bytes):
        path.write_bytes(text)
    else:
        path.write_text(text)


def cmd_generate(args) -> int:
    fam = get_family(args.family)
    region = fam.generate(args.n)
    if args.out:
        region_io.write_region(args.out, region, family=fam.name, n=args.n)
    else:
        _emit(region_io.region_to_ascii(region), None)
    return EXIT_OK


def cmd_analyze(args) -> int:
    region, _ = region_io.read_region(args.region)
    counts = count_features(region)
    report = counts.as_dict()
    if args.turns:
        report["alpha_turns"] = count_inward_angles_by_turns(region, resolve_pinches=True)
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    region, _ = region_io.read_region(args.region)
    report = oracle_report(region, args.L, margin=args.margin, mu=args.mu)
    _emit(_dump(report), args.out)
    return EXIT_OK


def _parse_sizes(items) -> dict:
    sizes = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--n expects family=N, got {item!r}")
        try:
            sizes[get_family(name).name] = int(value)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from exc
        except ValueError as exc:
            raise UsageError(f"bad size in {item!r}") from exc
    return sizes


def cmd_table1(args) -> int:
    if args.bounds:
        rows = [{
            "family": b.family,
            "gamma": f"{b.gamma.numerator}/{b.gamma.denominator}",
            "D_expr": b.D_expr,
            "one_over_D": round(b.one_over_D, 10),
            "holds": b.holds,
            "equality": b.equality,
        } for b in check_gamma_bound()]
        _emit(_dump(rows), args.out)
        return EXIT_OK
    text = emit_table1(_parse_sizes(args.n), fmt=args.format, workers=args.workers)
    _emit(text, args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    region, _ = region_io.read_region(args.region)
    if args.format == "svg":
        data = render_svg(region, cell=args.cell or 10, mark_adjacent=args.mark_adjacent)
    else:
        data = render_pgm(region, cell=args.cell or 4, mark_adjacent=args.mark_adjacent)
    _emit(data, args.out)
    return EXIT_OK


def cmd_lsys(args) -> int:
    if args.file:
        lsys = parse_lsystem(Path(args.file).read_text())
    else:
        lsys = BUILTIN_SYSTEMS[args.system]
    word = rewrite(lsys, args.steps, cancel_turns=not args.no_cancel)
    if args.close_moore:
        word = close_moore(word + "F")
    if args.show == "word":
        _emit(word + "\n", args.out)
    elif args.show == "count":
        _emit(_dump({"length": len(word), "F": word.count("F")}), args.out)
    else:
        path = turtle(word)
        if args.show == "path":
            _emit(_dump({"start": list(path.start), "end": list(path.end),
                         "closed": path.closed, "steps": path.steps}), args.out)
        else:
            _emit(region_io.region_to_ascii(path_to_region(path).canonical()), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractent",
        description="Fractal lattice bipartitions and toric-code entanglement entropy.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a family member and write it as ASCII")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="region file; a .json sidecar is written next to it")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="feature counts of a region file")
    p.add_argument("region")
    p.add_argument("--turns", action="store_true", help="also count inward angles by walking the boundary")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle", help="stabilizer-group entropy of a region on a torus")
    p.add_argument("region")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--mu", type=float, help="string tension for the weighted state (small tori only)")
    p.add_argument("--margin", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table1", help="measured and closed-form counts for all families")
    p.add_argument("--n", action="append", metavar="FAMILY=N", help="override one family's size")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--bounds", action="store_true", help="report the gamma <= 1/D check instead")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("render", help="draw a region file as SVG or PGM")
    p.add_argument("region")
    p.add_argument("--format", choices=["svg", "pgm"], default="svg")
    p.add_argument("--cell", type=int, help="pixels per lattice cell")
    p.add_argument("--mark-adjacent", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("lsys", help="rewrite an L-system and interpret it")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--system", choices=sorted(BUILTIN_SYSTEMS))
    src.add_argument("--file", help="L-system description file")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--show", choices=["word", "count", "path", "region"], default="word")
    p.add_argument("--no-cancel", action="store_true", help="keep +- and -+ pairs")
    p.add_argument("--close-moore", action="store_true", help="append and fix the Moore closing segment")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lsys)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and isinstance(args.n, int) and args.n < 0:
        parser.error("--n must be non-negative")
    try:
        return args.func(args)
    except (CapExceeded, WordTooLarge, TooManySpins) as exc:
        print(f"fractent: size cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (RegionParseError, LSystemParseError) as exc:
        print(f"fractent: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MarginTooSmall as exc:
        print(f"fractent: {exc}", file=sys.stderr)
        return EXIT_MARGIN
    except KeyError as exc:
        print(f"fractent: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"fractent: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"fractent: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FractentError as exc:
        print(f"fractent: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
