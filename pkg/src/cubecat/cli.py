"""Command-line interface. Results go to stdout as JSON, logs to stderr.

Exit codes: 0 success, 1 domain error (JSON ``{"error": ...}`` on stdout),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .complex import (
    CubeComplex,
    SimplicialComplex,
    boolean_complex,
    cat0_report,
    is_distributive_meet_semilattice,
    subdivide_representable,
    triangulate,
    truncate,
)
from .errors import CubeCatError, NotMeetSemilattice
from .homology import boundary_matrices, homology, homology_json
from .morphism import (
    CubeMorphism,
    RawMap,
    VariantTag,
    classify,
    compose,
    count_hom,
    enumerate_hom,
    from_table,
    load_map,
    named_generator,
    sorted_tags,
    tensor,
)
from .normal_form import (
    construct_section,
    decompose,
    epi_mono_factorize,
    extract_diagonal,
    extract_reversal,
    sections_of,
)
from .order import FinPoset
from .saturation import generating_set, saturate
from .verification import SUITES, run_suites

log = logging.getLogger("cubecat")


class UsageError(Exception):
    pass


def _read_json(source: str):
    try:
        if source == "-":
            return json.load(sys.stdin)
        return json.loads(Path(source).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"no such file: {source}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: invalid JSON ({exc})") from None


def read_map(source: str) -> CubeMorphism | RawMap:
    """A map from a JSON file, or ``gen:KIND[:i:n]`` for a named generator."""
    if source.startswith("gen:"):
        parts = source[4:].split(":")
        try:
            i, n = (int(parts[1]), int(parts[2])) if len(parts) == 3 else (1, 1)
            return named_generator(parts[0], i, n)
        except (ValueError, IndexError) as exc:
            raise UsageError(f"bad generator {source!r}: {exc}") from None
    data = _read_json(source)
    try:
        return load_map(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{source}: not a map ({exc})") from None


def read_monotone(source: str) -> CubeMorphism:
    phi = read_map(source)
    return from_table(phi) if isinstance(phi, RawMap) else phi


def read_poset(source: str) -> FinPoset:
    data = _read_json(source)
    try:
        return FinPoset.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{source}: not a poset ({exc})") from None


def read_complex(args) -> CubeComplex:
    if getattr(args, "complex", None):
        data = _read_json(args.complex)
        return CubeComplex.from_json(data)
    if getattr(args, "poset", None):
        return boolean_complex(read_poset(args.poset))
    raise UsageError("give --complex or --poset")


# -- subcommands -----------------------------------------------------------------------

def cmd_classify(args):
    phi = read_map(args.map)
    tags = classify(phi)
    out = {"tags": sorted_tags(tags)}
    if args.witness:
        if VariantTag.NONE in tags:
            out["reversal"] = extract_reversal(phi).to_json()
        elif VariantTag.BOXPLUS not in tags:
            mono = from_table(phi) if isinstance(phi, RawMap) else phi
            try:
                out["diagonal"] = extract_diagonal(mono).to_json()
            except CubeCatError:
                pass
    return out


def cmd_compose(args):
    maps = [read_monotone(m) for m in args.map]
    if args.tensor:
        return tensor(*maps).to_json()
    result = maps[-1]
    for f in reversed(maps[:-1]):
        result = compose(f, result)
    return result.to_json()


def cmd_decompose(args):
    return decompose(read_monotone(args.map)).to_json()


def cmd_homset(args):
    if args.count:
        return {"count": count_hom(args.m, args.n, args.variant)}
    maps = enumerate_hom(args.m, args.n, args.variant)
    return {"m": args.m, "n": args.n, "variant": args.variant, "count": len(maps),
            "maps": [f.to_json() for f in maps]}


def cmd_section(args):
    pi = read_monotone(args.map)
    if args.all:
        return {"sections": [s.to_json() for s in sections_of(pi)]}
    return {"section": construct_section(pi).to_json()}


def cmd_factorize(args):
    return epi_mono_factorize(read_monotone(args.map)).to_json()


def cmd_saturate(args):
    names = [g for g in (args.generators or "").split(",") if g]
    gens = generating_set(names)
    for path in args.map or []:
        gens.append(read_map(path))
    result = saturate(gens, args.maxdim)
    return result.to_json(include_maps=not args.count)


def cmd_subdivide(args):
    C = subdivide_representable(args.n, args.k)
    if args.count:
        return {"n": args.n, "k": args.k, "counts": C.counts()}
    return C.to_json()


def cmd_complex(args):
    C = boolean_complex(read_poset(args.poset))
    if args.truncate is not None:
        C = truncate(C, args.truncate)
    if args.count:
        return {"counts": C.counts()}
    return C.to_json()


def cmd_triangulate(args):
    C = read_complex(args)
    if args.truncate is not None:
        C = truncate(C, args.truncate)
    S = triangulate(C)
    if args.count:
        return {"counts": S.counts()}
    return S.to_json()


def cmd_homology(args):
    if args.simplicial:
        S = SimplicialComplex.from_json(_read_json(args.simplicial))
    else:
        C = read_complex(args)
        if args.truncate is not None:
            C = truncate(C, args.truncate)
        S = triangulate(C)
    return homology_json(homology(boundary_matrices(S), reduced=args.reduced))


def cmd_cat0(args):
    C = read_complex(args)
    out = cat0_report(C).to_json()
    try:
        out["distributive_meet_semilattice"] = is_distributive_meet_semilattice(C.base).to_json()
    except NotMeetSemilattice as exc:
        out["distributive_meet_semilattice"] = exc.to_json()
    return out


def cmd_verify(args):
    results = run_suites(args.suite, args.maxdim)
    for r in results:
        for line in r.lines:
            log.info("[%s] %s", r.name, line)
    passed = all(r.passed for r in results)
    return {"maxdim": args.maxdim, "passed": passed, "suites": [r.to_json() for r in results]}, (0 if passed else 1)


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubecat", description="Cube category toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    variants = [t.value for t in VariantTag if t is not VariantTag.NONE]

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        return p

    p = add("classify", cmd_classify, "variant tags of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--witness", action="store_true", help="also extract a reversal or diagonal")

    p = add("compose", cmd_compose, "compose (first ∘ second ∘ ...) or tensor maps")
    p.add_argument("--map", action="append", required=True)
    p.add_argument("--tensor", action="store_true")

    p = add("decompose", cmd_decompose, "tensor decomposition of an interval-preserving map")
    p.add_argument("--map", required=True)

    p = add("homset", cmd_homset, "enumerate a hom-set")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--variant", choices=variants, default="MONOTONE")
    p.add_argument("--count", action="store_true")

    p = add("section", cmd_section, "section of a surjection")
    p.add_argument("--map", required=True)
    p.add_argument("--all", action="store_true", help="list every section")

    p = add("factorize", cmd_factorize, "surjection-injection factorization")
    p.add_argument("--map", required=True)

    p = add("saturate", cmd_saturate, "close generators under composition and tensor")
    p.add_argument("--generators", default="", help="comma list of extra generators, e.g. tau,gamma-")
    p.add_argument("--map", action="append", help="additional generator map files")
    p.add_argument("--maxdim", type=int, default=2)
    p.add_argument("--count", action="store_true")

    p = add("subdivide", cmd_subdivide, "subdivision of a representable cube")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--count", action="store_true")

    p = add("complex", cmd_complex, "Boolean complex of a poset")
    p.add_argument("--poset", required=True)
    p.add_argument("--truncate", type=int)
    p.add_argument("--count", action="store_true")

    for name, fn, text in (("triangulate", cmd_triangulate, "triangulate a cube complex"),
                           ("homology", cmd_homology, "integer homology of a triangulation"),
                           ("cat0", cmd_cat0, "flag-link and homology report")):
        p = add(name, fn, text)
        p.add_argument("--complex")
        p.add_argument("--poset")
        if name != "cat0":
            p.add_argument("--truncate", type=int)
        if name == "triangulate":
            p.add_argument("--count", action="store_true")
        if name == "homology":
            p.add_argument("--simplicial")
            p.add_argument("--reduced", action="store_true")

    p = add("verify", cmd_verify, "run self-check suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--maxdim", type=int, default=3)
    return parser


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        result = args.func(args)
    except CubeCatError as exc:
        _emit(exc.to_json(), args.out)
        return 1
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"cubecat: error: {exc}\n")
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
