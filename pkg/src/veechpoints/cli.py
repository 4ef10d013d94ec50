"""Command-line front end.

    veechpoints periodic-points --family h2 --disc 5
    veechpoints decompose --family prym-aplus --disc 17 --direction 1,0
    veechpoints candidates --surface surf.json --cache-dir .cache

Exit codes: 0 success, 2 invalid input, 3 square-tiled surface, 4 a cap was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .delaunay import DEFAULT_MAX_CONTRACTIONS
from .errors import (CapExceeded, MissingGenerators, NotInVeechGroup, NotVeechData,
                     SquareTiledUnsupported, ValidationError)
from .families import build_h2_eigenform, build_prym
from .geom import Mat2, Vec
from .cylinders import decompose
from .pipeline import Pipeline
from .render import render_svg
from .search import DEFAULT_MAX_A, DEFAULT_MAX_N
from .serialize import (canonical_dumps, load_surface, point_to_json, surface_to_json,
                        vec_to_json)
from .surface import TriangulatedSurface

log = logging.getLogger("veechpoints")

EXIT_OK, EXIT_INVALID, EXIT_SQUARE_TILED, EXIT_CAP = 0, 2, 3, 4

FAMILIES = {
    "h2": lambda D: build_h2_eigenform(D),
    "prym-aplus": lambda D: build_prym(D, "A+"),
    "prym-aminus": lambda D: build_prym(D, "A-"),
}

DEFAULTS = {
    "family": None,
    "disc": None,
    "surface": None,
    "direction": "1,0",
    "cache_dir": None,
    "max_contractions": DEFAULT_MAX_CONTRACTIONS,
    "max_a": DEFAULT_MAX_A,
    "max_n": DEFAULT_MAX_N,
    "verify_orbits": 0,
    "search": True,
}


# -- argument handling ----------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("surface source")
    src.add_argument("--family", choices=sorted(FAMILIES), default=None,
                     help="built-in family (needs --disc)")
    src.add_argument("--disc", type=int, default=None, metavar="N", help="discriminant D")
    src.add_argument("--surface", default=None, metavar="FILE", help="surface JSON file")
    opts = common.add_argument_group("options")
    opts.add_argument("--config", default=None, metavar="FILE",
                      help="JSON file of option defaults (flags take precedence)")
    opts.add_argument("--cache-dir", default=None, metavar="PATH")
    opts.add_argument("--max-contractions", type=int, default=None)
    opts.add_argument("--max-a", type=int, default=None)
    opts.add_argument("--max-n", type=int, default=None)
    opts.add_argument("--output", "-o", default=None, metavar="PATH",
                      help="write JSON here instead of stdout")
    opts.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="veechpoints",
                                description="Periodic points of non-square-tiled Veech surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", parents=[common], help="cylinder decomposition in one direction")
    d.add_argument("--direction", default=None, metavar="X,Y",
                   help="direction vector, rational entries (default 1,0)")

    sub.add_parser("segments", parents=[common], help="candidate segments from the constraints")
    sub.add_parser("candidates", parents=[common], help="finite candidate point set")

    for name, helptext in (("periodic-points", "full pipeline"),
                           ("render", "full pipeline, SVG picture only")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("--render", default=None, metavar="PATH",
                       help="also write an SVG picture" if name == "periodic-points"
                       else "SVG output path (default stdout)")
        q.add_argument("--verify-orbits", type=int, default=None, metavar="DEPTH",
                       help="re-check closure under generator words up to this length")
        q.add_argument("--no-search", dest="search", action="store_false", default=None,
                       help="fail instead of searching for Veech group elements "
                            "when the surface has no generators")
    return p


def _settings(args: argparse.Namespace) -> dict:
    """Flags over config file over defaults."""
    cfg: dict = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    out = dict(DEFAULTS)
    out.update(cfg)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def _parse_direction(text: str, d: int) -> Vec:
    from .numfield import Quad
    try:
        xs = [Fraction(part.strip()) for part in text.split(",")]
    except ValueError:
        raise ValidationError(f"direction {text!r} must be two rationals X,Y") from None
    if len(xs) != 2 or xs == [0, 0]:
        raise ValidationError(f"direction {text!r} must be a nonzero pair X,Y")
    return Vec(Quad(xs[0], 0, d), Quad(xs[1], 0, d))


def _load(cfg: dict) -> tuple[TriangulatedSurface, Optional[list[Mat2]]]:
    if cfg["surface"] and cfg["family"]:
        raise ValidationError("give either --surface or --family, not both")
    if cfg["surface"]:
        return load_surface(cfg["surface"])
    if cfg["family"]:
        if cfg["disc"] is None:
            raise ValidationError("--family needs --disc")
        try:
            return FAMILIES[cfg["family"]](int(cfg["disc"]))
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
    raise ValidationError("no surface given: use --surface FILE or --family NAME --disc N")


# -- caching ------------------------------------------------------------------


def _cache_key(command: str, s: TriangulatedSurface, gens, params: dict) -> str:
    blob = canonical_dumps({"version": __version__, "command": command,
                            "surface": surface_to_json(s, gens), "params": params})
    return hashlib.sha256(blob.encode()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _cached(cfg: dict, command: str, s, gens, params: dict, compute: Callable[[], dict]) -> str:
    if not cfg["cache_dir"]:
        return canonical_dumps(compute())
    path = Path(cfg["cache_dir"]) / f"{command}-{_cache_key(command, s, gens, params)}.json"
    if path.exists():
        log.info("cache hit %s", path)
        return path.read_text()
    text = canonical_dumps(compute())
    _atomic_write(path, text)
    return text


# -- commands -------------------------------------------------------------------


def _pipeline(cfg: dict, s, gens) -> Pipeline:
    if gens is None and not cfg["search"]:
        raise MissingGenerators(
            "the surface has no Veech group generators; add a \"generators\" list to the surface "
            "file, or drop --no-search to let the tool look for Veech group elements itself")
    return Pipeline(s, gens, max_contractions=cfg["max_contractions"],
                    max_a=cfg["max_a"], max_n=cfg["max_n"])


def _caps(cfg: dict) -> dict:
    return {k: cfg[k] for k in ("max_contractions", "max_a", "max_n")}


def cmd_decompose(cfg: dict, s, gens) -> str:
    v = _parse_direction(cfg["direction"], s.disc)
    params = {"direction": vec_to_json(v), "max_contractions": cfg["max_contractions"]}
    return _cached(cfg, "decompose", s, gens, params,
                   lambda: decompose(s, v, cfg["max_contractions"]).to_json())


def cmd_segments(cfg: dict, s, gens) -> str:
    def compute():
        P = _pipeline(cfg, s, gens)
        regs = P.regions()
        return {
            "regions": [{"index": r.index, "horizontal_cylinder": r.hcyl, "vertical_cylinder": r.vcyl,
                         "width": r.width.to_ints(), "height": r.height.to_ints()} for r in regs],
            "segments": [{"region": cs.region, "start": vec_to_json(cs.segment.p),
                          "end": vec_to_json(cs.segment.q),
                          "shear": "vertical" if cs.vertical else "horizontal",
                          "target_region": cs.source.target, "offset": cs.source.offset.to_ints()}
                         for cs in P.segments()],
        }
    return _cached(cfg, "segments", s, gens, _caps(cfg), compute)


def cmd_candidates(cfg: dict, s, gens) -> str:
    def compute():
        P = _pipeline(cfg, s, gens)
        pts = sorted({P.to_original(p) for p in P.candidates()},
                     key=lambda p: (p.tri, p.coords.x, p.coords.y))
        log.info("%d candidate points", len(pts))
        return {"count": len(pts), "hyperbolic_a": P.a, "power_n": P.n,
                "points": [point_to_json(p) for p in pts]}
    return _cached(cfg, "candidates", s, gens, _caps(cfg), compute)


def _svg(P: Pipeline) -> str:
    segs, _ = P.placed_segments()
    pieces = [pc for sg in segs for pc in sg.pieces]
    orbit = P.orbit().points
    cones = {p for p in orbit if P.to_original(p) in
             {pp.point for pp in P.periodic_points() if pp.singular}}
    return render_svg(P.fixed, segments=pieces, candidates=P.candidates(),
                      periodic=[p for p in orbit if p not in cones], singular=cones,
                      title=P.original.name)


def cmd_periodic_points(cfg: dict, s, gens, render_path: Optional[str]) -> str:
    P = _pipeline(cfg, s, gens)
    params = {**_caps(cfg), "verify_orbits": cfg["verify_orbits"]}
    text = _cached(cfg, "periodic-points", s, gens, params, lambda: P.result(cfg["verify_orbits"]))
    if render_path:
        Path(render_path).write_text(_svg(P))
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    level = logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    log.setLevel(level)
    try:
        cfg = _settings(args)
        s, gens = _load(cfg)
        if args.command == "decompose":
            text = cmd_decompose(cfg, s, gens)
        elif args.command == "segments":
            text = cmd_segments(cfg, s, gens)
        elif args.command == "candidates":
            text = cmd_candidates(cfg, s, gens)
        elif args.command == "periodic-points":
            text = cmd_periodic_points(cfg, s, gens, args.render)
            if cfg["verify_orbits"] and not json.loads(text).get("verified", True):
                print("orbit verification failed", file=sys.stderr)
                return EXIT_INVALID
        else:
            text = _svg(_pipeline(cfg, s, gens))
            if args.render:
                Path(args.render).write_text(text)
                return EXIT_OK
    except SquareTiledUnsupported as exc:
        print(f"square-tiled surface: {exc}", file=sys.stderr)
        return EXIT_SQUARE_TILED
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValidationError, MissingGenerators, NotInVeechGroup, NotVeechData) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        _atomic_write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
