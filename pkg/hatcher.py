"""
Hatcher - command-line front end
Builds, exports and inspects complex balls, queries paths and runs the
induced-map verification suites
"""

import argparse
import json
import logging
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

import config
from core.cache import BallCache
from core.complexes import (
    HT,
    XC,
    BallError,
    ComplexBall,
    build_ball,
    detect_cells,
    export_ball,
    is_elementary_move,
    load_ball,
    validate_cut_system,
)
from core.curves import (
    CurveClass,
    TwistWord,
    chain_curves,
    curve_from_word,
    intersection_number,
    is_dual,
    is_nonseparating,
    neighborhood_boundary,
    preset,
    standard_curves,
    torus_curve,
    twist,
)
from core.induced_map import (
    automorphism_from_twist_word,
    check_choice_independence,
    check_composition,
    check_disjointness_preservation,
    check_duality_preservation,
    check_realization,
    check_separating_extension,
    random_twist_word,
    witness_ball,
)
from core.paths import bfs_path, torus_ht_path, xc_path
from core.surface_core import (
    CurveError,
    HatcherError,
    Surface,
    SurfaceError,
    UnsupportedSurfaceError,
)

logger = logging.getLogger("hatcher")

COMMANDS = ("build", "path", "verify", "export", "cells")
SUITES = ("independence", "duality", "composition", "disjointness", "realization", "separating")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


class ConfigurationError(HatcherError, ValueError):
    """Bad flags, unreadable inputs or values out of range."""


# ========== RUN CONFIG ==========

@dataclass
class RunConfig:
    command: str
    genus: int = 1
    boundary: int = 0
    kind: str = HT
    depth: int = config.DEFAULT_DEPTH
    bound: Optional[int] = None
    word_length: int = config.TWIST_WORD_LENGTH
    seed: int = config.DEFAULT_SEED
    seed_file: Optional[str] = None
    curves: List[str] = field(default_factory=list)
    base: Optional[str] = None
    source: Optional[str] = None
    target: Optional[str] = None
    ball: Optional[str] = None
    suite: Optional[str] = None
    word: Optional[str] = None
    word2: Optional[str] = None
    trials: int = config.DEFAULT_TRIALS
    fmt: str = "json"
    out: Optional[str] = None
    cache_dir: Optional[str] = None
    use_cache: bool = True

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command}")
        if self.depth < 0:
            raise ConfigurationError("depth must be nonnegative")
        for name in ("bound", "word_length", "trials"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if self.genus < 1 or self.boundary < 0:
            raise ConfigurationError("unsupported: positive genus and nonnegative boundary required")
        if self.command == "verify" and self.suite not in SUITES:
            raise ConfigurationError(f"unknown suite {self.suite}")

    @property
    def bounds(self) -> Dict[str, Any]:
        return {"depth": self.depth, "bound": self.bound, "word_length": self.word_length}


# ========== PARSING ==========

_TOKEN = re.compile(r"^(?:t)?(?P<curve>.+?)(?:\^(?P<exp>-?\d+))?$")


def parse_curve(surface: Surface, text: str) -> CurveClass:
    """'a1'/'b2'/'x1' names, '(p,q)' on torus presets, otherwise a side word '[1,0,3,2]'."""
    text = text.strip()
    names = standard_curves(surface)
    if surface.genus >= 2:
        for i in range(surface.genus - 1):
            names[f"x{i + 1}"] = chain_curves(surface)[2 * i + 2]
    if text in names:
        return names[text]
    numbers = [int(x) for x in re.findall(r"-?\d+", text)]
    if text.startswith("(") and len(numbers) == 2:
        return torus_curve(surface, *numbers)
    if not numbers:
        raise ConfigurationError(f"cannot read curve {text!r}")
    return curve_from_word(surface, numbers)


def parse_word(surface: Surface, text: str) -> TwistWord:
    """Space-separated letters 'a1', 'b1^-1', '(1,1)^2'; the first letter acts first."""
    word = TwistWord()
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise ConfigurationError(f"cannot read twist letter {token!r}")
        exponent = int(m.group("exp") or 1)
        if exponent == 0:
            continue
        word = twist(parse_curve(surface, m.group("curve")), exponent).compose(word)
    return word


def parse_payload(surface: Surface, kind: str, text: str):
    if kind == HT:
        return validate_cut_system(surface, [parse_curve(surface, t) for t in text.split(";")])
    return parse_curve(surface, text)


def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        logger.error(f"Failed to read {path}: {e}")
        raise ConfigurationError(f"cannot read {path}: {e}") from e


def _emit(document: Dict[str, Any], out: Optional[str]) -> None:
    text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    _write(text, out)


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Failed to write {out}: {e}")
        raise ConfigurationError(f"cannot write {out}: {e}") from e


def _header(cfg: RunConfig, surface: Surface) -> Dict[str, Any]:
    return {
        "command": cfg.command,
        "engine_version": config.ENGINE_VERSION,
        "seed": cfg.seed,
        "surface": {"genus": surface.genus, "boundary": surface.boundary_count,
                    "hash": surface.surface_hash},
    }


# ========== COMMANDS ==========

def _default_seed(surface: Surface, kind: str, base: Optional[CurveClass]):
    chain = chain_curves(surface)
    if kind == HT:
        std = standard_curves(surface)
        return validate_cut_system(surface, [std[f"a{i + 1}"] for i in range(surface.genus)])
    if kind == XC:
        seed = next((c for c in chain if is_dual(c, base)), None)
        if seed is None:
            raise ConfigurationError(f"no chain curve is dual to {base}; pass --curves")
        return seed
    return chain[0]


def _ball_for(cfg: RunConfig) -> ComplexBall:
    surface = preset(cfg.genus, cfg.boundary)
    kind = cfg.kind.upper()
    base = parse_curve(surface, cfg.base) if cfg.base else (chain_curves(surface)[0] if kind == XC else None)
    if cfg.seed_file:
        data = _read_json(cfg.seed_file)
        seed = parse_payload(surface, kind, data["payload"]) if "payload" in data else None
        if seed is None:
            raise ConfigurationError("seed file needs a 'payload' entry")
    elif cfg.curves:
        seed = parse_payload(surface, kind, ";".join(cfg.curves))
    else:
        seed = _default_seed(surface, kind, base)

    cache = BallCache(Path(cfg.cache_dir) if cfg.cache_dir else None) if cfg.use_cache else None
    key = None
    if cache is not None:
        key = BallCache.key(kind, surface.surface_hash, seed,
                            dict(cfg.bounds, base=base.to_dict() if base else None))
        hit = cache.get(key)
        if hit is not None:
            logger.info(f"Cache hit {key[:12]}")
            return hit
    ball = build_ball(kind, surface, seed, depth=cfg.depth, complexity_bound=cfg.bound,
                      word_length=cfg.word_length, base=base)
    if cache is not None:
        cache.put(key, ball)
    return ball


def _ball_document(cfg: RunConfig, ball: ComplexBall) -> Dict[str, Any]:
    document = ball.to_dict()
    document.update(_header(cfg, ball.surface))
    document["ok"] = True
    return document


def cmd_build(cfg: RunConfig) -> int:
    ball = _ball_for(cfg)
    _emit(_ball_document(cfg, ball), cfg.out)
    return EXIT_OK


def cmd_export(cfg: RunConfig) -> int:
    if not cfg.ball:
        raise ConfigurationError("export needs --ball")
    ball = load_ball(_read_json(cfg.ball))
    if cfg.fmt == "json":
        _emit(_ball_document(cfg, ball), cfg.out)
    else:
        _write(export_ball(ball, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_cells(cfg: RunConfig) -> int:
    if not cfg.ball:
        raise ConfigurationError("cells needs --ball")
    ball = detect_cells(load_ball(_read_json(cfg.ball)))
    _emit(_ball_document(cfg, ball), cfg.out)
    return EXIT_OK


def cmd_path(cfg: RunConfig) -> int:
    if not (cfg.source and cfg.target):
        raise ConfigurationError("path needs --from and --to")
    kind = cfg.kind.lower()
    if kind == "ball":
        if not cfg.ball:
            raise ConfigurationError("ball paths need --ball")
        ball = load_ball(_read_json(cfg.ball))
        surface = ball.surface
        found = bfs_path(ball, parse_payload(surface, ball.kind, cfg.source),
                         parse_payload(surface, ball.kind, cfg.target))
        document = _header(cfg, surface)
        document.update({"kind": "ball", "path": [v.to_dict() for v in found] if found else None,
                         "steps": [], "ok": found is not None})
    elif kind == "xc":
        surface = preset(cfg.genus, cfg.boundary)
        base = parse_curve(surface, cfg.base) if cfg.base else chain_curves(surface)[0]
        result = xc_path(base, parse_curve(surface, cfg.source), parse_curve(surface, cfg.target))
        document = _header(cfg, surface)
        document.update({"kind": "xc", "ok": result.ok})
        document.update(result.to_dict())
    elif kind == "ht":
        surface = preset(cfg.genus, cfg.boundary)
        found = torus_ht_path(parse_payload(surface, HT, cfg.source), parse_payload(surface, HT, cfg.target))
        steps = [{"from": str(a), "to": str(b), "elementary": is_elementary_move(a, b) is not None}
                 for a, b in zip(found, found[1:])]
        document = _header(cfg, surface)
        document.update({"kind": "ht", "path": [c.to_dict() for c in found], "steps": steps,
                         "ok": all(s["elementary"] for s in steps)})
    else:
        raise ConfigurationError(f"unknown path kind {cfg.kind}")
    _emit(document, cfg.out)
    return EXIT_OK if document["ok"] else EXIT_FAILED


def _verification_ball(cfg: RunConfig, surface: Surface) -> ComplexBall:
    if cfg.ball:
        return load_ball(_read_json(cfg.ball))
    if surface.genus == 1:
        return build_ball(HT, surface, _default_seed(surface, HT, None), depth=max(cfg.depth, 1),
                          complexity_bound=cfg.bound)
    return witness_ball(surface, chain_curves(surface))


def _sample(rng: np.random.Generator, items: Sequence, count: int) -> List:
    if len(items) <= count:
        return list(items)
    picks = sorted(int(k) for k in rng.choice(len(items), size=count, replace=False))
    return [items[k] for k in picks]


def _merge(suite: str, reports: List[Dict[str, Any]]) -> Dict[str, Any]:
    samples = [s for r in reports for s in r["samples"]]
    failures = sum(r["failures"] for r in reports)
    # all-vacuous runs are not ok
    vacuous = bool(reports) and all(r.get("vacuous", False) for r in reports)
    if vacuous:
        logger.warning(f"Every {suite} check was vacuous")
    return {"suite": suite, "samples": samples, "failures": failures, "vacuous": vacuous,
            "ok": failures == 0 and not vacuous}


def cmd_verify(cfg: RunConfig) -> int:
    surface = preset(cfg.genus, cfg.boundary)
    if cfg.suite in ("disjointness", "separating") and (not surface.is_closed or surface.genus < 2):
        raise UnsupportedSurfaceError("unsupported: closed surface of genus at least 2 required")
    rng = np.random.default_rng(cfg.seed)
    ball = _verification_ball(cfg, surface)
    word = parse_word(surface, cfg.word) if cfg.word else random_twist_word(surface, 2, rng)
    f = automorphism_from_twist_word(word, ball)
    curves = [c for c in ball.curves() if is_nonseparating(c)]

    if cfg.suite == "independence":
        report = _merge(cfg.suite, [check_choice_independence(f, c, cfg.trials, cfg.seed)
                                    for c in _sample(rng, curves, 5)])
    elif cfg.suite == "duality":
        pairs = [(a, b) for i, a in enumerate(curves) for b in curves[i + 1:] if is_dual(a, b)]
        report = check_duality_preservation(f, _sample(rng, pairs, cfg.trials))
    elif cfg.suite == "composition":
        other = parse_word(surface, cfg.word2) if cfg.word2 else random_twist_word(surface, 2, rng)
        h = automorphism_from_twist_word(other, ball)
        report = check_composition(f, h, _sample(rng, curves, cfg.trials))
        report["second_word"] = str(other)
    elif cfg.suite == "disjointness":
        pairs = [(a, b) for i, a in enumerate(curves) for b in curves[i + 1:]
                 if intersection_number(a, b) == 0]
        report = _merge(cfg.suite, [check_disjointness_preservation(f, a, b)
                                    for a, b in _sample(rng, pairs, cfg.trials)])
    elif cfg.suite == "realization":
        report = check_realization(f)
    else:
        chain = chain_curves(surface)
        separating = [neighborhood_boundary(chain[:2 * h])[0] for h in range(1, surface.genus)]
        report = _merge(cfg.suite, [check_separating_extension(f, c) for c in separating])

    document = _header(cfg, surface)
    document.update(report)
    document.update({"word": str(word), "trials": cfg.trials})
    _emit(document, cfg.out)
    return EXIT_OK if report["ok"] else EXIT_FAILED


HANDLERS = {"build": cmd_build, "path": cmd_path, "verify": cmd_verify,
            "export": cmd_export, "cells": cmd_cells}


def run(cfg: RunConfig) -> int:
    """Exit 0 when every requested assertion passes, 1 on failures, 2 on configuration errors."""
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except (ConfigurationError, SurfaceError, UnsupportedSurfaceError, BallError) as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except CurveError as e:
        logger.error(f"Invalid curve: {e}")
        return EXIT_CONFIG
    except HatcherError as e:
        logger.error(f"{cfg.command} failed: {e}")
        document = {"command": cfg.command, "engine_version": config.ENGINE_VERSION,
                    "seed": cfg.seed, "ok": False, "failure": e.to_dict(), "config": asdict(cfg)}
        _emit(document, cfg.out)
        return EXIT_FAILED


# ========== MAIN ==========

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Hatcher-Thurston complex engine")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def surface_flags(p):
        p.add_argument("--genus", type=int, default=1, help="Surface genus")
        p.add_argument("--boundary", type=int, default=0, help="Boundary circles")
        p.add_argument("--out", help="Output file (default: stdout)")

    def ball_flags(p):
        p.add_argument("--depth", type=int, default=config.DEFAULT_DEPTH, help="BFS depth")
        p.add_argument("--bound", type=int, help="Complexity cap (torus height on genus 1)")
        p.add_argument("--word-length", type=int, default=config.TWIST_WORD_LENGTH,
                       help="Twist word length for neighbor generation")

    p = sub.add_parser("build", help="Build a ball")
    surface_flags(p)
    ball_flags(p)
    p.add_argument("--kind", type=str.upper, choices=["HT", "G", "N", "C", "XC"], default=HT)
    p.add_argument("--seed", dest="seed_file", help="JSON file with a 'payload' seed vertex")
    p.add_argument("--curves", nargs="+", default=[], help="Seed vertex curves")
    p.add_argument("--base", help="Base curve for XC")
    p.add_argument("--cache-dir", help="Cache directory")
    p.add_argument("--no-cache", dest="use_cache", action="store_false", help="Skip the cache")

    p = sub.add_parser("path", help="Path between two vertices")
    surface_flags(p)
    p.add_argument("--kind", choices=["xc", "ht", "ball"], default="xc")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--base", help="Base curve for XC paths")
    p.add_argument("--ball", help="Ball document for BFS paths")

    p = sub.add_parser("verify", help="Run an induced-map suite")
    surface_flags(p)
    ball_flags(p)
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--word", help="Twist word, e.g. 'a1 b1^-1'")
    p.add_argument("--word2", help="Second twist word for the composition suite")
    p.add_argument("--trials", type=int, default=config.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.add_argument("--ball", help="HT ball document")

    p = sub.add_parser("export", help="Convert a ball document")
    p.add_argument("--ball", required=True)
    p.add_argument("--format", dest="fmt", choices=["json", "dot"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("cells", help="Detect 2-cells of an HT ball")
    p.add_argument("--ball", required=True)
    p.add_argument("--out")
    return parser


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.WARNING)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        handlers.append(logging.FileHandler(config.LOG_FILE))
    logging.basicConfig(level=level, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                        handlers=handlers, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    setup_logging(args.verbose)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return run(RunConfig(**fields))


if __name__ == "__main__":
    sys.exit(main())
