"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 internal verification
failure, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import yaml

from .models import export_model, full_model, homotopy_ranks, minimal_k0, minimal_k1, substitute_top
from .poincare import (InternalInconsistency, InvalidRingError, RingParseError, diagnose, load_ring,
                       validate_ring)
from .identities import run_suite
from .selfclose import UnsupportedComponent, self_closeness

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    component: int | None = None
    format: str = "text"
    minimal: bool = False
    verbose: bool = False


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False)
    return yaml.safe_dump(payload, sort_keys=False, allow_unicode=True)


def _load(cfg: RunConfig):
    return validate_ring(load_ring(cfg.input))


def cmd_validate(cfg: RunConfig) -> tuple[dict, int]:
    ring = load_ring(cfg.input)
    diags = diagnose(ring)
    payload = {"ring": ring.name, "dimension": ring.dimension, "valid": not diags,
               "diagnostics": [str(d) for d in diags]}
    if diags:
        return payload, EXIT_INVALID
    P = validate_ring(ring)
    B = P.basis
    payload["primitive"] = P.is_primitive()
    payload["d_X"] = P.d_of_X()
    payload["basis"] = [{"label": x.label, "degree": x.degree, "as": B.describe(x.label)}
                        for x in B.classes]
    return payload, EXIT_OK


def cmd_model(cfg: RunConfig) -> tuple[dict, int]:
    P = _load(cfg)
    k = cfg.component
    if cfg.minimal:
        if k not in (0, 1):
            raise UsageError("--minimal needs --component 0 or 1")
        M = minimal_k0(P) if k == 0 else minimal_k1(P).wbar
    elif k is None:
        M = full_model(P)
    else:
        M = substitute_top(full_model(P), k)
    payload = {"ring": P.name, **export_model(M)}
    return payload, EXIT_OK if payload["d_squared_zero"] else EXIT_INTERNAL


def _component(cfg: RunConfig) -> int:
    k = 0 if cfg.component is None else cfg.component
    if k not in (0, 1):
        raise UsageError(f"component must be 0 or 1, got {k}")
    return k


def cmd_selfclose(cfg: RunConfig) -> tuple[dict, int]:
    P = _load(cfg)
    rep = self_closeness(P, _component(cfg))
    payload = {"ring": P.name, **rep.export()}
    return payload, EXIT_OK if rep.verified else EXIT_INTERNAL


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    P = _load(cfg)
    checks = run_suite(P)
    ok = all(c.passed for c in checks)
    payload = {"ring": P.name, "passed": ok,
               "checks": [{"name": c.name, "status": "pass" if c.passed else "fail",
                           "vacuous": c.vacuous, "detail": c.detail, "residual": c.residual}
                          for c in checks]}
    return payload, EXIT_OK if ok else EXIT_INTERNAL


def cmd_ranks(cfg: RunConfig) -> tuple[dict, int]:
    P = _load(cfg)
    k = _component(cfg)
    alg = minimal_k0(P).algebra if k == 0 else minimal_k1(P).algebra
    ranks = {str(d): r for d, r in homotopy_ranks(alg).items()}
    return {"ring": P.name, "component": k, "ranks": ranks}, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "model": cmd_model,
    "selfclose": cmd_selfclose,
    "verify": cmd_verify,
    "ranks": cmd_ranks,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mapsphere", description="Rational models of Map(X, S^2n) and self-closeness numbers.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", "-i", required=True, help="ring file (JSON)")
    p.add_argument("--component", "-k", type=int, default=None, help="component degree")
    p.add_argument("--format", "-f", choices=("text", "json"), default="text")
    p.add_argument("--minimal", action="store_true", help="emit the minimal model")
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_IO
    cfg = RunConfig(ns.command, ns.input, ns.component, ns.format, ns.minimal, ns.verbose)
    try:
        payload, code = COMMANDS[cfg.command](cfg)
    except (RingParseError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    except InvalidRingError as exc:
        print("invalid ring:", file=err)
        for d in exc.diagnostics:
            print(f"  {d}", file=err)
        return EXIT_INVALID
    except (UsageError, UnsupportedComponent) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except InternalInconsistency as exc:
        print(f"internal verification failure: {exc}", file=err)
        return EXIT_INTERNAL
    print(render(payload, cfg.format), file=out, end="" if cfg.format == "text" else "\n")
    if code == EXIT_INVALID and cfg.command == "validate":
        for d in payload["diagnostics"]:
            print(d, file=err)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
