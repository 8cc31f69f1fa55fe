"""Command-line interface: ``l2inv <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 input or parse error,
3 backend/domain mismatch.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from . import alpha as al
from .complexes import (circle_complex, point_complex, presentation_complex, push_complex,
                        torus_complex, validate, wedge_complex)
from .dimension import (DEFAULT_SAMPLES, DEFAULT_SVD_TOL, DEFAULT_WINDOW, cyclic_tower,
                        dim_ker_abelian, dim_ker_approx, dim_ker_finite, dim_ker_sampled, doubling,
                        fmt_q, trace_moment_check)
from .errors import (GroupMismatchError, InvalidGroupError, ParseError, ShapeError,
                     UnsupportedGroupError)
from .groups import FiniteGroup, is_trivial
from .invariants import b0_check, euler_check, l2_betti, poincare_check
from .ring import cyclic_quotient, push_to_quotient, trace_gamma, trivial_quotient
from .serialize import (complex_from_json, hom_from_json, matrix_from_json, presentation_from_json,
                        tower_from_json)
from .verify import SUITE_NAMES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BACKEND = 0, 1, 2, 3


class UsageError(Exception):
    """Bad flags or registry names (exit 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    matrix: str | None = None
    complex: str | None = None
    backend: str = "auto"
    tower: str | None = None
    quotient: str | None = None
    samples: int = DEFAULT_SAMPLES
    tol: float = DEFAULT_SVD_TOL
    seed: int = 0
    window: int = DEFAULT_WINDOW
    jobs: int = 1
    output: str | None = None
    suite: str | None = None

    def check(self):
        if self.tower is not None and self.backend not in ("auto", "tower"):
            raise UsageError(f"--tower and --backend {self.backend} are mutually exclusive")
        if self.backend == "tower" and self.tower is None:
            raise UsageError("--backend tower needs --tower")
        if self.tower is not None and self.quotient is not None:
            raise UsageError("--tower and --quotient are mutually exclusive")
        if self.samples < 1 or self.jobs < 1 or self.window < 1:
            raise UsageError("--samples, --jobs and --window must be positive")


def _read_json(path, field):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file {path!r}", field) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path!r}: {exc}", field) from exc


def resolve_complex(spec):
    """Registry names ``point``, ``circle``, ``torus:n``, ``wedge:k``,
    ``presentation:<file>``; anything else is a complex JSON file."""
    if spec == "point":
        return point_complex()
    if spec == "circle":
        return circle_complex()
    m = re.fullmatch(r"torus:(\d+)", spec)
    if m:
        return torus_complex(int(m.group(1)))
    m = re.fullmatch(r"wedge:(\d+)", spec)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise UsageError("wedge:k needs k >= 1")
        return wedge_complex(k)
    if spec.startswith("presentation:"):
        path = spec.split(":", 1)[1]
        P = presentation_from_json(_read_json(path, "presentation"))
        return presentation_complex(P, label=os.path.basename(path))
    if re.fullmatch(r"[a-z]+:.*", spec) and not os.path.exists(spec):
        raise UsageError(f"unknown complex {spec!r}")
    return complex_from_json(_read_json(spec, "complex"))


def resolve_quotient(spec, source):
    m = re.fullmatch(r"cyclic:(\d+)", spec)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise UsageError("cyclic:k needs k >= 1")
        return cyclic_quotient(source, k)
    if spec == "trivial":
        return trivial_quotient(source)
    return hom_from_json(source, _read_json(spec, "quotient"), "quotient")


def resolve_tower(spec, source):
    """``cyclic:a:b`` (or a missing file named ``cyclic_a_b[.json]``): the quotients
    ``Z/k`` for ``k = a, 2a, 4a, ..., <= b``; otherwise a tower JSON file."""
    m = re.fullmatch(r"cyclic:(\d+):(\d+)", spec)
    if not m and not os.path.exists(spec):
        m = re.fullmatch(r"cyclic_(\d+)_(\d+)(?:\.json)?", os.path.basename(spec))
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a < 1 or b < a:
            raise UsageError("cyclic tower needs 1 <= a <= b")
        return cyclic_tower(source, doubling(a, b))
    return tower_from_json(_read_json(spec, "tower"))


def _emit(obj, cfg):
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------


def cmd_dim_ker(cfg):
    A = matrix_from_json(_read_json(cfg.matrix, "matrix"))
    if cfg.tower is not None:
        T = resolve_tower(cfg.tower, A.group)
        rep = dim_ker_approx(A, T, cfg.window, cfg.jobs)
        _emit(rep.to_json(), cfg)
        return EXIT_OK
    if cfg.quotient is not None:
        A = push_to_quotient(A, resolve_quotient(cfg.quotient, A.group))
    backend = cfg.backend
    G = A.group
    if backend == "auto":
        backend = "finite" if isinstance(G, FiniteGroup) or is_trivial(G) else "abelian"
    if backend == "finite":
        res = dim_ker_finite(A)
    elif backend == "abelian":
        res = dim_ker_abelian(A)
    elif backend == "sampled":
        res = dim_ker_sampled(A, cfg.samples, cfg.tol, cfg.seed, cfg.jobs)
    else:
        raise UsageError(f"unknown backend {backend!r}")
    _emit(res.to_json(), cfg)
    return EXIT_OK


def cmd_betti(cfg, duality=None):
    C = resolve_complex(cfg.complex)
    tower = None
    if cfg.quotient is not None:
        C = push_complex(C, resolve_quotient(cfg.quotient, C.group))
    if cfg.tower is not None:
        tower = resolve_tower(cfg.tower, C.group)
    R = l2_betti(C, cfg.backend, tower, num_samples=cfg.samples, svd_tol=cfg.tol, seed=cfg.seed,
                 window=cfg.window, jobs=cfg.jobs)
    checks = []
    if R.exact:
        checks.append(euler_check(C, R))
    checks.append(b0_check(C, R))
    if duality is not None:
        checks.append(poincare_check(R, duality))
        R = R.with_flags(duality_dim=duality)
    R = R.with_checks(*checks)
    _emit(R.to_json(), cfg)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAIL


def cmd_validate(cfg):
    C = resolve_complex(cfg.complex)
    rep = validate(C)
    _emit(rep.to_json(), cfg)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_trace(cfg, power=None):
    A = matrix_from_json(_read_json(cfg.matrix, "matrix"))
    if power is not None:
        if cfg.quotient is None:
            raise UsageError("--power needs --quotient")
        q = resolve_quotient(cfg.quotient, A.group)
        res = trace_moment_check(A, q, power)
        _emit(res.to_json(), cfg)
        return EXIT_OK if (res.equal or not res.injective) else EXIT_FAIL
    if cfg.quotient is not None:
        A = push_to_quotient(A, resolve_quotient(cfg.quotient, A.group))
    _emit({"trace_gamma": fmt_q(trace_gamma(A))}, cfg)
    return EXIT_OK


def parse_bound(text):
    """Accept ``100``, ``1e100`` or ``10**100``."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)\*\*(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    try:
        d = Decimal(text)
    except InvalidOperation as exc:
        raise UsageError(f"--bound: not a number: {text!r}") from exc
    if d != d.to_integral_value() or d < 1:
        raise UsageError("--bound must be a positive integer")
    return int(d)


def cmd_alpha(cfg, r, s, bound, digits):
    try:
        rep = al.rationality_report(r, s, parse_bound(bound), digits)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(rep.to_json(), cfg)
    return EXIT_OK if rep.certified and rep.bounds_ok else EXIT_FAIL


def cmd_verify(cfg, prop=None, case=None):
    try:
        results = run_suite(cfg.suite, cfg.seed, cfg.jobs, prop, case)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = True
    out = sys.stdout
    for r in results:
        status = "PASS" if r.failure is None else "FAIL"
        out.write(f"{status} {r.suite}.{r.name}: {r.passed}/{r.total}\n")
        if r.failure is not None:
            ok = False
            out.write(f"  {r.failure}\n  repro: {r.repro}\n")
    total = sum(r.passed for r in results)
    out.write(f"{'OK' if ok else 'FAILED'}: {total} cases passed\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------------


def _default_seed():
    raw = os.environ.get("L2INV_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"L2INV_SEED must be an integer, got {raw!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="l2inv", description="L2-Betti numbers and von Neumann "
                                "dimensions over group rings, computed exactly.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, samples=True):
        sp.add_argument("--output", "-o", help="write JSON here instead of stdout")
        sp.add_argument("--seed", type=int, default=None, help="default: $L2INV_SEED or 0")
        sp.add_argument("--jobs", type=int, default=1)
        if samples:
            sp.add_argument("--backend", default="auto",
                            choices=["auto", "finite", "abelian", "sampled", "tower"])
            sp.add_argument("--tower", help="tower JSON file or cyclic:a:b")
            sp.add_argument("--quotient", help="quotient JSON file, cyclic:k or trivial")
            sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
            sp.add_argument("--tol", type=float, default=DEFAULT_SVD_TOL)
            sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)

    sp = sub.add_parser("dim-ker", help="von Neumann dimension of ker A")
    sp.add_argument("--matrix", required=True)
    common(sp)
    sp = sub.add_parser("betti", help="L2-Betti numbers of a complex")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--duality", type=int, help="also check b_p = b_{n-p} for this n")
    common(sp)
    sp = sub.add_parser("validate-complex", help="check d d = 0 and shapes")
    sp.add_argument("--complex", required=True)
    common(sp, samples=False)
    sp = sub.add_parser("trace", help="trace_gamma of a square matrix, or a trace moment check")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--quotient")
    sp.add_argument("--power", type=int)
    common(sp, samples=False)
    sp = sub.add_parser("alpha", help="certified enclosure of alpha_{r,s}")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--bound", default="100")
    sp.add_argument("--digits", type=int)
    common(sp, samples=False)
    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", default="all", choices=SUITE_NAMES)
    sp.add_argument("--property")
    sp.add_argument("--case", type=int)
    common(sp, samples=False)
    return p


def _config(ns):
    seed = ns.seed if ns.seed is not None else _default_seed()
    fields = {k: getattr(ns, k) for k in ("matrix", "complex", "backend", "tower", "quotient",
                                          "samples", "tol", "window", "jobs", "output", "suite")
              if hasattr(ns, k)}
    cfg = RunConfig(ns.command, seed=seed, **fields)
    cfg.check()
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        if ns.command == "dim-ker":
            return cmd_dim_ker(cfg)
        if ns.command == "betti":
            return cmd_betti(cfg, ns.duality)
        if ns.command == "validate-complex":
            return cmd_validate(cfg)
        if ns.command == "trace":
            return cmd_trace(cfg, ns.power)
        if ns.command == "alpha":
            return cmd_alpha(cfg, ns.r, ns.s, ns.bound, ns.digits)
        if ns.command == "verify":
            return cmd_verify(cfg, ns.property, ns.case)
    except (ParseError, UsageError, ShapeError, InvalidGroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnsupportedGroupError, GroupMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_INPUT


def entry():
    sys.exit(main())

