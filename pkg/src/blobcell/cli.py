"""Batch command-line surface.

Subcommands build the algebras at a requested scale, run the verification
suites, and emit machine-readable artifacts:

* ``dims``   -- dimension table (cyclotomic algebra, quotient, shapes).
* ``verify`` -- invariant suites with per-check pass/fail and witnesses.
* ``basis``  -- the graded cellular basis, vector by vector.
* ``cell``   -- cell-module data (dimensions, Gram ranks, radicals).
* ``trace``  -- a symbolic straightening trace for a chosen dot.

Reports are JSON (deterministic modulo the timestamp field); matrices can
be written as CSV.  Parameters come from flags or a plain ``key=value``
config file, with the level presets as defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import blob as B
from . import combinatorics as comb
from . import exactfield as xf
from . import hecke as H
from . import klrcalc as K

SUITES = ("hecke", "klr", "cellular", "jm", "rewrite", "all")


@dataclass
class RunConfig:
    """Validated numerical scope of one run."""

    n: int
    l: int
    e: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    kappa_hat: Optional[tuple] = None
    theta: Optional[tuple] = None
    suite: str = "all"
    out: Optional[str] = None
    oracle: bool = True

    def params(self) -> H.HeckeParams:
        """Resolved parameters; raises ValueError naming the violated
        multicharge condition on bad input."""
        params = H.default_params(self.n, self.l, e=self.e, p=self.p,
                                  q=self.q, hat_kappa=self.kappa_hat)
        if self.p is not None and (self.p - 1) % params.e:
            raise ValueError(
                f"e = {params.e} does not divide p - 1 = {self.p - 1}")
        params.validate()
        return params

    def weighting(self) -> tuple:
        if self.theta is not None:
            if len(self.theta) != self.l:
                raise ValueError("weighting length differs from the level")
            return tuple(self.theta)
        return comb.theta_zero(self.l)


def _int_tuple(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(",", " ").split())


def read_config_file(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def config_from_args(args: argparse.Namespace) -> RunConfig:
    raw = {}
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for key in ("n", "l", "e", "p", "q", "kappa_hat", "theta", "suite",
                "out", "oracle"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    for key in ("n", "l", "e", "p", "q"):
        if key in raw and raw[key] is not None:
            raw[key] = int(raw[key])
    for key in ("kappa_hat", "theta"):
        if isinstance(raw.get(key), str):
            raw[key] = _int_tuple(raw[key])
    if isinstance(raw.get("oracle"), str):
        raw["oracle"] = raw["oracle"].lower() in ("on", "true", "1", "yes")
    if "n" not in raw or "l" not in raw:
        raise ValueError("both n and l are required")
    raw.setdefault("suite", "all")
    if raw["suite"] not in SUITES:
        raise ValueError(f"unknown suite {raw['suite']!r}; "
                         f"choose from {', '.join(SUITES)}")
    return RunConfig(**raw)


def emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _header(cfg: RunConfig, params: Optional[H.HeckeParams]) -> dict:
    head = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "n": cfg.n, "l": cfg.l}
    if params is not None:
        head.update({"e": params.e, "p": params.p, "q": params.q,
                     "kappa_hat": list(params.hat_kappa),
                     "kappa": list(params.kappa)})
    return head


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_dims(cfg: RunConfig) -> dict:
    """Dimension table: the cyclotomic algebra (l^n n!), the quotient
    (sum of squared standard-tableau counts) and the per-shape counts."""
    params = cfg.params() if cfg.n > 0 else None
    shapes = comb.one_column_shapes(cfg.n, cfg.l)
    counts = {lam: len(comb.std_tableaux(lam)) for lam in shapes}
    report = _header(cfg, params)
    report.update({
        "dim_H": cfg.l ** cfg.n * math.factorial(cfg.n),
        "dim_B": sum(c * c for c in counts.values()),
        "num_shapes": len(shapes),
        "shapes": [{"shape": str(lam), "std_tableaux": counts[lam]}
                   for lam in shapes],
    })
    return report


def _suite_hecke(params: H.HeckeParams, oracle: bool) -> list[str]:
    fails = H.RegularRep(params).relation_failures()
    sm = H.SeminormalModel(params)
    fails += sm.relation_failures()
    if oracle:
        for lam in sm.blocks:
            for S in sm.blocks[lam].std:
                if not sm.murphy_is_matrix_unit(S):
                    fails.append(f"Murphy element at {S} is not a "
                                 "seminormal matrix unit")
    return fails


def _suite_klr(params: H.HeckeParams, oracle: bool) -> list[str]:
    A = B.build_blob(params)
    images = B.KLRImages(A)
    fails = [str(f) for f in images.relation_failures()]
    if oracle:
        fails += images.eigenprojection_failures()
    return fails


def _suite_cellular(params: H.HeckeParams, theta, oracle: bool) -> list[str]:
    A = B.build_blob(params)
    images = B.klr_images(A)
    try:
        basis = B.build_cellular_basis(A, images, theta)
    except Exception as ex:          # construction is self-certifying
        return [f"cellular basis construction failed: {ex}"]
    fails = list(B.check_cellularity(A, basis))
    try:
        modules = B.cell_modules(A, basis)
    except ValueError as ex:
        return fails + [str(ex)]
    if sum(m.dim ** 2 for m in modules) != A.dim:
        fails.append("cell-module dimensions do not add up")
    return fails


def _suite_jm(params: H.HeckeParams, theta) -> list[str]:
    A = B.build_blob(params)
    images = B.klr_images(A)
    basis = B.build_cellular_basis(A, images, theta)
    jm = B.jm_images(A, images)
    return list(B.check_jm(A, basis, jm))


def _suite_rewrite(params: H.HeckeParams, oracle: bool) -> list[str]:
    mc = params.mc
    n, l = params.n, params.l
    fails = []
    images = None
    if oracle:
        A = B.build_blob(params)
        images = B.klr_images(A)
    mumax = comb.mu_max(n, l)
    theta = comb.theta_zero(l)
    for shape in comb.one_column_shapes(n, l):
        ilam = comb.i_lambda(shape, mc)
        for k in range(1, n + 1):
            try:
                res = K.straighten_dot(k, shape, mc)
            except K.NotProvablyZero as ex:
                fails.append(f"straighten_dot({k}, {shape}): {ex}")
                continue
            if shape == mumax and not res.zero:
                fails.append(f"y_{k} e(i^max) did not straighten to zero")
            if images is not None:
                lhs = images.Y[k] @ images.E[ilam] % params.p
                rhs = K.evaluate_sum([w for w, _ in res.terms], images)
                if not (lhs == rhs).all():
                    fails.append(f"straighten_dot({k}, {shape}) is not "
                                 "oracle-invariant")
            for _, mus in res.terms:
                for mu in mus:
                    if not comb.strictly_dominates(mu, shape, theta):
                        fails.append(f"straighten_dot({k}, {shape}): "
                                     f"terminal shape {mu} does not "
                                     "strictly dominate")
    return fails


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    """Run the selected invariant suites; exit code 1 on any failure."""
    params = cfg.params()
    theta = cfg.weighting()
    wanted = SUITES[:-1] if cfg.suite == "all" else (cfg.suite,)
    report = _header(cfg, params)
    report["suites"] = {}
    code = 0
    for name in wanted:
        if name == "hecke":
            fails = _suite_hecke(params, cfg.oracle)
        elif name == "klr":
            fails = _suite_klr(params, cfg.oracle)
        elif name == "cellular":
            fails = _suite_cellular(params, theta, cfg.oracle)
        elif name == "jm":
            fails = _suite_jm(params, theta)
        else:
            fails = _suite_rewrite(params, cfg.oracle)
        report["suites"][name] = {"passed": not fails,
                                  "failures": fails}
        if fails:
            code = 1
    report["passed"] = code == 0
    return report, code


def cmd_basis(cfg: RunConfig) -> dict:
    """Dump the graded cellular basis: one coefficient vector per pair of
    standard tableaux; with --out ending in .csv the basis matrix is also
    written column by column."""
    params = cfg.params()
    A = B.build_blob(params)
    images = B.klr_images(A)
    basis = B.build_cellular_basis(A, images, cfg.weighting())
    report = _header(cfg, params)
    report["dim"] = A.dim
    report["vectors"] = [
        {"shape": str(lam), "S": str(S), "T": str(T),
         "degree": basis.degree(S, T),
         "vector": [int(x) for x in basis.matrix[:, idx]]}
        for idx, (lam, S, T) in enumerate(basis.index)]
    if cfg.out and cfg.out.endswith(".csv"):
        xf.dump_matrix_csv(cfg.out, basis.matrix)
    return report


def cmd_cell(cfg: RunConfig) -> dict:
    """Cell-module table: dimension, Gram rank and radical per shape."""
    params = cfg.params()
    A = B.build_blob(params)
    images = B.klr_images(A)
    basis = B.build_cellular_basis(A, images, cfg.weighting())
    modules = B.cell_modules(A, basis)
    report = _header(cfg, params)
    report["modules"] = [
        {"shape": str(m.shape), "dim": m.dim, "gram_rank": m.gram_rank,
         "radical_dim": m.radical_dim} for m in modules]
    report["dim_check"] = sum(m.dim ** 2 for m in modules) == A.dim
    return report


def cmd_trace(cfg: RunConfig, k: int) -> dict:
    """Straightening trace of y_k e(i^max) at the balanced maximal shape.
    Large scales run symbolically; with the oracle on (and a small scale)
    the exact expansion is certified against the matrix representation."""
    params = cfg.params()
    mc = params.mc
    shape = comb.mu_max(cfg.n, cfg.l)
    symbolic = not cfg.oracle or cfg.n > 4
    res = K.straighten_dot(k, shape, mc, symbolic=symbolic)
    if not symbolic:
        A = B.build_blob(params)
        images = B.klr_images(A)
        lhs = images.Y[k] @ images.E[comb.i_lambda(shape, mc)] % params.p
        rhs = K.evaluate_sum([w for w, _ in res.terms], images)
        if not (lhs == rhs).all():
            raise RuntimeError("trace is not oracle-invariant")
    report = _header(cfg, params)
    report.update({
        "k": k,
        "shape": str(shape),
        "mode": "symbolic" if symbolic else "exact",
        "zero": res.zero,
        "trace": json.loads(res.trace.to_json()),
    })
    return report


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blobcell",
        description="Exact construction and verification of generalized "
                    "blob algebras and their graded cellular bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--n", type=int, help="number of strings")
        sp.add_argument("--l", type=int, help="level (number of components)")
        sp.add_argument("--e", type=int, help="quantum characteristic")
        sp.add_argument("--p", type=int, help="coefficient prime")
        sp.add_argument("--q", type=int, help="root of unity mod p")
        sp.add_argument("--kappa-hat", dest="kappa_hat",
                        help="integral multicharge, e.g. '0,22,44,67'")
        sp.add_argument("--theta", help="weighting, e.g. '0,0'")
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--out", help="output path (JSON; .csv for matrices)")
        sp.add_argument("--oracle", choices=("on", "off"), default=None,
                        help="certify against the matrix representation")

    add_common(sub.add_parser("dims", help="dimension table"))
    spv = sub.add_parser("verify", help="run invariant suites")
    add_common(spv)
    spv.add_argument("--suite", choices=SUITES, default=None)
    add_common(sub.add_parser("basis", help="dump the cellular basis"))
    add_common(sub.add_parser("cell", help="cell-module table"))
    spt = sub.add_parser("trace", help="straightening trace at mu_max")
    add_common(spt)
    spt.add_argument("--k", type=int, default=5, help="dot index")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "dims":
            report, code = cmd_dims(cfg), 0
        elif args.command == "verify":
            report, code = cmd_verify(cfg)
        elif args.command == "basis":
            report, code = cmd_basis(cfg), 0
        elif args.command == "cell":
            report, code = cmd_cell(cfg), 0
        else:
            report, code = cmd_trace(cfg, args.k), 0
    except (ValueError, K.NotProvablyZero) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    # a .csv out path receives the matrix artifact; the report then
    # stays on stdout
    emit(report, None if (cfg.out or "").endswith(".csv") else cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
