"""Command-line interface.

Subcommands reproduce the dimension tables and run single computations:

    dim         dimension of a symbol group over Q or a finite field
    partial     dimension presented by a partial relation system
    order       order of a symbol combination in the integer quotient
    torsion     elementary divisors of a presentation
    hecke       Hecke operator: matrix export, quotient charpoly
    mu          comparison-map checks and cokernel divisors
    primitive   primitive-part dimension (common kernel of splittings)
    modsym      Manin symbol dimensions and cusp counts
    beta        fixed-locus class, optionally compared with another
    export-sms  write a relation matrix in SMS format

Every command writes a JSON report (config, result, primes, timings) to
stdout or --out; reruns with the same config and seed are byte-identical
apart from the timestamp fields.  The exit code is 0 only when all
internal certifications (prime agreement, membership checks) pass.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field

from .groups import AbelianGroup, enumerate_symbols
from .linalg import (PrimeSource, element_order, rank_Q, rank_mod_p, snf)
from .relations import build_relations, combination
from . import structure
from . import modsym as modsym_mod
from .birational import FixedLocusData, beta_class
from .hecke import hecke_matrix, induced_on_quotient
from .linalg import charpoly_mod_p, in_rowspan_Q
from .sms import write_sms


@dataclass
class JobConfig:
    """Validated, serializable description of one computation."""

    command: str
    group: tuple = ()
    n: int = 0
    flavor: str = "B"
    kset: tuple = ()
    field: str = "Q"
    nprimes: int = 3
    threads: int = 1
    seed: int = 0
    budget: int = 1500
    out: str = ""
    extra: dict = dc_field(default_factory=dict)

    def validate(self):
        if self.command != "modsym" and (not self.group
                                         or any(m < 1 for m in self.group)):
            raise ValueError("invalid group moduli")
        if self.n < 0:
            raise ValueError("n must be >= 1")
        if self.flavor not in ("B", "M", "Mstar", "Mminus"):
            raise ValueError(f"unknown flavor {self.flavor}")
        return self


def _parse_group(text):
    return tuple(int(x) for x in text.split(","))


def _field_primes(cfg, order):
    """Primes realizing the requested field: [p] for F_p, several for Q."""
    if cfg.field == "Q":
        return PrimeSource(seed=cfg.seed, avoid=order).take(max(cfg.nprimes,
                                                                2))
    if cfg.field.upper().startswith("F"):
        p = int(cfg.field[1:])
        return [p]
    raise ValueError(f"unknown field {cfg.field}")


def _report(cfg, result, *, ok=True, seconds=None, primes=None):
    payload = {
        "command": cfg.command,
        "config": {k: v for k, v in asdict(cfg).items() if k != "extra"},
        "extra": cfg.extra,
        "result": result,
        "ok": bool(ok),
        "primes": primes or [],
        "seconds": round(seconds or 0.0, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


def _dim_result(cfg, kset=None):
    G = AbelianGroup(cfg.group)
    t0 = time.perf_counter()
    keep = cfg.flavor == "Mminus" and cfg.field.upper() == "F2"
    system = build_relations(G, cfg.n, cfg.flavor, kset,
                             keep_self_negating=keep)
    primes = _field_primes(cfg, G.order)
    if cfg.field == "Q":
        rep = rank_Q(system.matrix, primes, threads=cfg.threads)
        rank, agree = rep.q_rank, rep.agree
        per_prime = {str(p): r for p, r in rep.ranks.items()}
    else:
        rank = rank_mod_p(system.matrix, primes[0])
        agree = True
        per_prime = {str(primes[0]): rank}
    dt = time.perf_counter() - t0
    result = {
        "symbols": len(system.index),
        "rank": rank,
        "dim": len(system.index) - rank,
        "per_prime": per_prime,
        "rows": system.matrix.nrows,
    }
    return result, agree, dt, primes


def cmd_dim(cfg):
    result, agree, dt, primes = _dim_result(cfg)
    return _report(cfg, result, ok=agree, seconds=dt, primes=primes)


def cmd_partial(cfg):
    kset = cfg.kset or None
    if not kset:
        raise ValueError("partial needs --kset")
    result, agree, dt, primes = _dim_result(cfg, kset=kset)
    return _report(cfg, result, ok=agree, seconds=dt, primes=primes)


def cmd_order(cfg):
    G = AbelianGroup(cfg.group)
    entries = tuple(int(x) for x in cfg.extra["element"].split(","))
    t0 = time.perf_counter()
    system = build_relations(G, cfg.n, cfg.flavor)
    vec = combination(system.index, [(entries, 1)])
    order = element_order(system.matrix, vec)
    dt = time.perf_counter() - t0
    result = {"element": list(entries),
              "order": "infinity" if order == math.inf else int(order)}
    return _report(cfg, result, seconds=dt)


def cmd_torsion(cfg):
    G = AbelianGroup(cfg.group)
    t0 = time.perf_counter()
    system = build_relations(G, cfg.n, cfg.flavor)
    divisors = snf(system.matrix, dense_budget=cfg.budget)
    dt = time.perf_counter() - t0
    nontrivial = [d for d in divisors if d != 1]
    result = {"rank_Z": len(divisors),
              "free_rank": len(system.index) - len(divisors),
              "nontrivial_divisors": nontrivial}
    return _report(cfg, result, seconds=dt)


def cmd_hecke(cfg):
    G = AbelianGroup(cfg.group)
    ell = int(cfg.extra["ell"])
    r = int(cfg.extra.get("r", 1))
    t0 = time.perf_counter()
    flavor = cfg.flavor if cfg.flavor != "B" else "M"
    system = build_relations(G, cfg.n, flavor)
    H = hecke_matrix(G, cfg.n, ell, r, flavor, index=system.index)
    result = {"ell": ell, "r": r, "flavor": flavor,
              "dim": len(H.index), "nnz": H.matrix.nnz}
    ok = True
    p = None
    if cfg.extra.get("charpoly_mod"):
        p = int(cfg.extra["charpoly_mod"])
        T = induced_on_quotient(H, system, p)
        result["quotient_dim"] = int(T.shape[0])
        result["charpoly"] = charpoly_mod_p(T, p)
        result["charpoly_mod"] = p
    if cfg.extra.get("export"):
        write_sms(H.matrix, cfg.extra["export"])
        result["export"] = cfg.extra["export"]
    dt = time.perf_counter() - t0
    return _report(cfg, result, ok=ok, seconds=dt,
                   primes=[p] if p else [])


def cmd_mu(cfg):
    G = AbelianGroup(cfg.group)
    t0 = time.perf_counter()
    report = structure.verify_mu(G, cfg.n, seed=cfg.seed)
    try:
        coker = structure.mu_cokernel(G, cfg.n, dense_budget=cfg.budget)
        coker_out = [int(d) for d in coker]
    except Exception as exc:   # budget overruns reported, not fatal
        coker_out = f"skipped: {exc}"
    dt = time.perf_counter() - t0
    result = {"relations_in_z_span": report.relations_in_z_span,
              "surjective_odd_p": report.surjective_odd_p,
              "dim_B": report.dim_B, "dim_M": report.dim_M,
              "cokernel_divisors": coker_out}
    return _report(cfg, result, seconds=dt, primes=report.primes)


def cmd_primitive(cfg):
    G = AbelianGroup(cfg.group)
    variant = "Mminus" if cfg.flavor in ("Mminus", "B") else cfg.flavor
    t0 = time.perf_counter()
    dim, per_prime = structure.primitive_dim(G, cfg.n, variant,
                                             nprimes=max(cfg.nprimes, 2),
                                             seed=cfg.seed)
    dt = time.perf_counter() - t0
    agree = len(set(per_prime.values())) == 1
    primes = sorted(per_prime)
    csv = f"{G.order},{cfg.n},{variant},{dim},{'|'.join(map(str, primes))}"
    result = {"variant": variant, "dim": dim,
              "per_prime": {str(p): d for p, d in per_prime.items()},
              "csv": csv}
    return _report(cfg, result, ok=agree, seconds=dt, primes=primes)


def cmd_modsym(cfg):
    N = int(cfg.extra["N"])
    t0 = time.perf_counter()
    rep = modsym_mod.modsym_dims(N, seed=cfg.seed)
    result = {"N": N, "dim": rep.dim, "dim_minus": rep.dim_minus,
              "C": rep.C, "C2": rep.C2, "genus": rep.genus,
              "csv": rep.csv_row()}
    ok = True
    if cfg.extra.get("compare"):
        cmp_rep = modsym_mod.compare_with_symbol_group(N, seed=cfg.seed)
        result["symbol_minus_dim"] = cmp_rep.dim_symbol_minus
        ok = cmp_rep.ok
    dt = time.perf_counter() - t0
    return _report(cfg, result, ok=ok, seconds=dt)


def cmd_beta(cfg):
    G = AbelianGroup(cfg.group)
    t0 = time.perf_counter()
    system = build_relations(G, cfg.n, "B")
    with open(cfg.extra["file"]) as fh:
        data = FixedLocusData.from_text(G, cfg.n, fh.read())
    vec = beta_class(data, system.index)
    result = {"components": len(data.components),
              "class": {str(system.index.symbols[k].entries): v
                        for k, v in sorted(vec.coeffs.items())}}
    ok = True
    if cfg.extra.get("compare"):
        with open(cfg.extra["compare"]) as fh:
            other = FixedLocusData.from_text(G, cfg.n, fh.read())
        diff = vec - beta_class(other, system.index)
        same = (not diff.coeffs) or in_rowspan_Q(
            system.matrix, diff.coeffs, seed=cfg.seed)
        result["classes_equal"] = bool(same)
        ok = bool(same)
    dt = time.perf_counter() - t0
    return _report(cfg, result, ok=ok, seconds=dt)


def cmd_export_sms(cfg):
    G = AbelianGroup(cfg.group)
    t0 = time.perf_counter()
    kset = cfg.kset or None
    path = cfg.extra["path"]
    system = build_relations(G, cfg.n, cfg.flavor, kset,
                             spill_path=path if cfg.extra.get("spill")
                             else None,
                             spill_threshold=cfg.budget
                             if cfg.extra.get("spill") else None)
    if system.matrix is not None:
        write_sms(system.matrix, path)
        nrows = system.matrix.nrows
    else:
        nrows = None
    dt = time.perf_counter() - t0
    result = {"path": path, "symbols": len(system.index), "rows": nrows}
    return _report(cfg, result, seconds=dt)


_COMMANDS = {
    "dim": cmd_dim,
    "partial": cmd_partial,
    "order": cmd_order,
    "torsion": cmd_torsion,
    "hecke": cmd_hecke,
    "mu": cmd_mu,
    "primitive": cmd_primitive,
    "modsym": cmd_modsym,
    "beta": cmd_beta,
    "export-sms": cmd_export_sms,
}


def _add_common(sp, group=True, n=True, flavor=True):
    if group:
        sp.add_argument("--group", required=True,
                        help="cyclic order N or comma-separated moduli")
    if n:
        sp.add_argument("--n", type=int, required=True)
    if flavor:
        sp.add_argument("--flavor", default="B",
                        choices=("B", "M", "Mstar", "Mminus"))
    sp.add_argument("--kset", default="",
                    help="comma-separated relation sizes, e.g. 2,3")
    sp.add_argument("--nprimes", type=int, default=3)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1500,
                    help="dense-block / spill budget")
    sp.add_argument("--out", default="", help="write the JSON report here")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="birsym",
        description="exact calculator for symbol groups of finite abelian "
                    "group actions")
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("dim", "partial"):
        sp = sub.add_parser(name)
        _add_common(sp)
        sp.add_argument("--field", default="Q",
                        help="Q, F2, or Fp for a prime p")

    sp = sub.add_parser("order")
    _add_common(sp)
    sp.add_argument("--element", required=True,
                    help="comma-separated entries, e.g. 0,0,1")

    sp = sub.add_parser("torsion")
    _add_common(sp)

    sp = sub.add_parser("hecke")
    _add_common(sp)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--charpoly-mod", type=int, default=0)
    sp.add_argument("--export", default="")

    sp = sub.add_parser("mu")
    _add_common(sp, flavor=False)

    sp = sub.add_parser("primitive")
    _add_common(sp)

    sp = sub.add_parser("modsym")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--compare", action="store_true",
                    help="also match the antisymmetric symbol space")
    sp.add_argument("--nprimes", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="")

    sp = sub.add_parser("beta")
    _add_common(sp, flavor=False)
    sp.add_argument("--file", required=True,
                    help="fixed-locus description, one component per line")
    sp.add_argument("--compare", default="",
                    help="second description to compare classes with")

    sp = sub.add_parser("export-sms")
    _add_common(sp)
    sp.add_argument("--path", required=True)
    sp.add_argument("--spill", action="store_true",
                    help="stream rows to disk during the build")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    extra = {}
    for key in ("element", "ell", "r", "charpoly_mod", "export", "N",
                "compare", "file", "path", "spill"):
        if hasattr(args, key) and getattr(args, key):
            extra[key] = getattr(args, key)
    cfg = JobConfig(
        command=args.command,
        group=_parse_group(args.group) if getattr(args, "group", "") else (),
        n=getattr(args, "n", 0),
        flavor=getattr(args, "flavor", "B"),
        kset=tuple(int(k) for k in args.kset.split(","))
        if getattr(args, "kset", "") else (),
        field=getattr(args, "field", "Q"),
        nprimes=args.nprimes,
        threads=getattr(args, "threads", 1),
        seed=args.seed,
        budget=getattr(args, "budget", 1500),
        out=args.out,
        extra=extra,
    ).validate()
    try:
        return _COMMANDS[args.command](cfg)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
