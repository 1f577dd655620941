"""Command-line entry point: class tables, representation numbers, zeta tables,
identity verification, maximality scans and Brandt matrices.

Exit codes: 0 when every check passes, 1 when some check fails, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .hecke_classfns import (
    brandt_property_checks,
    hk_brandt,
    hk_verify_sub_main,
    is_prime,
    sigma,
)
from .hermitian_forms import (
    hf_all_reps,
    hf_enumerate_classes,
    hf_in_support,
    hf_primitive_reps,
    hf_r_class,
    phi_bijectivity,
    r_class_counts,
    r_total,
    unit_order,
)
from .orthogonal_side import (
    gram_data,
    n_counts_direct,
    os_check_maximal,
    os_f_omega,
    os_in_support,
    stabiliser_conditions,
)
from .quad_field import EXPERIMENTAL_M, SUPPORTED_M, FieldParams, UnsupportedField, is_squarefree
from .quaternion_orders import (
    default_bad_primes,
    ideal_class_counts,
    lat_conj,
    lattice_nrd,
    qa_class_type_data,
    qa_ideals_of_norm,
    qa_is_invertible,
    qa_latimer_ideal,
    qa_latimer_norm,
    qa_module_index,
)
from .report import CheckRecord, Report
from .zeta_series import (
    coprime_to,
    dedekind_zeta,
    smallest_bad_sets,
    zs_verify_hat_identities,
    zs_zeta_hat,
    zs_zeta_xi,
)

log = logging.getLogger("hermquat")

CHECKS = ("r-eq-n", "phi-bijective", "partial-zeta", "zeta-hat", "latimer", "norms", "brandt", "sub-main", "maximality")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: int
    ell: int
    n_max: int
    bad_primes: tuple[int, ...]
    checks: tuple[str, ...]
    experimental: bool

    @property
    def fp(self) -> FieldParams:
        return FieldParams(self.m, experimental_ok=self.experimental)

    def echo(self) -> dict:
        return {
            "command": self.command,
            "m": self.m,
            "ell": self.ell,
            "nmax": self.n_max,
            "bad_primes": list(self.bad_primes),
            **({"checks": list(self.checks)} if self.command == "verify" else {}),
            "experimental": self.experimental,
            "version": __version__,
        }


def _parse_int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from exc


def build_config(args) -> RunConfig:
    m, ell = args.m, args.ell
    if m is None or ell is None:
        raise UsageError("--m and --ell are required")
    if not is_squarefree(m) or (m not in SUPPORTED_M and not (args.experimental and m in EXPERIMENTAL_M)):
        raise UsageError(f"m={m} is not a supported square-free value {SUPPORTED_M}")
    if ell < 1:
        raise UsageError("ell must be at least 1")
    if args.nmax < 1:
        raise UsageError("--nmax must be positive")
    if not stabiliser_conditions(m, ell):
        msg = f"(m, ell) = ({m}, {ell}) lies outside the conditions that guarantee a maximal stabiliser lattice"
        if not is_squarefree(ell):
            msg += "; ell is not square-free"
        elif m % 4 == 1 and ell % 4 != 1:
            msg += "; ell is not 1 mod 4"
        if not args.experimental:
            raise UsageError(msg + " (rerun with --experimental to proceed)")
        log.warning(msg)
    experimental = bool(args.experimental or m == 2 or m in EXPERIMENTAL_M or not stabiliser_conditions(m, ell))
    bad = _parse_int_list(getattr(args, "bad_primes", None))
    if bad is None:
        bad = sorted(default_bad_primes(m, ell))
    checks = _parse_checks(getattr(args, "checks", None))
    return RunConfig(args.command, m, ell, args.nmax, tuple(sorted(set(bad))), checks, experimental)


def _parse_checks(text: str | None) -> tuple[str, ...]:
    if text is None or text == "all":
        return CHECKS
    chosen = tuple(t.strip() for t in text.split(",") if t.strip())
    unknown = [c for c in chosen if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)} or all")
    return chosen


def good_range(cfg: RunConfig):
    return [d for d in range(1, cfg.n_max + 1) if coprime_to(d, cfg.bad_primes)]


def _type_data(cfg: RunConfig):
    return qa_class_type_data(cfg.ell, cfg.fp, frozenset(cfg.bad_primes))


def cmd_classes(cfg: RunConfig) -> Report:
    rep = Report(cfg.echo())
    classes = hf_enumerate_classes(cfg.ell, cfg.fp)
    data = _type_data(cfg)
    support_pos = {i: k for k, i in enumerate(classes.support)}
    rep.data = {
        "classes": len(classes),
        "h1": data.h1,
        "h2": data.h2,
        "representatives": [
            {
                **f.as_json(),
                "e": classes.unit_orders[i],
                "support": hf_in_support(f),
                **({"type": data.type_of[support_pos[i]], "left_order_units": data.unit_counts[support_pos[i]]}
                   if i in support_pos else {}),
            }
            for i, f in enumerate(classes.reps)
        ],
        "type_fibres": [[k for k in range(data.h1) if data.type_of[k] == t] for t in range(data.h2)],
    }
    g = gram_data(cfg.fp)
    for i, f in enumerate(classes.reps):
        a = hf_in_support(f)
        b = os_in_support(os_f_omega(f, cfg.fp).coords, cfg.ell, g)
        rep.add(CheckRecord("support-transport", {"m": cfg.m, "ell": cfg.ell, "class": i}, a, b, a == b))
    return rep


def cmd_repnums(cfg: RunConfig) -> Report:
    rep = Report(cfg.echo())
    classes = hf_enumerate_classes(cfg.ell, cfg.fp)
    table = []
    for i, f in enumerate(classes.reps):
        e = unit_order(f)
        for d in good_range(cfg):
            p, _ = hf_primitive_reps(f, d)
            r = hf_r_class(f, d, classes)
            table.append({"class": i, "d": d, "p": p, "q": hf_all_reps(f, d), "e": e, "r": r})
            rep.add(CheckRecord("p-equals-e-r", {"m": cfg.m, "ell": cfg.ell, "class": i, "d": d}, p, e * r, p == e * r))
    rep.data = {"table": table}
    return rep


def cmd_zeta(cfg: RunConfig) -> Report:
    rep = Report(cfg.echo())
    classes = hf_enumerate_classes(cfg.ell, cfg.fp)
    P = cfg.bad_primes
    zk = dedekind_zeta(cfg.fp, cfg.n_max)
    series = {"zeta_K": list(zk.coeffs)}
    for k, i in enumerate(classes.support):
        series[f"zeta_xi[{k}]"] = list(zs_zeta_xi(i, classes, P, cfg.n_max).coeffs)
        series[f"zeta_hat[{k}]"] = list(zs_zeta_hat(i, classes, P, cfg.n_max).coeffs)
    rep.data = {"series": series}
    rep.extend(zs_verify_hat_identities(_type_data(cfg), cfg.n_max, with_ideals=False))
    return rep


def verify_records(cfg: RunConfig, check: str) -> list[CheckRecord]:
    fp, ell = cfg.fp, cfg.ell
    classes = hf_enumerate_classes(ell, fp)
    base = {"m": cfg.m, "ell": ell}
    out = []
    if check == "r-eq-n":
        g = gram_data(fp)
        for d in range(1, cfg.n_max + 1):
            direct = n_counts_direct(d, classes, g)
            fast = r_class_counts(d, classes)
            for k, i in enumerate(classes.support):
                out.append(CheckRecord("r-eq-n", {**base, "class": k, "d": d}, direct[i], fast[i], direct[i] == fast[i]))
    elif check == "phi-bijective":
        for d in good_range(cfg):
            res = phi_bijectivity(classes, d)
            out.append(CheckRecord("phi-bijective", {**base, "d": d}, res["images"],
                                   sum(classes.unit_orders[i] * c for i, c in enumerate(r_class_counts(d, classes))),
                                   res["ok"]))
    elif check == "partial-zeta":
        for d in good_range(cfg):
            tot = sum(Fraction(hf_primitive_reps(f, d)[0], unit_order(f)) for f in classes.reps)
            r = r_total(d, ell, fp)
            out.append(CheckRecord("sum-p-over-e", {**base, "d": d}, tot, r, tot == r))
        data = _type_data(cfg)
        hats = [zs_zeta_hat(i, classes, cfg.bad_primes, cfg.n_max) for i in classes.support]
        for d in good_range(cfg):
            counts = ideal_class_counts(d, data)
            for t in range(data.h2):
                fib = [k for k in range(data.h1) if data.type_of[k] == t]
                lhs = sum(hats[k][d] for k in fib)
                rhs = sum(counts[k] for k in fib)
                out.append(CheckRecord("type-aggregation", {**base, "type": t, "d": d}, lhs, rhs, lhs == rhs))
            out.append(CheckRecord("type-partition", {**base, "d": d}, sum(counts), sigma(d), sum(counts) == sigma(d)))
    elif check == "zeta-hat":
        out.extend(zs_verify_hat_identities(_type_data(cfg), cfg.n_max))
    elif check == "latimer":
        data = _type_data(cfg)
        for k, f in enumerate(data.forms):
            L = qa_latimer_ideal(f)
            par = {**base, "class": k}
            out.append(CheckRecord("latimer-invertible", par, qa_is_invertible(L).invertible, True, qa_is_invertible(L).invertible))
            N = qa_latimer_norm(L)
            out.append(CheckRecord("latimer-norm", par, N, f.a, N == f.a))
            idx = qa_module_index(L)
            out.append(CheckRecord("norm-squared-index", par, N * N, idx, N * N == idx))
            out.append(CheckRecord("conjugate-nrd", par, lattice_nrd(lat_conj(L)), lattice_nrd(L), lattice_nrd(lat_conj(L)) == lattice_nrd(L)))
        out.append(CheckRecord("classes-distinct", base, data.h1, len(classes.support), data.h1 == len(classes.support)))
    elif check == "norms":
        data = _type_data(cfg)
        for d in good_range(cfg):
            recs = qa_ideals_of_norm(d, data)
            ok = all(qa_latimer_norm(r.ideal, side="right") ** 2 == qa_module_index(r.ideal) for r in recs) if d <= 30 else True
            out.append(CheckRecord("ideals-of-norm", {**base, "d": d}, len(recs), sigma(d), len(recs) == sigma(d) and ok))
    elif check == "brandt":
        data = _type_data(cfg)
        primes = [p for p in range(2, cfg.n_max + 1) if is_prime(p) and coprime_to(p, cfg.bad_primes)]
        if primes:
            out.extend(brandt_property_checks(data, primes, cfg.n_max))
    elif check == "sub-main":
        data = _type_data(cfg)
        out.extend(hk_verify_sub_main(data, cfg.n_max))
    elif check == "maximality":
        v = os_check_maximal(ell, gram_data(fp))
        out.append(CheckRecord("maximality", base, v.maximal, v.conditions_hold or v.maximal, v.consistent))
    return out


def cmd_verify(cfg: RunConfig) -> Report:
    rep = Report(cfg.echo())
    for check in cfg.checks:
        rep.extend(verify_records(cfg, check))
    if "zeta-hat" in cfg.checks:
        rep.data["smallest_removed_primes"] = {
            str(k): (list(v) if v is not None else None) for k, v in smallest_bad_sets(_type_data(cfg), cfg.n_max).items()
        }
    return rep


def cmd_brandt(cfg: RunConfig) -> Report:
    rep = Report(cfg.echo())
    data = _type_data(cfg)
    primes = [p for p in range(2, cfg.n_max + 1) if is_prime(p) and coprime_to(p, cfg.bad_primes)]
    rep.data = {
        "h1": data.h1,
        "h2": data.h2,
        "unit_counts": list(data.unit_counts),
        "matrices": {str(p): hk_brandt(p, data, cfg.n_max) for p in primes},
    }
    if primes:
        rep.extend(brandt_property_checks(data, primes, cfg.n_max))
    return rep


def cmd_scan_maximality(m_list: list[int], ell_max: int, experimental: bool) -> Report:
    rep = Report({"command": "scan-maximality", "m": list(m_list), "ell_max": ell_max, "version": __version__})
    rows = []
    for m in sorted(m_list):
        fp = FieldParams(m, experimental_ok=experimental)
        g = gram_data(fp)
        for ell in range(1, ell_max + 1):
            v = os_check_maximal(ell, g)
            row = {
                "m": m,
                "ell": ell,
                "conditions": v.conditions_hold,
                "maximal": v.maximal,
                "squarefree_shortcut": v.squarefree_shortcut,
                "witness": list(v.witness) if v.witness else None,
            }
            rows.append(row)
            if v.conditions_hold:
                rep.add(CheckRecord("maximal-under-conditions", {"m": m, "ell": ell}, v.maximal, True, v.maximal))
    rep.data = {"grid": rows}
    return rep


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermquat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_checks=False):
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--ell", type=int, required=True)
        sp.add_argument("--nmax", type=int, default=100)
        sp.add_argument("--bad-primes", dest="bad_primes", default=None, help="comma list; default: primes dividing 2*ell*m")
        if with_checks:
            sp.add_argument("--checks", default="all", help="comma list from " + ", ".join(CHECKS) + ", or all")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--experimental", action="store_true")
        sp.add_argument("--out", default=None)

    common(sub.add_parser("classes", help="class representatives, unit orders, types"))
    common(sub.add_parser("repnums", help="representation numbers p, q, r and e per class"))
    common(sub.add_parser("zeta", help="coefficient tables of the partial zeta functions"))
    common(sub.add_parser("verify", help="run identity checks"), with_checks=True)
    common(sub.add_parser("brandt", help="Brandt matrices at good primes"))
    sp = sub.add_parser("scan-maximality", help="maximality of the stabiliser lattice over a grid")
    sp.add_argument("--m", default="1,2,3,7,11", help="comma list of m values (may be empty)")
    sp.add_argument("--ell-max", dest="ell_max", type=int, default=20)
    sp.add_argument("--nmax", type=int, default=100)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--experimental", action="store_true")
    sp.add_argument("--out", default=None)
    return p


COMMANDS = {
    "classes": cmd_classes,
    "repnums": cmd_repnums,
    "zeta": cmd_zeta,
    "verify": cmd_verify,
    "brandt": cmd_brandt,
}


def _render(rep: Report, fmt: str, kind: str) -> str:
    if fmt == "json":
        return rep.to_json()
    if kind == "scan-maximality":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "ell", "satisfies_conditions", "checker_verdict", "agreement"])
        for row in rep.data["grid"]:
            agree = "" if not row["conditions"] else str(row["maximal"]).lower()
            w.writerow([row["m"], row["ell"], str(row["conditions"]).lower(), str(row["maximal"]).lower(), agree])
        return buf.getvalue()
    return rep.to_csv()


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "scan-maximality":
            ms = _parse_int_list(args.m) or []
            for m in ms:
                if not is_squarefree(m) or (m not in SUPPORTED_M and not (args.experimental and m in EXPERIMENTAL_M)):
                    raise UsageError(f"m={m} is not supported")
            if args.ell_max < 0:
                raise UsageError("--ell-max must be non-negative")
            rep = cmd_scan_maximality(ms, args.ell_max, args.experimental)
        else:
            cfg = build_config(args)
            rep = COMMANDS[args.command](cfg)
    except (UsageError, UnsupportedField) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(rep, args.format, args.command)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if rep.n_fail else 0


if __name__ == "__main__":
    sys.exit(main())
