"""Batch command-line driver.

Subcommands: folner, szego, trace, tensor, demo-shift, validate.
Exit codes: 0 success, 1 numerical failure, 2 configuration error,
3 spec validation error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from ._util import VERSION, report_csv
from .diagnostics import folner_profile, folner_ratio, qd_gap
from .operators import (
    Kron,
    LatticeMismatchError,
    N0,
    Shift,
    Toeplitz,
    Z,
    compress,
)
from .projections import RankZeroError, finite_section, finite_section_sequence
from .spectral import (
    NonHermitianError,
    ResidualError,
    eigenvalues_hermitian,
    reference_pushforward,
)
from .specio import SpecValidationError, load_spec_file
from .szego import MissingReferenceError, NotSelfAdjointError, monomial, szego_pair_test
from .szego import hat_family, moments_reference
from .tensor import DimensionCapError, tensor_bound_check
from .traces import canonical_trace, represent_nc, trace_convergence_report


class ConfigError(ValueError):
    """Bad command-line configuration."""


def parse_n_list(text: str):
    """Explicit '1,3,7' or dyadic rule 'dyadic:LO:HI' meaning 2^LO .. 2^HI."""
    text = text.strip()
    try:
        if text.startswith("dyadic:"):
            _, lo, hi = text.split(":")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            ns = [2**k for k in range(lo, hi + 1)]
        else:
            ns = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse n list {text!r}") from exc
    if not ns or any(n <= 0 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError("n list must be strictly increasing and positive")
    return ns


def parse_f_family(text: str):
    """'poly:K' and/or 'hat:COUNT:LO:HI', comma separated."""
    fam = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        fields = part.split(":")
        try:
            if fields[0] == "poly":
                (degree,) = map(int, fields[1:])
                fam.extend(monomial(k) for k in range(degree + 1))
            elif fields[0] == "hat":
                count, lo, hi = int(fields[1]), float(fields[2]), float(fields[3])
                fam.extend(hat_family(lo, hi, count))
            else:
                raise ValueError
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"cannot parse f family item {part!r}") from exc
    if not fam:
        raise ConfigError("empty f family")
    return fam


def _emit(text: str, out: str):
    if out in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_operators(paths, phi: float = 0.0):
    """Returns list of (label, spec) plus the raw ncpoly payloads by label."""
    loaded, ncpolys = [], {}
    for path in paths:
        kind, value = load_spec_file(path)
        label = Path(path).stem
        if kind == "ncpoly":
            ncpolys[label] = value
            loaded.append((label, represent_nc(value, phi=phi)))
        elif kind == "operator":
            loaded.append((label, value))
        else:
            raise SpecValidationError(f"{path}: expected an operator spec, got a {kind}")
    return loaded, ncpolys


def _sequence_for(ops, n_list):
    lattices = {op.lattice for _, op in ops}
    if len(lattices) != 1:
        raise SpecValidationError("all operators in one run must share a lattice")
    lat = lattices.pop()
    if not isinstance(lat, str):
        raise SpecValidationError("tensor-product operators are driven via the tensor subcommand")
    return finite_section_sequence(lat, n_list)


# -- subcommands ------------------------------------------------------------


def cmd_folner(args) -> int:
    ops, _ = _load_operators(args.op)
    seq = _sequence_for(ops, parse_n_list(args.n))
    p_list = tuple(int(p) for p in args.p.split(","))
    if any(p not in (1, 2) for p in p_list):
        raise ConfigError("--p entries must be 1 or 2")
    report = folner_profile(ops, seq, p_list=p_list)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return 0


def cmd_szego(args) -> int:
    ops, ncpolys = _load_operators(args.op, phi=args.phi)
    seq = _sequence_for(ops, parse_n_list(args.n))
    fam = parse_f_family(args.f) if args.f else None

    refs, trace_refs = {}, {}
    for label, op in ops:
        if label in ncpolys:
            refs[label] = moments_reference(ncpolys[label], order=args.moment_order)
            trace_refs[label] = canonical_trace(ncpolys[label])
        elif isinstance(op, Toeplitz):
            refs[label] = reference_pushforward(op, grid_size=args.nodes)
            trace_refs[label] = dict(op.coeffs).get(0, 0j)
        else:
            raise MissingReferenceError(
                f"no reference measure available for {label!r} "
                "(toeplitz and ncpoly specs only)"
            )

    # eigensolver contract check at the largest scale
    for label, op in ops:
        eigenvalues_hermitian(
            compress(op, seq.projections[-1]), herm_tol=args.herm_tol, check_residual=True
        )

    report = szego_pair_test(
        ops, seq, refs, f_family=fam, trace_refs=trace_refs, sa_tol=args.herm_tol
    )
    if args.plot_out:
        _emit(report.plot_csv(), args.plot_out)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return 0


def cmd_trace(args) -> int:
    ops, ncpolys = _load_operators(args.op, phi=args.phi)
    seq = _sequence_for(ops, parse_n_list(args.n))
    refs = {}
    for label, op in ops:
        if label in ncpolys:
            refs[label] = canonical_trace(ncpolys[label])
        elif isinstance(op, Toeplitz):
            refs[label] = dict(op.coeffs).get(0, 0j)
    report = trace_convergence_report(ops, seq, refs=refs)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return 0


def cmd_tensor(args) -> int:
    loaded, _ = _load_operators([args.op_a, args.op_b])
    (label_a, op_a), (label_b, op_b) = loaded
    if isinstance(op_a, Kron) or isinstance(op_b, Kron):
        raise SpecValidationError("tensor factors must not themselves be tensor products")
    rows = []
    for n in parse_n_list(args.n):
        p = finite_section(op_a.lattice, n)
        q = finite_section(op_b.lattice, n)
        rec = tensor_bound_check(op_a, p, op_b, q, dim_cap=args.dim_cap)
        rows.append(
            {
                "label": f"{label_a}(x){label_b}",
                "n": n,
                "d_n": p.rank * q.rank,
                "lhs": rec.lhs,
                "middle": rec.middle,
                "rhs": rec.rhs,
                "slack": rec.slack,
            }
        )
    if args.format == "csv":
        _emit(report_csv(rows, ("label", "n", "d_n", "lhs", "middle", "rhs", "slack")), args.out)
    else:
        _emit(json.dumps({"rows": rows}, indent=2, sort_keys=True), args.out)
    return 0


def cmd_demo_shift(args) -> int:
    """Print the unilateral-shift table: exact 1/sqrt(n+1) commutator decay."""
    shift = Shift()
    lines = [
        f"folner-lab {VERSION} -- unilateral shift S on l2(N0), windows {{0..n}}",
        f"{'n':>6} {'d_n':>6} {'ratio_p2':>22} {'1/sqrt(n+1)':>22} {'qd_gap':>8}",
    ]
    for n in parse_n_list(args.n):
        proj = finite_section(N0, n)
        r = folner_ratio(shift, proj, p=2)
        g = qd_gap(shift, proj)
        lines.append(
            f"{n:>6} {proj.rank:>6} {r:>22.16f} {1.0 / math.sqrt(n + 1):>22.16f} {g:>8.4f}"
        )
    lines.append("the Hilbert-Schmidt ratio vanishes while the operator-norm gap stays at 1")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    bad = []
    for path in args.files:
        try:
            load_spec_file(path)
        except SpecValidationError as exc:
            bad.append(str(exc))
    if bad:
        for msg in bad:
            print(msg, file=sys.stderr)
        return 3
    print(f"{len(args.files)} spec file(s) valid")
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="folner-lab",
        description="Finite-section diagnostics, Szego-type spectral tests, trace estimates.",
    )
    ap.add_argument("--version", action="version", version=f"folner-lab {VERSION}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="csv")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for any random inputs")

    p = sub.add_parser("folner", help="commutator-norm ratio grid")
    p.add_argument("--op", action="append", required=True, help="operator spec file (repeatable)")
    p.add_argument("--n", required=True, help="'1,3,7' or 'dyadic:LO:HI'")
    p.add_argument("--p", default="1,2", help="Schatten exponents, e.g. '2' or '1,2'")
    common(p)
    p.set_defaults(func=cmd_folner)

    p = sub.add_parser("szego", help="empirical-vs-reference spectral integrals")
    p.add_argument("--op", action="append", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--f", default=None, help="'poly:K' and/or 'hat:COUNT:LO:HI'")
    p.add_argument("--nodes", type=int, default=1 << 16, help="pushforward quadrature nodes")
    p.add_argument("--moment-order", type=int, default=6)
    p.add_argument("--phi", type=float, default=0.0, help="representation phase for ncpoly specs")
    p.add_argument("--herm-tol", type=float, default=1e-10)
    p.add_argument("--plot-out", default=None, help="write n-vs-error CSV here")
    common(p)
    p.set_defaults(func=cmd_szego)

    p = sub.add_parser("trace", help="normalized compression traces")
    p.add_argument("--op", action="append", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--phi", type=float, default=0.0)
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("tensor", help="tensor-product off-corner bound records")
    p.add_argument("--op-a", required=True)
    p.add_argument("--op-b", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--dim-cap", type=int, default=4096)
    common(p)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("demo-shift", help="print the unilateral-shift ratio table")
    p.add_argument("--n", default="1,3,7,15,31,63,127", help="window orders for the table")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_demo_shift)

    p = sub.add_parser("validate", help="lint spec files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (
        SpecValidationError,
        RankZeroError,
        LatticeMismatchError,
        MissingReferenceError,
        NotSelfAdjointError,
        NonHermitianError,
        DimensionCapError,
    ) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 3
    except (ResidualError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
