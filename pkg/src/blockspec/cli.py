"""Command-line interface.

Subcommands: ``simulate``, ``moments``, ``density``, ``reduce``, ``dependent``.
Each writes a JSON summary (schema ``blockspec.summary/1``) holding the
resolved configuration; grids and histograms go to CSV, figures to PNG next to
the CSV.

Exit codes: 0 success, 2 configuration error, 3 numerical-contract violation,
4 capacity/budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import laws
from .linalg import InvalidParameterError, commutation_matrix, eigenvalues
from .moments import CapacityError, default_budget, limiting_moment, limiting_moment_table
from .sampler import Seed, build_dependent_wigner
from .simulate import simulate_dependent, simulate_structure
from .stats import empirical_moment, histogram, ks_distance, write_histogram_csv, write_sample_csv
from .structure import (
    BlockStructure,
    StructureError,
    assemble,
    circulant_structure,
    full_wigner_structure,
    load_structure,
    toeplitz_structure,
)

SCHEMA = "blockspec.summary/1"
BUILTINS = ("circulant", "toeplitz", "wigner-full", "dependent-wigner")

EXIT_OK, EXIT_CONFIG, EXIT_CONTRACT, EXIT_CAPACITY = 0, 2, 3, 4

SIMILARITY_TOL = 1e-12
SPECTRAL_TOL = 1e-9


class ConfigError(ValueError):
    pass


class ContractViolation(RuntimeError):
    pass


# -- helpers -------------------------------------------------------------------


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return v


def resolve_structure(args) -> BlockStructure:
    """Structure named by ``--structure``/``--k`` or loaded from ``--structure-file``.

    ``dependent-wigner`` resolves to the circulant it is similar to.
    """
    if getattr(args, "structure_file", None):
        try:
            text = Path(args.structure_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read structure file: {exc}") from None
        return load_structure(text)
    name, k = args.structure, args.k
    if name in ("circulant", "dependent-wigner"):
        return circulant_structure(k)
    if name == "toeplitz":
        return toeplitz_structure(k)
    if name == "wigner-full":
        return full_wigner_structure(k)
    raise ConfigError(f"unknown structure {name!r}")


def reference_law(args) -> laws.SemicircleMixture | None:
    """Closed-form limit when one is known: nu_k for circulant shapes, the semicircle for k = 1."""
    if getattr(args, "structure_file", None):
        return None
    if args.structure in ("circulant", "dependent-wigner"):
        return laws.wigner_law(1.0) if args.k == 1 else laws.nu_k(args.k)
    if args.k == 1:
        return laws.wigner_law(1.0)
    return None


def _config(args) -> dict:
    # threads only affects scheduling, and leaving it out keeps summaries byte-identical
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "threads")}
    cfg["budget"] = default_budget()
    return cfg


def _summary_path(out: Path) -> Path:
    return out.with_suffix(".json")


def _emit_summary(args, summary: dict) -> None:
    text = json.dumps(summary, indent=2, sort_keys=False) + "\n"
    if args.out:
        _summary_path(Path(args.out)).write_text(text)
    else:
        sys.stdout.write(text)


def _limiting_moments(structure: BlockStructure, orders) -> dict:
    out = {}
    for s in orders:
        try:
            out[str(s)] = limiting_moment(structure, s)
        except CapacityError:
            out[str(s)] = None
    return out


def _spectral_report(args, sample, structure, law, title) -> dict:
    report = {
        "matrix_dim": sample.matrix_dim,
        "replicates": sample.replicate_count,
        "empirical_moments": {str(s): empirical_moment(sample, s) for s in (2, 4, 6)},
        "limiting_moments": _limiting_moments(structure, (2, 4, 6)),
    }
    if law is not None:
        report["reference_law"] = {
            "weights": list(law.weights),
            "variances": list(law.variances),
        }
        report["reference_moments"] = {str(s): laws.mixture_moment(law, s) for s in (2, 4, 6)}
        report["ks_distance"] = ks_distance(sample, law.cdf)
    if args.out:
        out = Path(args.out)
        hist = histogram(sample, args.bins)
        write_histogram_csv(hist, out, law.pdf if law is not None else None)
        if args.eigs_out:
            write_sample_csv(sample, args.eigs_out)
        if not args.no_figure:
            from .plotting import plot_histogram

            plot_histogram(hist, out.with_suffix(".png"), law.pdf if law is not None else None, title)
        report["files"] = {"histogram": str(out), "summary": str(_summary_path(out))}
        if not args.no_figure:
            report["files"]["figure"] = str(out.with_suffix(".png"))
    return report


# -- subcommands ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    if args.structure == "dependent-wigner" and not args.structure_file:
        return cmd_dependent(args)
    structure = resolve_structure(args)
    law = reference_law(args)
    sample = simulate_structure(
        structure, args.n, args.reps, args.seed, entry_law=args.entry_law, threads=args.threads
    )
    title = f"{args.structure_file or args.structure} k={structure.k}, n={args.n}, {args.reps} replicates"
    summary = {"schema": SCHEMA, "command": "simulate", "config": _config(args)}
    summary.update(_spectral_report(args, sample, structure, law, title))
    _emit_summary(args, summary)
    return EXIT_OK


def check_similarity(k: int, n: int, seed: Seed) -> dict:
    """Conjugate the dependent matrix by commutation matrices and compare with the circulant assembly."""
    dep = build_dependent_wigner(k, n, seed)
    conj = commutation_matrix(k, n) @ dep.matrix @ commutation_matrix(n, k)
    circ = assemble(circulant_structure(k), dep.scalars)
    entry_diff = float(np.abs(conj - circ).max())
    spec_diff = float(np.abs(eigenvalues(dep.matrix) - eigenvalues(circ)).max())
    return {"entrywise": entry_diff, "spectral": spec_diff}


def cmd_dependent(args) -> int:
    k, n = args.k, args.n
    check = check_similarity(k, n, Seed(args.seed, 0))
    summary = {"schema": SCHEMA, "command": "dependent", "config": _config(args), "similarity": check}
    ok = check["entrywise"] <= SIMILARITY_TOL and check["spectral"] <= SPECTRAL_TOL
    summary["similarity"]["passed"] = ok
    if not ok:
        _emit_summary(args, summary)
        raise ContractViolation(
            f"similarity check failed: entrywise {check['entrywise']:.3e}, spectral {check['spectral']:.3e}"
        )
    if args.reps > 0:
        sample = simulate_dependent(k, n, args.reps, args.seed, threads=args.threads)
        law = laws.wigner_law(1.0) if k == 1 else laws.nu_k(k)
        title = f"dependent Wigner k={k}, n={n}, {args.reps} replicates"
        summary.update(_spectral_report(args, sample, circulant_structure(k), law, title))
    _emit_summary(args, summary)
    return EXIT_OK


def cmd_moments(args) -> int:
    structure = resolve_structure(args)
    table = limiting_moment_table(structure, args.max_order)
    law = reference_law(args)
    rows = []
    for s, m in enumerate(table.moments):
        row = {"order": s, "moment": m}
        if law is not None:
            ref = laws.mixture_moment(law, s)
            row["reference"] = ref
            row["difference"] = abs(m - ref)
        rows.append(row)
    summary = {"schema": SCHEMA, "command": "moments", "config": _config(args), "moments": rows}
    if law is not None:
        summary["max_difference"] = max(r["difference"] for r in rows)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        if args.out:
            Path(args.out).write_text(buf.getvalue())
            _emit_summary(args, summary)
        else:
            sys.stdout.write(buf.getvalue())
    else:
        if args.out:
            Path(args.out).write_text(json.dumps(summary, indent=2) + "\n")
        else:
            sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def density_law(args) -> laws.SemicircleMixture:
    if args.variance is not None:
        return laws.SemicircleMixture(((1.0, laws.Semicircle(args.center, args.variance)),))
    if args.k == 1:
        return laws.wigner_law(1.0)
    return laws.nu_k(args.k)


def density_grid(law: laws.SemicircleMixture, points: int) -> np.ndarray:
    lo, hi = law.support
    pad = 0.05 * (hi - lo) / 2
    return np.linspace(lo - pad, hi + pad, points)


def cmd_density(args) -> int:
    law = density_law(args)
    x = density_grid(law, args.grid)
    pdf = law.pdf(x)
    cdf = law.cdf(x)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "pdf", "cdf"])
    for row in zip(x, pdf, cdf):
        w.writerow([repr(float(v)) for v in row])
    summary = {
        "schema": SCHEMA,
        "command": "density",
        "config": _config(args),
        "law": {"weights": list(law.weights), "variances": list(law.variances)},
        "support": list(law.support),
    }
    if args.out:
        out = Path(args.out)
        out.write_text(buf.getvalue())
        if not args.no_figure:
            from .plotting import plot_density

            plot_density(x, pdf, cdf, out.with_suffix(".png"))
        _emit_summary(args, summary)
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .reduction import reduced_variance_check, verify_reduction
    from .sampler import WignerSpec, sample_wigner

    k, n = args.k, args.n
    spec = WignerSpec(n)
    blocks = [sample_wigner(spec, Seed(args.seed, 0), block=a).matrix for a in range(k // 2 + 1)]
    disc = verify_reduction(blocks, k)
    summary = {"schema": SCHEMA, "command": "reduce", "config": _config(args), "discrepancy": disc}
    if args.reps > 0:
        vc = reduced_variance_check(k, n, args.reps, Seed(args.seed, 0))
        summary["variances"] = [
            {"j": j + 1, "sample": v, "expected": e, "std_error": s}
            for j, (v, e, s) in enumerate(zip(vc.variances, vc.expected, vc.std_errors))
        ]
    _emit_summary(args, summary)
    if not disc <= SPECTRAL_TOL:
        raise ContractViolation(f"reduction discrepancy {disc:.3e} exceeds {SPECTRAL_TOL:g}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blockspec",
        description="Spectra of Hermitian block matrices with Wigner blocks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def structure_args(sp, default="circulant"):
        sp.add_argument("--structure", choices=BUILTINS, default=default)
        sp.add_argument("--k", type=_positive, default=1)
        sp.add_argument("--structure-file", help="JSON structure file (overrides --structure/--k)")

    def sim_args(sp):
        sp.add_argument("--n", type=_positive, default=200)
        sp.add_argument("--reps", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bins", type=_positive, default=60)
        sp.add_argument("--threads", type=_positive, default=None)
        sp.add_argument("--out", help="histogram CSV path; summary and figure go alongside")
        sp.add_argument("--eigs-out", help="optional file with one pooled eigenvalue per line")
        sp.add_argument("--no-figure", action="store_true")

    sp = sub.add_parser("simulate", help="sample block matrices and compare their ESD with the limit")
    structure_args(sp)
    sim_args(sp)
    sp.add_argument("--entry-law", choices=("gaussian", "rademacher", "uniform"), default="gaussian")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("moments", help="exact limiting moments from non-crossing pairings")
    structure_args(sp)
    sp.add_argument("--max-order", type=int, default=8)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("density", help="pdf/cdf grid of nu_k or a semicircle")
    sp.add_argument("--k", type=_positive, default=1)
    sp.add_argument("--center", type=float, default=0.0)
    sp.add_argument("--variance", type=float, default=None, help="use a single semicircle instead of nu_k")
    sp.add_argument("--grid", type=_positive, default=512)
    sp.add_argument("--out")
    sp.add_argument("--no-figure", action="store_true")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("reduce", help="verify the circulant block reduction")
    sp.add_argument("--k", type=_positive, default=3)
    sp.add_argument("--n", type=_positive, default=20)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("dependent", help="dependent-entry Wigner matrix built from circulant tiles")
    sp.add_argument("--k", type=_positive, default=4)
    sim_args(sp)
    sp.set_defaults(func=cmd_dependent, structure="dependent-wigner", structure_file=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "reps", 1) < 0:
            raise ConfigError("--reps must be nonnegative")
        if getattr(args, "max_order", 0) < 0:
            raise ConfigError("--max-order must be nonnegative")
        if getattr(args, "variance", None) is not None and not args.variance > 0:
            raise ConfigError("--variance must be positive")
        if args.command == "simulate" and args.reps < 1:
            raise ConfigError("--reps must be >= 1")
        return args.func(args)
    except (ConfigError, StructureError, InvalidParameterError) as exc:
        print(f"blockspec: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ContractViolation as exc:
        print(f"blockspec: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except CapacityError as exc:
        print(f"blockspec: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
