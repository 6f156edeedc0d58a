"""Batch command-line front end.

Subcommands: spectrum, audit, jc, sweep.  Data goes to stdout or --out,
diagnostics to stderr.  Exit codes: 0 success, 2 invalid input or domain
error, 3 inconclusive verification.  Reruns with the same configuration
produce byte-identical output; TC_AUDIT_THREADS caps internal parallelism
without affecting output ordering.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, audit, fock, jc, plots, tc
from .audit import (BogoliubovConvention, CouplingPower, MappingMode,
                    PhaseRealization)
from .errors import TcAuditError
from .report import ReportEnvelope, fmt17
from .tc import ModelParams, SectorKey

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
SCALAR_CONTROL_BOUND = 1e-10

_POWERS = {
    "paper_g_squared": (CouplingPower.PAPER_G_SQUARED,),
    "corrected_g": (CouplingPower.CORRECTED_G,),
    "both": (CouplingPower.PAPER_G_SQUARED, CouplingPower.CORRECTED_G),
}


def _max_workers() -> int:
    raw = os.environ.get("TC_AUDIT_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"TC_AUDIT_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"TC_AUDIT_THREADS must be a positive integer, got {raw!r}")
    return value


def _map_ordered(fn, items):
    """Apply fn over items, optionally on a thread pool; order is preserved."""
    workers = min(_max_workers(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcaudit",
        description=("Exact Tavis-Cummings sector spectra, unitarity audits of the "
                     "operator-valued Bogoliubov transformation, and k-photon "
                     "Jaynes-Cummings verification."),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", choices=["json", "csv", "table"], default="table",
                       help="report format (default: table)")
        p.add_argument("--out", metavar="PATH", help="write the report to PATH")
        p.add_argument("--plot-dir", metavar="DIR",
                       help="also render figures into DIR")
        p.add_argument("--tol", type=float, default=1e-12,
                       help="numerical tolerance (default: 1e-12)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed echoed into the report (default: 0)")

    p_spec = sub.add_parser("spectrum", help="exact sector or full-space spectra")
    p_spec.add_argument("--two-j", type=int, help="doubled collective spin 2j")
    p_spec.add_argument("--two-lambda", type=int, help="doubled charge 2*lambda")
    p_spec.add_argument("--omega", type=float, default=1.0)
    p_spec.add_argument("--g", type=float, default=0.0)
    p_spec.add_argument("--cutoff-a", type=int, help="full-space mode: cutoff for mode a")
    p_spec.add_argument("--cutoff-b", type=int, help="full-space mode: cutoff for mode b")
    p_spec.add_argument("--cutoff-c", type=int, help="full-space mode: cutoff for mode c")
    common(p_spec)

    p_aud = sub.add_parser("audit", help="audit the operator-valued Bogoliubov transformation")
    p_aud.add_argument("--omega", type=float, default=1.0)
    p_aud.add_argument("--g", type=float, default=0.1)
    p_aud.add_argument("--omega1", type=float, default=None,
                       help="transformed-frame a-mode coefficient (default: omega)")
    p_aud.add_argument("--cutoff-a", type=int, default=8)
    p_aud.add_argument("--cutoff-f", type=int, default=4)
    p_aud.add_argument("--cutoff-d", type=int, default=4)
    p_aud.add_argument("--drop-edge", type=int, default=1)
    p_aud.add_argument("--significance", type=float, default=1e-8,
                       help="residual above which non-unitarity counts as detected")
    p_aud.add_argument("--coupling-power", choices=sorted(_POWERS), default="both")
    p_aud.add_argument("--phase-realization",
                       choices=[p.value for p in PhaseRealization],
                       default=PhaseRealization.SUSSKIND_GLOGOWER.value)
    p_aud.add_argument("--two-j", type=int, action="append",
                       help="sector for the candidate-energy comparison (repeatable)")
    p_aud.add_argument("--two-lambda", type=int, action="append")
    common(p_aud)

    p_jc = sub.add_parser("jc", help="verify the k-photon Jaynes-Cummings ladder")
    p_jc.add_argument("--k", type=int, default=1, help="photon number of the process")
    p_jc.add_argument("--g", type=float, default=1.0)
    p_jc.add_argument("--omega", type=float, default=1.0, help="field frequency")
    p_jc.add_argument("--delta", type=float, default=0.0,
                      help="detuning Delta = omega0/2 - omega")
    p_jc.add_argument("--omega0", type=float, default=None,
                      help="transition frequency (overrides --delta)")
    p_jc.add_argument("--n-max", type=int, default=10, help="highest block index")
    p_jc.add_argument("--generalized-e20", action="store_true",
                      help="emit the closed-form pair for k != 2 as well")
    common(p_jc)

    p_sw = sub.add_parser("sweep", help="audit metrics over a one-parameter grid")
    p_sw.add_argument("--param", action="append", choices=["g", "omega"],
                      help="swept parameter (exactly one)")
    p_sw.add_argument("--values", action="append",
                      help="comma-separated grid values")
    p_sw.add_argument("--omega", type=float, default=1.0)
    p_sw.add_argument("--g", type=float, default=0.1)
    p_sw.add_argument("--omega1", type=float, default=None)
    p_sw.add_argument("--cutoff-a", type=int, default=8)
    p_sw.add_argument("--drop-edge", type=int, default=1)
    p_sw.add_argument("--significance", type=float, default=1e-8)
    p_sw.add_argument("--two-j", type=int, default=1)
    p_sw.add_argument("--two-lambda", type=int, default=1)
    common(p_sw)

    return parser


def _emit(envelope: ReportEnvelope, args, plot_fn=None) -> None:
    text = envelope.render(args.output)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot_dir:
        os.makedirs(args.plot_dir, exist_ok=True)
        if plot_fn is not None:
            path = plot_fn(envelope.results, args.plot_dir)
            print(f"figure written: {path}", file=sys.stderr)


def _common_config(args) -> dict:
    return {
        "output": args.output,
        "out": args.out,
        "plot_dir": args.plot_dir,
        "tol": float(args.tol),
        "seed": int(args.seed),
    }


def cmd_spectrum(args) -> int:
    sector_mode = args.two_j is not None or args.two_lambda is not None
    cutoffs = (args.cutoff_a, args.cutoff_b, args.cutoff_c)
    full_mode = any(c is not None for c in cutoffs)
    if sector_mode and full_mode:
        raise ValueError("give either a sector (--two-j/--two-lambda) or cutoffs, not both")
    if not sector_mode and not full_mode:
        raise ValueError("give a sector (--two-j and --two-lambda) or all three cutoffs")

    params = ModelParams(omega=args.omega, g=args.g)
    config = {
        "command": "spectrum",
        "omega": params.omega,
        "g": params.g,
        "two_j": args.two_j,
        "two_lambda": args.two_lambda,
        "cutoff_a": args.cutoff_a,
        "cutoff_b": args.cutoff_b,
        "cutoff_c": args.cutoff_c,
        **_common_config(args),
    }

    if sector_mode:
        if args.two_j is None or args.two_lambda is None:
            raise ValueError("sector mode needs both --two-j and --two-lambda")
        key = SectorKey(args.two_j, args.two_lambda)
        energies = tc.sector_spectrum(params, key, args.tol)
        columns = ["two_j", "two_lambda", "index", "energy"]
        records = [
            {"two_j": key.two_j, "two_lambda": key.two_lambda,
             "index": i, "energy": float(e)}
            for i, e in enumerate(energies)
        ]
    else:
        if any(c is None for c in cutoffs):
            raise ValueError("full-space mode needs --cutoff-a, --cutoff-b and --cutoff-c")
        h = tc.full_hamiltonian_truncated(params, cutoffs)
        energies, _ = fock.eigh_dense(h, args.tol)
        columns = ["index", "energy"]
        records = [{"index": i, "energy": float(e)} for i, e in enumerate(energies)]

    envelope = ReportEnvelope(__version__, config, [], columns, records)
    _emit(envelope, args,
          lambda recs, d: plots.plot_spectrum(recs, d, sector_mode))
    return EXIT_OK


def _audit_sectors(args) -> list[SectorKey]:
    tjs = args.two_j or [1]
    tls = args.two_lambda or [1]
    if len(tjs) != len(tls):
        raise ValueError("--two-j and --two-lambda must be given the same number of times")
    return [SectorKey(tj, tl) for tj, tl in zip(tjs, tls)]


def _audit_assumptions(params: ModelParams, phase: PhaseRealization,
                       drop_edge: int, powers) -> list[str]:
    phase_note = {
        PhaseRealization.SUSSKIND_GLOGOWER:
            "phase factor sqrt(a/a+) realized as the Susskind-Glogower lowering shift",
        PhaseRealization.ADJOINT_VARIANT:
            "phase factor sqrt(a/a+) realized as the adjoint (raising) shift",
    }[phase]
    return [
        f"omega1 = {fmt17(params.effective_omega1)}",
        phase_note,
        "coupling powers evaluated: " + ", ".join(p.value for p in powers),
        f"edge states excluded per mode: drop_edge = {drop_edge}",
    ]


def cmd_audit(args) -> int:
    params = ModelParams(omega=args.omega, g=args.g, omega1=args.omega1)
    phase = PhaseRealization(args.phase_realization)
    powers = _POWERS[args.coupling_power]
    sectors = _audit_sectors(args)
    cutoffs = (args.cutoff_a, args.cutoff_f, args.cutoff_d)

    config = {
        "command": "audit",
        "omega": params.omega,
        "g": params.g,
        "omega1": params.effective_omega1,
        "cutoff_a": args.cutoff_a,
        "cutoff_f": args.cutoff_f,
        "cutoff_d": args.cutoff_d,
        "drop_edge": args.drop_edge,
        "significance": float(args.significance),
        "coupling_power": args.coupling_power,
        "phase_realization": phase.value,
        "sectors": [[k.two_j, k.two_lambda] for k in sectors],
        **_common_config(args),
    }

    columns = ["metric", "coupling_power", "channel", "two_j", "two_lambda", "value"]
    records: list[dict] = []

    def rec(metric, value, power=None, channel=None, key=None):
        records.append({
            "metric": metric,
            "coupling_power": power,
            "channel": channel,
            "two_j": None if key is None else key.two_j,
            "two_lambda": None if key is None else key.two_lambda,
            "value": float(value),
        })

    detected = True
    for power in powers:
        conv = BogoliubovConvention(phase, power)
        unit = audit.unitarity_residual(params, args.cutoff_a, conv, args.drop_edge)
        rec("unitarity_frobenius", unit.frobenius, power.value)
        rec("unitarity_spectral", unit.spectral, power.value)
        rec("unitarity_forms_agreement",
            audit.unitarity_forms_agreement(params, args.cutoff_a, conv), power.value)
        comm = audit.composed_mode_commutator(params, cutoffs, conv, args.drop_edge)
        rec("commutator_frobenius", comm.b.frobenius, power.value, "b")
        rec("commutator_spectral", comm.b.spectral, power.value, "b")
        rec("commutator_frobenius", comm.c.frobenius, power.value, "c")
        rec("commutator_spectral", comm.c.spectral, power.value, "c")
        detected = detected and unit.frobenius > args.significance

    control = audit.scalar_control_commutator(0.3, 0.7, cutoffs, args.drop_edge)
    rec("scalar_control_frobenius", control.b.frobenius, channel="b")
    rec("scalar_control_spectral", control.b.spectral, channel="b")
    rec("scalar_control_frobenius", control.c.frobenius, channel="c")
    rec("scalar_control_spectral", control.c.spectral, channel="c")
    scalar_ok = max(control.b.frobenius, control.c.frobenius) <= SCALAR_CONTROL_BOUND

    for key in sectors:
        for mode in (MappingMode.NAIVE_IDENTIFICATION, MappingMode.BEST_ASSIGNMENT):
            comparison = audit.compare_claimed_vs_exact(params, key, mode)
            rec("claimed_max_abs_deviation", comparison.max_abs_deviation,
                channel=mode.value, key=key)
            rec("claimed_offset_free_max_abs_deviation",
                comparison.offset_free_max_abs_deviation,
                channel=mode.value, key=key)
            if mode is MappingMode.NAIVE_IDENTIFICATION:
                for i, row in enumerate(comparison.rows):
                    rec("claimed_energy", row.claimed, channel=str(i), key=key)
                    rec("exact_energy", row.exact, channel=str(i), key=key)

    assumptions = _audit_assumptions(params, phase, args.drop_edge, powers)
    envelope = ReportEnvelope(__version__, config, assumptions, columns, records)
    _emit(envelope, args, plots.plot_audit)

    if not scalar_ok:
        print("audit inconclusive: scalar control residual above "
              f"{SCALAR_CONTROL_BOUND:g}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if not detected:
        print("audit inconclusive: unitarity residual below significance "
              f"threshold {args.significance:g}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    print("audit verdict: non-unitarity detected; scalar control passed",
          file=sys.stderr)
    return EXIT_OK


def cmd_jc(args) -> int:
    if args.n_max < 0:
        raise ValueError("--n-max must be >= 0")
    if args.omega0 is not None:
        params = jc.JcParams(omega0=args.omega0, omega=args.omega, g=args.g, k=args.k)
    else:
        params = jc.JcParams.from_delta(args.delta, args.omega, args.g, args.k)
    emit_e20 = params.k == 2 or args.generalized_e20
    emit_tc = params.k == 1 and params.delta == 0.0

    config = {
        "command": "jc",
        "k": params.k,
        "g": params.g,
        "omega": params.omega,
        "omega0": params.omega0,
        "delta": params.delta,
        "n_max": args.n_max,
        "generalized_e20": bool(args.generalized_e20),
        **_common_config(args),
    }

    columns = ["n", "rabi", "e_plus", "e_minus",
               "orthogonality_residual", "diagonalization_residual",
               "e20_plus", "e20_minus", "tc_gap_k1"]
    records = []
    bound = args.tol * 100.0
    all_ok = True
    for n in range(args.n_max + 1):
        block = jc.jc_block(params, n)
        check = jc.verify_block_diagonalization(params, n, args.tol)
        all_ok = all_ok and max(check.orthogonality_residual,
                                check.off_diagonal_residual) <= bound
        row = {
            "n": n,
            "rabi": block.rabi,
            "e_plus": block.e_plus,
            "e_minus": block.e_minus,
            "orthogonality_residual": check.orthogonality_residual,
            "diagonalization_residual": check.off_diagonal_residual,
            "e20_plus": None,
            "e20_minus": None,
            "tc_gap_k1": None,
        }
        if emit_e20:
            plus, minus = jc.e20_eigenvalues(params, n, allow_generalized=True)
            row["e20_plus"] = plus
            row["e20_minus"] = minus
        if emit_tc:
            # one atom at resonance: the collective-spin sector with
            # lambda + j = n + 1 carries the same doublet splitting
            tc_params = ModelParams(omega=params.omega, g=params.g)
            spec = tc.spin_sector_spectrum(tc_params, 1, 2 * n + 1)
            row["tc_gap_k1"] = float(spec[-1] - spec[0])
        records.append(row)

    assumptions = [
        "Omega = Delta",
        "hbar = 1",
        "sigma_z assigns +Delta to the ground-state row",
    ]
    if emit_e20:
        assumptions.append(
            "closed-form pair carries the free-field offset omega*(n + k/2) "
            "outside the interaction picture")

    envelope = ReportEnvelope(__version__, config, assumptions, columns, records)
    _emit(envelope, args, plots.plot_jc)
    if not all_ok:
        print(f"jc verification inconclusive: residual above {bound:g}",
              file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.param or not args.values:
        raise ValueError("sweep needs --param and --values")
    if len(args.param) != 1 or len(args.values) != 1:
        raise ValueError("sweep accepts exactly one parameter grid")
    param = args.param[0]
    try:
        values = [float(v) for v in args.values[0].split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse grid values {args.values[0]!r}")
    if not values:
        raise ValueError("empty grid")

    key = SectorKey(args.two_j, args.two_lambda)
    phase = PhaseRealization.SUSSKIND_GLOGOWER

    def point_params(v: float) -> ModelParams:
        omega = v if param == "omega" else args.omega
        g = v if param == "g" else args.g
        return ModelParams(omega=omega, g=g, omega1=args.omega1)

    # validate the whole grid up front: any singular point rejects the run
    grid_params = [point_params(v) for v in values]
    for p in grid_params:
        audit._guard_domain(p, args.cutoff_a)
    tc.enumerate_sector(key)

    config = {
        "command": "sweep",
        "param": param,
        "values": [float(v) for v in values],
        "omega": args.omega,
        "g": args.g,
        "omega1": ModelParams(args.omega, args.g, args.omega1).effective_omega1,
        "cutoff_a": args.cutoff_a,
        "drop_edge": args.drop_edge,
        "significance": float(args.significance),
        "two_j": key.two_j,
        "two_lambda": key.two_lambda,
        **_common_config(args),
    }

    def evaluate(pv) -> dict:
        v, p = pv
        row = {"param": param, "value": float(v)}
        for power in (CouplingPower.PAPER_G_SQUARED, CouplingPower.CORRECTED_G):
            conv = BogoliubovConvention(phase, power)
            unit = audit.unitarity_residual(p, args.cutoff_a, conv, args.drop_edge)
            row[f"unitarity_frobenius_{power.value}"] = unit.frobenius
        comparison = audit.compare_claimed_vs_exact(
            p, key, MappingMode.NAIVE_IDENTIFICATION)
        row["claimed_max_abs_deviation"] = comparison.max_abs_deviation
        return row

    rows = _map_ordered(evaluate, list(zip(values, grid_params)))
    rows.sort(key=lambda r: r["value"])

    columns = ["param", "value",
               "unitarity_frobenius_paper_g_squared",
               "unitarity_frobenius_corrected_g",
               "claimed_max_abs_deviation"]
    assumptions = _audit_assumptions(
        grid_params[0], phase, args.drop_edge,
        (CouplingPower.PAPER_G_SQUARED, CouplingPower.CORRECTED_G))

    envelope = ReportEnvelope(__version__, config, assumptions, columns, rows)
    _emit(envelope, args, plots.plot_sweep)

    if len(rows) == 1:
        detected = min(
            rows[0]["unitarity_frobenius_paper_g_squared"],
            rows[0]["unitarity_frobenius_corrected_g"],
        ) > args.significance
        if not detected:
            print("single-point sweep inconclusive: residual below significance "
                  f"threshold {args.significance:g}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
    return EXIT_OK


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "audit": cmd_audit,
    "jc": cmd_jc,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _max_workers()  # validate the env var before any computation
        return _COMMANDS[args.command](args)
    except TcAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
