"""Figure rendering for CLI reports.

Each helper takes the same flat records the CSV/JSON reports carry and
writes one PNG, so plots always visualize exactly the emitted data.
matplotlib is imported lazily with the Agg backend; nothing here runs
unless a plot directory is requested.
"""

from __future__ import annotations

import os


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams.update({
        "figure.figsize": (7.0, 4.5),
        "axes.grid": True,
        "grid.alpha": 0.3,
        "axes.labelsize": 11,
        "legend.fontsize": 9,
    })
    return plt


def plot_spectrum(records, plot_dir: str, sector_mode: bool) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots()
    idx = [r["index"] for r in records]
    energy = [r["energy"] for r in records]
    ax.plot(idx, energy, "o-", ms=4)
    ax.set_xlabel("level index")
    ax.set_ylabel("energy")
    title = "sector spectrum" if sector_mode else "full-space spectrum"
    if sector_mode and records:
        title += f" (2j={records[0]['two_j']}, 2λ={records[0]['two_lambda']})"
    ax.set_title(title)
    path = os.path.join(plot_dir, "spectrum.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_audit(records, plot_dir: str) -> str:
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))

    bars = [r for r in records
            if r["metric"].endswith("_frobenius") and r["value"] is not None]
    names = [
        "\n".join(filter(None, (r["metric"].replace("_frobenius", ""),
                                r.get("coupling_power") or "",
                                r.get("channel") or "")))
        for r in bars
    ]
    vals = [max(r["value"], 1e-18) for r in bars]
    ax1.bar(range(len(vals)), vals, color="tab:red")
    ax1.set_yscale("log")
    ax1.set_xticks(range(len(vals)))
    ax1.set_xticklabels(names, fontsize=7)
    ax1.axhline(1e-8, color="k", ls="--", lw=1, label="significance 1e-8")
    ax1.set_ylabel("Frobenius residual")
    ax1.set_title("identity / bosonic-algebra defects")
    ax1.legend()

    claimed = [r for r in records if r["metric"] == "claimed_energy"]
    exact = [r for r in records if r["metric"] == "exact_energy"]
    if claimed and exact:
        ax2.plot([r["value"] for r in exact], [r["value"] for r in exact],
                 "-", color="0.6", lw=1, label="ideal")
        ax2.plot([r["value"] for r in exact], [r["value"] for r in claimed],
                 "o", color="tab:blue", label="candidate closed form")
        ax2.set_xlabel("exact sector energy")
        ax2.set_ylabel("candidate energy")
        ax2.set_title("candidate vs exact energies")
        ax2.legend()
    path = os.path.join(plot_dir, "audit.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_jc(records, plot_dir: str) -> str:
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    n = [r["n"] for r in records]
    ax1.plot(n, [r["e_plus"] for r in records], "o-", ms=4, label="+rabi")
    ax1.plot(n, [r["e_minus"] for r in records], "o-", ms=4, label="-rabi")
    ax1.set_xlabel("block index n")
    ax1.set_ylabel("interaction-picture energy")
    ax1.set_title("dressed doublets")
    ax1.legend()
    ax2.semilogy(n, [max(r["orthogonality_residual"], 1e-18) for r in records],
                 "o-", ms=4, label="orthogonality")
    ax2.semilogy(n, [max(r["diagonalization_residual"], 1e-18) for r in records],
                 "s-", ms=4, label="off-diagonal")
    ax2.set_xlabel("block index n")
    ax2.set_ylabel("residual")
    ax2.set_title("rotation quality")
    ax2.legend()
    path = os.path.join(plot_dir, "jc.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_sweep(records, plot_dir: str) -> str:
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    x = [r["value"] for r in records]
    param = records[0]["param"] if records else "value"
    ax1.plot(x, [r["unitarity_frobenius_paper_g_squared"] for r in records],
             "o-", ms=4, label="|g|^2 power (as written)")
    ax1.plot(x, [r["unitarity_frobenius_corrected_g"] for r in records],
             "s-", ms=4, label="|g| power (corrected)")
    ax1.set_xlabel(param)
    ax1.set_ylabel("unitarity residual (Frobenius)")
    ax1.set_title("non-unitarity vs coupling")
    ax1.legend()
    ax2.plot(x, [r["claimed_max_abs_deviation"] for r in records], "o-", ms=4)
    ax2.set_xlabel(param)
    ax2.set_ylabel("max |candidate - exact|")
    ax2.set_title("candidate-spectrum deviation")
    path = os.path.join(plot_dir, "sweep.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
