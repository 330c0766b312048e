"""Figure rendering for the report paths.

Every plotting entry point takes already-computed report rows and writes
a PNG next to the delimited output; nothing here feeds back into any
computation. matplotlib is imported lazily with the Agg backend so the
CLI works headless and stays import-light when --plot-dir is not given.
"""

from __future__ import annotations

import os


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_gpf_sweep(records, path: str) -> str:
    """log-scale P(u_n) scatter against the certified bound curve."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(9, 5))
    ok = [r for r in records if r.satisfied]
    bad = [r for r in records if not r.satisfied]
    ax.scatter([r.n for r in ok], [max(r.gpf, 1) for r in ok],
               s=9, color="tab:blue", label="P(u_n)")
    if bad:
        ax.scatter([r.n for r in bad], [max(r.gpf, 1) for r in bad],
                   s=22, color="tab:red", marker="x", label="violations")
    ax.plot([r.n for r in records], [r.bound_hi for r in records],
            color="black", lw=1.2, label="B(n)")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("greatest prime factor")
    ax.legend(loc="upper left")
    ax.set_title("greatest prime factor vs. reference bound")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_density(blocks, path: str) -> str:
    """Per-dyadic-block violation counts and the cumulative density."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = [b.j for b in blocks]
    ax.bar(xs, [b.violations for b in blocks], color="tab:red", alpha=0.7,
           label="violations in [2^j, 2^j+1)")
    ax.bar(xs, [b.records - b.violations for b in blocks],
           bottom=[b.violations for b in blocks], color="tab:blue", alpha=0.4,
           label="satisfied")
    ax2 = ax.twinx()
    ax2.plot(xs, [b.cum_density for b in blocks], color="black", marker="o",
             lw=1.2, label="cumulative density")
    ax2.set_ylim(0, 1)
    ax2.set_ylabel("cumulative violation density")
    ax.set_xlabel("dyadic block exponent j")
    ax.set_ylabel("records")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_lemma9_margins(reports, path: str) -> str:
    """Observed lower-bound constants c1 against n."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot([r.n for r in reports], [r.c1_observed for r in reports],
            marker=".", lw=0.8, color="tab:purple")
    ax.set_xlabel("n")
    ax.set_ylabel("observed c1")
    ax.set_title("linear-form lower-bound margin")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_primitive_search(results, path: str) -> str:
    """Largest attached prime per index m against the reference bound."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    hits = [r for r in results if r.p is not None]
    ax.scatter([r.m for r in hits], [r.p for r in hits], s=14,
               color="tab:green", label="max attached prime")
    ax.plot([r.m for r in results], [r.bound for r in results],
            color="black", lw=1.2, label="reference bound")
    ax.set_yscale("log")
    ax.set_xlabel("m")
    ax.set_ylabel("prime")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
