"""Matplotlib figures written next to the delimited report output."""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "perfchar"
import matplotlib.pyplot as plt  # noqa: E402


# dropping timestamps and version strings keeps repeated renders byte-identical
_STABLE_METADATA = {
    ".png": {"Software": None},
    ".svg": {"Date": None, "Creator": None},
    ".pdf": {"CreationDate": None, "Creator": None, "Producer": None},
}


def _save(fig, path):
    fig.tight_layout()
    suffix = str(path)[str(path).rfind("."):].lower()
    fig.savefig(path, metadata=_STABLE_METADATA.get(suffix))
    plt.close(fig)


def hk_ratio_figure(record, path, estimate=None):
    """length / q^d against n, with the fitted candidate as a reference line."""
    ns = [r.n for r in record.rows]
    ratios = [float(r.ratio) for r in record.rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(ns, ratios, "o-", label="length / q^d")
    if estimate is not None and estimate.candidate is not None:
        ax.axhline(float(estimate.candidate), color="gray", ls="--", label=f"candidate {estimate.candidate}")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.set_xticks(ns)
    ax.legend()
    _save(fig, path)


def chain_valuation_figure(chain, valuations, bound: Fraction, path):
    """v(a_k) for k = 1..N with the lower bound for v(a_1)."""
    ks = list(range(1, len(chain) + 1))
    finite = [(k, float(v.value)) for k, v in zip(ks, valuations) if not v.infinite]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if finite:
        ax.plot([k for k, _ in finite], [v for _, v in finite], "o-", label="v(a_k)")
    ax.axhline(float(bound), color="gray", ls="--", label=f"bound {bound}")
    ax.axhline(1.0, color="black", lw=0.5)
    ax.set_xlabel("k")
    ax.set_ylabel("valuation")
    ax.set_xticks(ks)
    ax.legend()
    _save(fig, path)


def slack_figure(report, path):
    """Histogram of levels above the sampling level at which samples were found."""
    slacks = [r["level"] - report.level for r in report.rows if r.get("found")]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    bins = list(range(0, report.max_slack + 2))
    ax.hist(slacks, bins=bins, align="left", rwidth=0.8)
    ax.set_xlabel("slack m - n")
    ax.set_ylabel("samples found")
    ax.set_xticks(bins[:-1])
    ax.set_title(f"{report.found}/{report.total} found")
    _save(fig, path)
