"""Deterministic output files: delimited data, JSON mirrors, figures.

Data files are byte-reproducible: floats at 17 significant digits, no
timestamps, footer records as '# key=value' comment lines. Run metadata
(config echo, library version) goes to a separate sidecar JSON so the
data files stay stable across runs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

__version__ = "0.1.0"


def format_float(x: float) -> str:
    """17-significant-digit decimal form, enough to round-trip a double."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Sequence[Sequence],
    footer: Mapping[str, object] | None = None,
) -> Path:
    """Write a CSV with a header row and optional '# key=value' footer lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(cell) for cell in row])
        if footer:
            for key, value in footer.items():
                fh.write(f"# {key}={format_float(value)}\n")
    return path


def write_json(
    path: str | Path,
    header: Sequence[str],
    rows: Sequence[Sequence],
    footer: Mapping[str, object] | None = None,
) -> Path:
    """JSON mirror of a CSV: array of row objects plus a 'meta' object."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "rows": [dict(zip(header, row)) for row in rows],
        "meta": dict(footer) if footer else {},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_sidecar(path: str | Path, config: Mapping[str, object]) -> Path:
    """Config-echo sidecar next to a data file (same stem, .meta.json)."""
    path = Path(path)
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    doc = {"config": dict(config), "version": __version__}
    with open(sidecar, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return sidecar


def render_loglog(
    path: str | Path,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    title: str,
) -> Path:
    """Log-log line plot of one or more (label, x, y) series to a PNG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for label, xs, ys in series:
        ax.loglog(xs, ys, marker=".", linewidth=1.0, markersize=3.0, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_semilogy(
    path: str | Path,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    title: str,
) -> Path:
    """Semilog-y line plot of one or more (label, x, y) series to a PNG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for label, xs, ys in series:
        ax.semilogy(xs, ys, marker="o", linewidth=1.0, markersize=3.0, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
