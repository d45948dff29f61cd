"""Plain SVG line charts."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed ids and no timestamp so repeated runs write identical files
plt.rcParams["svg.hashsalt"] = "policy-index"


def line_chart(path, x, series: dict, title: str = "", ylabel: str = "") -> None:
    fig, ax = plt.subplots(figsize=(8, 3))
    for label, y in series.items():
        ax.plot(list(x), list(y), linewidth=1.0, label=str(label))
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    if len(series) > 1:
        ax.legend(fontsize="small")
    fig.autofmt_xdate()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
