"""Markdown rendering of reports, and strip diagrams drawn with matplotlib.

JSON is the source of truth; everything here is derived from ``to_json`` output
and never parsed back.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Sequence

_COLORS = {"zero": "#d9d9d9", "nonzero": "#2b8cbe", "hausdorff_only": "#fdae61",
           "unknown": "#ffffff"}


def regions_markdown(regions: Sequence[dict]) -> str:
    if not regions:
        return "(empty set)"
    lines = ["| p | status | flags |", "|---|---|---|"]
    for item in regions:
        if "at" in item:
            lines.append(f"| {{{item['at']}}} | {item['status']} | |")
        else:
            flags = ", ".join(item.get("flags", ()))
            lines.append(f"| ({item['lo']}, {item['hi']}) | {item['status']} | {flags} |".replace("|  |", "| |"))
    return "\n".join(lines)


def strip_markdown(report: dict, title: str = "") -> str:
    head = f"### {title} degree {report['degree']}" if title else f"### degree {report['degree']}"
    return head + "\n\n" + regions_markdown(report["regions"])


def mapping_markdown(data: Dict[str, object], title: str) -> str:
    lines = [f"### {title}", "", "| field | value |", "|---|---|"]
    for key in sorted(data):
        value = data[key]
        if isinstance(value, list):
            value = "; ".join(str(v) for v in value)
        lines.append(f"| {key} | {value} |")
    return "\n".join(lines)


def suite_markdown(report: dict) -> str:
    lines = [f"### verify {report['suite']} (seed {report['seed']})", "",
             "| check | trials | failures | result |", "|---|---|---|---|"]
    for c in report["checks"]:
        lines.append(f"| {c['name']} | {c['trials']} | {c['failures']} | "
                     f"{'pass' if c['passed'] else 'FAIL'} |")
    return "\n".join(lines)


def to_markdown(kind: str, payload) -> str:
    if kind == "strips":
        title = payload.get("title", "")
        return "\n\n".join(strip_markdown(r, title) for r in payload["reports"])
    if kind == "verify":
        return "\n\n".join(suite_markdown(r) for r in payload["suites"])
    if kind == "budget":
        flat = {k: v for k, v in payload.items() if k != "feasible_p"}
        for key in ("plus_condition", "minus_condition"):
            flat[key] = payload[key]["solution"]
        return mapping_markdown(flat, "integrability budget") + "\n\n" + \
            regions_markdown(payload["feasible_p"])
    if kind == "lefschetz":
        lines = [f"### Lefschetz map, m = {payload['m']}", "",
                 "| k | dim domain | dim kernel | dim image |", "|---|---|---|---|"]
        lines += [f"| {r['k']} | {r['dim_domain']} | {r['dim_kernel']} | {r['dim_image']} |"
                  for r in payload["ranks"]]
        return "\n".join(lines)
    return mapping_markdown(payload, kind)


def _num(text: str) -> float:
    return float(Fraction(text))


def _upper(regions: Sequence[dict]) -> float:
    finite = [_num(x) for item in regions for x in (item.get("lo"), item.get("hi"), item.get("at"))
              if x is not None and x != "inf"]
    return max(finite + [2.0]) * 1.25


def strip_figure(reports: Sequence[dict], path: str, title: str = "") -> None:
    """Draw one horizontal band per degree over the exponent axis and save to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Patch

    right = max(_upper(r["regions"]) for r in reports)
    fig, ax = plt.subplots(figsize=(7, 1.2 + 0.45 * len(reports)))
    for row, rep in enumerate(reports):
        for item in rep["regions"]:
            if "at" in item:
                ax.plot([_num(item["at"])] * 2, [row - 0.35, row + 0.35], color="black", lw=0.8)
                continue
            lo = _num(item["lo"])
            hi = right if item["hi"] == "inf" else _num(item["hi"])
            hatch = "//" if "density" in item.get("flags", ()) else None
            ax.barh(row, hi - lo, left=lo, height=0.7, color=_COLORS[item["status"]],
                    edgecolor="black", lw=0.5, hatch=hatch)
    ax.set_yticks(range(len(reports)))
    ax.set_yticklabels([f"k = {r['degree']}" for r in reports])
    ax.set_xlim(1, right)
    ax.set_xlabel("p")
    if title:
        ax.set_title(title)
    ax.legend(handles=[Patch(facecolor=c, edgecolor="black", label=s) for s, c in _COLORS.items()],
              loc="upper center", bbox_to_anchor=(0.5, -0.35), ncol=4, fontsize=8, frameon=False)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


__all__ = ["to_markdown", "strip_figure", "regions_markdown"]
