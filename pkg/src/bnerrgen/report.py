"""Dataset report: a summary TSV plus matplotlib figures rendered next
to the emitted dataset."""

from __future__ import annotations

from pathlib import Path

from .corpus import EmitSummary
from .generator import EditKind

_KIND_ORDER = [k.value for k in EditKind]


def write_summary_tsv(summary: EmitSummary, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"records\t{summary.records}\n")
        fh.write(f"words\t{summary.words}\n")
        fh.write(f"unchanged\t{summary.unchanged}\n")
        for kind in _KIND_ORDER:
            fh.write(f"edits.{kind}\t{summary.edits_by_kind.get(kind, 0)}\n")
        for rule_id in sorted(summary.edits_by_rule):
            fh.write(f"rule.{rule_id}\t{summary.edits_by_rule[rule_id]}\n")
        for n in sorted(summary.records_by_edit_count):
            fh.write(f"edit_count.{n}\t{summary.records_by_edit_count[n]}\n")


def render_report(summary: EmitSummary, out_dir: str | Path) -> list[Path]:
    """Write summary.tsv and the report figures into ``out_dir``;
    returns the created paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []

    tsv = out / "summary.tsv"
    write_summary_tsv(summary, tsv)
    created.append(tsv)

    fig, ax = plt.subplots(figsize=(6, 4))
    counts = [summary.edits_by_kind.get(kind, 0) for kind in _KIND_ORDER]
    ax.bar(range(len(_KIND_ORDER)), counts, color="#4878a8")
    ax.set_xticks(range(len(_KIND_ORDER)))
    ax.set_xticklabels(_KIND_ORDER, rotation=20, ha="right")
    ax.set_ylabel("edits")
    ax.set_title("Edits by kind")
    fig.tight_layout()
    path = out / "edit_kinds.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    max_edits = max(summary.records_by_edit_count, default=0)
    xs = list(range(max_edits + 1))
    ax.bar(xs, [summary.records_by_edit_count.get(x, 0) for x in xs], color="#6aa56a")
    ax.set_xticks(xs)
    ax.set_xlabel("edits per record")
    ax.set_ylabel("records")
    ax.set_title("Edits per record")
    fig.tight_layout()
    path = out / "edits_per_record.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    if summary.edits_by_rule:
        fig, ax = plt.subplots(figsize=(7, 4))
        rule_ids = sorted(summary.edits_by_rule)
        ax.bar(
            range(len(rule_ids)),
            [summary.edits_by_rule[r] for r in rule_ids],
            color="#a8784e",
        )
        ax.set_xticks(range(len(rule_ids)))
        ax.set_xticklabels([str(r) for r in rule_ids])
        ax.set_xlabel("rewrite rule")
        ax.set_ylabel("edits")
        ax.set_title("Conjunct rewrites by rule")
        fig.tight_layout()
        path = out / "rule_usage.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        created.append(path)

    return created
