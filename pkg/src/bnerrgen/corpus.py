"""Corpus front-end: frequency counting, frequent-word selection and
parallel correct/error dataset emission.

Tokenization is whitespace splitting plus stripping of surrounding
punctuation (including the Bengali danda); tokens without a single
Bengali codepoint are dropped. Input text is NFC-normalized at ingest so
differently encoded spellings of one word count together.

Emission is deterministic and order-independent: every word variant gets
its own seed derived from the global seed and the record index, so the
output bytes do not depend on the number of workers.
"""

from __future__ import annotations

import json
import sys
import unicodedata
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .generator import EditKind, ErrorConfig, GeneratedError, generate
from .rng import derive_word_seed
from .rules import RuleSet
from .tables import ErrorTables

_DANDAS = "।॥"  # । ॥


class DecodeError(Exception):
    """Invalid UTF-8 in a corpus file under the strict policy."""

    def __init__(self, path: str, byte_offset: int, reason: str) -> None:
        super().__init__(f"{path}: invalid UTF-8 at byte {byte_offset}: {reason}")
        self.path = path
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, int]
    total_tokens: int


def _is_bengali(ch: str) -> bool:
    return "ঀ" <= ch <= "৿"


def _clean_token(token: str) -> str:
    start = 0
    end = len(token)
    while start < end:
        ch = token[start]
        if ch in _DANDAS or unicodedata.category(ch).startswith(("P", "S")):
            start += 1
        else:
            break
    while end > start:
        ch = token[end - 1]
        if ch in _DANDAS or unicodedata.category(ch).startswith(("P", "S")):
            end -= 1
        else:
            break
    return token[start:end]


def tokenize(text: str) -> Iterator[str]:
    """Bengali tokens of ``text``: whitespace-split, punctuation-stripped,
    NFC-normalized; tokens with no Bengali codepoint are dropped."""
    for raw in text.split():
        token = _clean_token(unicodedata.normalize("NFC", raw))
        if token and any(_is_bengali(ch) for ch in token):
            yield token


def count_frequencies(lines: Iterable[str]) -> FrequencyTable:
    """Count Bengali tokens over an iterable of text lines."""
    counts: Counter[str] = Counter()
    total = 0
    for line in lines:
        for token in tokenize(line):
            counts[token] += 1
            total += 1
    return FrequencyTable(dict(counts), total)


def read_lines(
    path: str | Path, errors: str = "replace"
) -> Iterator[str]:
    """Lines of a UTF-8 text file.

    ``errors="replace"`` substitutes U+FFFD and keeps going (the
    replacement character is not Bengali, so damaged tokens drop out);
    ``errors="strict"`` raises DecodeError with the byte offset.
    """
    if errors not in ("replace", "strict"):
        raise ValueError("errors must be 'replace' or 'strict'")
    if errors == "strict":
        data = Path(path).read_bytes()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(str(path), exc.start, exc.reason) from None
        yield from text.splitlines()
        return
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            yield line


def select_frequent(table: FrequencyTable, threshold: int) -> list[str]:
    """Words appearing strictly more than ``threshold`` times, most
    frequent first, ties in codepoint order."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    picked = [(count, word) for word, count in table.counts.items() if count > threshold]
    picked.sort(key=lambda item: (-item[0], item[1]))
    return [word for _, word in picked]


def save_frequencies(table: FrequencyTable, sink: IO[str]) -> None:
    """Persist as ``word<TAB>count``, descending count, ties in codepoint
    order."""
    rows = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    for word, count in rows:
        sink.write(f"{word}\t{count}\n")


@dataclass
class EmitSummary:
    records: int = 0
    words: int = 0
    unchanged: int = 0
    edits_by_kind: dict[str, int] = field(default_factory=dict)
    edits_by_rule: dict[int, int] = field(default_factory=dict)
    records_by_edit_count: dict[int, int] = field(default_factory=dict)

    def add(self, result: GeneratedError) -> None:
        self.records += 1
        if not result.edits:
            self.unchanged += 1
        n = len(result.edits)
        self.records_by_edit_count[n] = self.records_by_edit_count.get(n, 0) + 1
        for edit in result.edits:
            kind = edit.kind.value
            self.edits_by_kind[kind] = self.edits_by_kind.get(kind, 0) + 1
            if edit.kind == EditKind.CONJUNCT_RULE and edit.rule_id is not None:
                self.edits_by_rule[edit.rule_id] = (
                    self.edits_by_rule.get(edit.rule_id, 0) + 1
                )


def record_to_json(result: GeneratedError, word_seed: int) -> str:
    edits = []
    for e in result.edits:
        obj = {
            "kind": e.kind.value,
            "unit_index": e.unit_index,
            "before": e.before,
            "after": e.after,
        }
        if e.rule_id is not None:
            obj["rule_id"] = e.rule_id
        edits.append(obj)
    return json.dumps(
        {
            "original": result.original,
            "errored": result.errored,
            "edits": edits,
            "word_seed": word_seed,
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


# module-level state for worker processes (set once per worker)
_WORKER: dict = {}


def _worker_init(cfg: ErrorConfig, tables: ErrorTables, rules: RuleSet) -> None:
    _WORKER["cfg"] = cfg
    _WORKER["tables"] = tables
    _WORKER["rules"] = rules


def _worker_generate(task: tuple[str, int]) -> tuple[GeneratedError, int]:
    word, word_seed = task
    result = generate(word, _WORKER["cfg"], _WORKER["tables"], _WORKER["rules"], word_seed)
    return result, word_seed


def emit_parallel(
    words: list[str],
    cfg: ErrorConfig,
    tables: ErrorTables,
    rules: RuleSet,
    variants_per_word: int = 2,
    sink: IO[str] = sys.stdout,
    format: str = "jsonl",
    workers: int = 1,
) -> EmitSummary:
    """Write one record per (word, variant) to ``sink``.

    Record v of word i uses the seed
    ``derive_word_seed(cfg.seed, i * variants_per_word + v)``, so output
    bytes are identical across reruns and across any worker count.
    """
    if variants_per_word < 1:
        raise ValueError("variants_per_word must be >= 1")
    if format not in ("jsonl", "tsv"):
        raise ValueError("format must be 'jsonl' or 'tsv'")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    tasks = [
        (word, derive_word_seed(cfg.seed, i * variants_per_word + v))
        for i, word in enumerate(words)
        for v in range(variants_per_word)
    ]

    summary = EmitSummary(words=len(words))

    def _write(result: GeneratedError, word_seed: int) -> None:
        if format == "jsonl":
            sink.write(record_to_json(result, word_seed) + "\n")
        else:
            sink.write(f"{result.original}\t{result.errored}\n")
        summary.add(result)

    if workers == 1 or len(tasks) < 2 * workers:
        for word, word_seed in tasks:
            _write(generate(word, cfg, tables, rules, word_seed), word_seed)
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_worker_init,
            initargs=(cfg, tables, rules),
        ) as pool:
            chunk = max(64, len(tasks) // (workers * 8))
            for result, word_seed in pool.map(_worker_generate, tasks, chunksize=chunk):
                _write(result, word_seed)
    return summary
