"""Per-word stochastic error pipeline.

Four passes over a segmented word, in a fixed order:

1. conjunct rewrite: every rewrite site draws Bernoulli(jp); on success
   the first matching rule supplies candidates and one is chosen
   uniformly.
2. phonetic replacement: every untouched simple unit draws
   Bernoulli(pp); on success one interchange partner is chosen.
3. adjacency replacement: words of at least ``min_len_for_mp_ip`` units
   draw one Bernoulli(mp); on success one eligible site and one
   neighboring-key replacement are chosen uniformly.
4. adjacency insertion: same gate with ip; the chosen letter is placed
   right after its trigger unit.

A unit receives at most one replacing edit. All randomness comes from a
SplitMix64 stream seeded with the word seed, so equal inputs give equal
outputs on any platform.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .grapheme import GraphemeKind, SegmentedWord, segment
from .rng import SplitMix64, derive_word_seed
from .rules import ConjunctContext, RuleSet, conjunct_sites
from .tables import ErrorTables

__all__ = [
    "EditKind",
    "EditRecord",
    "ErrorConfig",
    "GeneratedError",
    "CapacityError",
    "generate",
    "reachable_set",
    "derive_word_seed",
]

DEFAULT_PP = 0.25
DEFAULT_MP = 0.2
DEFAULT_JP = 0.3
DEFAULT_IP = 0.2


class EditKind(str, Enum):
    PHONETIC = "phonetic"
    ADJACENCY = "adjacency"
    INSERTION = "insertion"
    CONJUNCT_RULE = "conjunct_rule"


@dataclass(frozen=True)
class ErrorConfig:
    """Probabilities and reproducibility knobs of the pipeline."""

    pp: float = DEFAULT_PP
    mp: float = DEFAULT_MP
    jp: float = DEFAULT_JP
    ip: float = DEFAULT_IP
    seed: int = 0
    min_len_for_mp_ip: int = 4
    max_mp_per_word: int = 1
    max_ip_per_word: int = 1

    def __post_init__(self) -> None:
        for name in ("pp", "mp", "jp", "ip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.min_len_for_mp_ip < 1:
            raise ValueError("min_len_for_mp_ip must be >= 1")
        if self.max_mp_per_word < 0 or self.max_ip_per_word < 0:
            raise ValueError("per-word caps must be >= 0")


@dataclass(frozen=True)
class EditRecord:
    """One applied error; ``unit_index`` refers to the original
    segmentation. Insertions have an empty ``before`` and place ``after``
    behind the trigger unit."""

    kind: EditKind
    unit_index: int
    before: str
    after: str
    rule_id: int | None = None


@dataclass(frozen=True)
class GeneratedError:
    original: str
    errored: str
    edits: tuple[EditRecord, ...]


class CapacityError(Exception):
    """Raised when exhaustive enumeration would exceed its bound."""


def _consume_span(units, start: int, before: str) -> int:
    """End (exclusive) of the unit span whose texts concatenate to
    ``before``, starting at ``start``."""
    acc = ""
    i = start
    while i < len(units) and len(acc) < len(before):
        acc += units[i].text
        i += 1
    if acc != before:
        raise ValueError(f"edit does not align with segmentation at unit {start}")
    return i


def _materialize(seg: SegmentedWord, edits: list[EditRecord]) -> str:
    units = seg.units
    replacement: dict[int, str] = {}
    skip: set[int] = set()
    insertion: dict[int, str] = {}
    for edit in edits:
        if edit.kind == EditKind.INSERTION:
            insertion[edit.unit_index] = edit.after
        else:
            end = _consume_span(units, edit.unit_index, edit.before)
            replacement[edit.unit_index] = edit.after
            skip.update(range(edit.unit_index + 1, end))
    out: list[str] = []
    for i, unit in enumerate(units):
        if i in replacement:
            out.append(replacement[i])
        elif i not in skip:
            out.append(unit.text)
        if i in insertion:
            out.append(insertion[i])
    return "".join(out)


def replay(original: str, edits: list[EditRecord] | tuple[EditRecord, ...]) -> str:
    """Re-apply an edit trace to its original word."""
    return _materialize(segment(original), list(edits))


def _sorted_edits(edits: list[EditRecord]) -> tuple[EditRecord, ...]:
    # insertions sort after a replacement at the same index: the inserted
    # letter lands behind the (possibly rewritten) unit
    return tuple(
        sorted(edits, key=lambda e: (e.unit_index, e.kind == EditKind.INSERTION))
    )


def generate(
    word: str,
    cfg: ErrorConfig,
    tables: ErrorTables,
    rules: RuleSet,
    word_seed: int,
) -> GeneratedError:
    """Run the four-pass pipeline on one word.

    Deterministic: equal (word, cfg, tables, rules, word_seed) yield an
    identical result. A word with no eligible site comes back unchanged
    with an empty edit list.
    """
    seg = segment(word)
    units = seg.units
    if not units or (cfg.jp == 0.0 and cfg.pp == 0.0 and cfg.mp == 0.0 and cfg.ip == 0.0):
        return GeneratedError(word, word, ())

    rng = SplitMix64(word_seed)
    edits: list[EditRecord] = []
    edited = bytearray(len(units))     # units carrying a replacing edit
    in_span = bytearray(len(units))    # units swallowed by a rewrite span

    # 1. conjunct rewrite pass
    for i in conjunct_sites(seg):
        if not rng.bernoulli(cfg.jp):
            continue
        outcome = rules.match(ConjunctContext(seg, i), tables)
        if outcome is None:
            continue
        choice = rng.choice_index(len(outcome.candidates))
        before = "".join(u.text for u in units[outcome.span_start : outcome.span_end])
        edits.append(
            EditRecord(
                EditKind.CONJUNCT_RULE,
                outcome.span_start,
                before,
                outcome.candidates[choice],
                rule_id=outcome.rule_id,
            )
        )
        for j in range(outcome.span_start, outcome.span_end):
            edited[j] = 1
            in_span[j] = 1

    # 2. phonetic replacement pass
    phonetic = tables.phonetic_lookup
    for i, unit in enumerate(units):
        if unit.kind != GraphemeKind.SIMPLE or edited[i]:
            continue
        if not rng.bernoulli(cfg.pp):
            continue
        candidates = phonetic.get(unit.text)
        if not candidates:
            continue
        choice = rng.choice_index(len(candidates))
        edits.append(EditRecord(EditKind.PHONETIC, i, unit.text, candidates[choice]))
        edited[i] = 1

    eligible_word = len(units) >= cfg.min_len_for_mp_ip

    # 3. adjacency replacement pass (one per word at most)
    if eligible_word and cfg.max_mp_per_word >= 1 and rng.bernoulli(cfg.mp):
        adjacency = tables.adjacency_lookup
        sites = [
            i
            for i, unit in enumerate(units)
            if unit.kind == GraphemeKind.SIMPLE
            and not edited[i]
            and adjacency.get(unit.text)
        ]
        if sites:
            site = sites[rng.choice_index(len(sites))]
            candidates = adjacency[units[site].text]
            choice = rng.choice_index(len(candidates))
            edits.append(
                EditRecord(EditKind.ADJACENCY, site, units[site].text, candidates[choice])
            )
            edited[site] = 1

    # 4. adjacency insertion pass (one per word at most)
    if eligible_word and cfg.max_ip_per_word >= 1 and rng.bernoulli(cfg.ip):
        insertion = tables.insertion_lookup
        sites = [
            i
            for i, unit in enumerate(units)
            if unit.kind == GraphemeKind.SIMPLE
            and not in_span[i]
            and insertion.get(unit.text)
        ]
        if sites:
            site = sites[rng.choice_index(len(sites))]
            letters = insertion[units[site].text]
            choice = rng.choice_index(len(letters))
            edits.append(EditRecord(EditKind.INSERTION, site, "", letters[choice]))

    if not edits:
        return GeneratedError(word, word, ())
    ordered = _sorted_edits(edits)
    return GeneratedError(word, _materialize(seg, list(ordered)), ordered)


# ---------------------------------------------------------------------------
# exhaustive oracle


def _splice(source_units, assignment: dict[int, tuple[int, str]], insertions) -> str:
    """Independent materializer for the oracle: ``assignment`` maps a
    span start to (span_end, replacement); ``insertions`` maps a unit
    index to the inserted letter. Insertion triggers never sit inside a
    multi-unit span."""
    out = []
    i = 0
    n = len(source_units)
    while i < n:
        if i in assignment:
            end, text = assignment[i]
            out.append(text)
            if end - 1 in insertions:
                out.append(insertions[end - 1])
            i = end
        else:
            out.append(source_units[i].text)
            if i in insertions:
                out.append(insertions[i])
            i += 1
    return "".join(out)


def reachable_set(
    word: str,
    cfg: ErrorConfig,
    tables: ErrorTables,
    rules: RuleSet,
    max_size: int = 500_000,
) -> set[str]:
    """Every string the pipeline can emit for ``word`` given the error
    classes whose probability is nonzero, by brute-force enumeration.

    Raises CapacityError when the enumeration would exceed ``max_size``
    strings. Intended as a test oracle for short words.
    """
    seg = segment(word)
    units = seg.units
    results: set[str] = set()

    jp_on = cfg.jp > 0.0
    pp_on = cfg.pp > 0.0
    eligible_word = len(units) >= cfg.min_len_for_mp_ip
    mp_on = cfg.mp > 0.0 and eligible_word and cfg.max_mp_per_word >= 1
    ip_on = cfg.ip > 0.0 and eligible_word and cfg.max_ip_per_word >= 1

    # per-site conjunct options: None (no rewrite) or (span_end, text)
    site_options: list[list[tuple[int, str] | None]] = []
    site_indices: list[int] = []
    if jp_on:
        for i in conjunct_sites(seg):
            outcome = rules.match(ConjunctContext(seg, i), tables)
            if outcome is None:
                continue
            options: list[tuple[int, str] | None] = [None]
            options.extend((outcome.span_end, c) for c in outcome.candidates)
            site_indices.append(i)
            site_options.append(options)

    phonetic = tables.phonetic_lookup
    adjacency = tables.adjacency_lookup
    insertion = tables.insertion_lookup

    for conjunct_combo in itertools.product(*site_options):
        assignment: dict[int, tuple[int, str]] = {}
        spanned: set[int] = set()
        for i, picked in zip(site_indices, conjunct_combo):
            if picked is None:
                continue
            end, text = picked
            assignment[i] = (end, text)
            spanned.update(range(i, end))

        pp_sites: list[tuple[int, tuple[str, ...]]] = []
        if pp_on:
            for i, unit in enumerate(units):
                if unit.kind != GraphemeKind.SIMPLE or i in spanned:
                    continue
                candidates = phonetic.get(unit.text)
                if candidates:
                    pp_sites.append((i, candidates))

        pp_option_lists = [
            [None] + list(candidates) for _, candidates in pp_sites
        ]
        for pp_combo in itertools.product(*pp_option_lists):
            base = dict(assignment)
            edited = set(spanned)
            for (i, _), choice in zip(pp_sites, pp_combo):
                if choice is not None:
                    base[i] = (i + 1, choice)
                    edited.add(i)

            mp_choices: list[tuple[int, str] | None] = [None]
            if mp_on:
                for i, unit in enumerate(units):
                    if (
                        unit.kind == GraphemeKind.SIMPLE
                        and i not in edited
                        and adjacency.get(unit.text)
                    ):
                        mp_choices.extend((i, c) for c in adjacency[unit.text])

            for mp_pick in mp_choices:
                with_mp = dict(base)
                if mp_pick is not None:
                    i, text = mp_pick
                    with_mp[i] = (i + 1, text)

                ip_choices: list[tuple[int, str] | None] = [None]
                if ip_on:
                    for i, unit in enumerate(units):
                        if (
                            unit.kind == GraphemeKind.SIMPLE
                            and i not in spanned
                            and insertion.get(unit.text)
                        ):
                            ip_choices.extend((i, c) for c in insertion[unit.text])

                for ip_pick in ip_choices:
                    insertions = {}
                    if ip_pick is not None:
                        insertions = {ip_pick[0]: ip_pick[1]}
                    results.add(_splice(units, with_mp, insertions))
                    if len(results) > max_size:
                        raise CapacityError(
                            f"reachable set for {word!r} exceeds {max_size}"
                        )
    return results
