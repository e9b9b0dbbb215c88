"""Ordered conjunct rewrite rules with first-match-wins precedence.

Rules are data (``rules.tsv``): an ordered list of matcher kind +
parameters + rewrite templates. ``match_rule`` scans them in order for a
cluster position in a word and returns the candidate rewrites of the
first rule that applies, or ``None``. A rule whose rewrites would all
equal the original text produces nothing and the scan continues; the
explicit ``=`` template means "applies, keep unchanged" and stops the
scan.

Where a rule says letters swap with their interchangeable partners, the
phonetic table supplies the partner sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

from .grapheme import (
    GraphemeKind,
    GraphemeUnit,
    SegmentedWord,
    cluster_letters,
    join_letters,
)
from .tables import ErrorTables, ParseError, ValidationError, _read_lines, default_data_dir

RULES_FILE = "rules.tsv"

_KINDS = (
    "literal",
    "ya_phala",
    "ba_phala",
    "anchor",
    "nga_insert",
    "geminate",
    "letter_class",
)

_KEEP = "="  # template token: rule applies but rewrites nothing


@dataclass(frozen=True)
class ConjunctContext:
    """A rewrite site: the unit at ``index`` plus its word context."""

    word: SegmentedWord
    index: int

    @property
    def unit(self) -> GraphemeUnit:
        return self.word.units[self.index]

    @property
    def at_word_start(self) -> bool:
        return self.index == 0

    @property
    def at_word_end(self) -> bool:
        return self.index == len(self.word.units) - 1

    @property
    def next_unit(self) -> GraphemeUnit | None:
        units = self.word.units
        return units[self.index + 1] if self.index + 1 < len(units) else None

    @property
    def prev_unit(self) -> GraphemeUnit | None:
        return self.word.units[self.index - 1] if self.index > 0 else None


@dataclass(frozen=True)
class RuleOutcome:
    """Candidate rewrites for the unit span ``[span_start, span_end)``."""

    rule_id: int
    candidates: tuple[str, ...]
    span_start: int
    span_end: int


@dataclass(frozen=True)
class Rule:
    rule_id: int
    kind: str
    params: dict[str, str]
    branches: dict[str, tuple[str, ...]]


def _span_text(ctx: ConjunctContext, span_end: int) -> str:
    return "".join(u.text for u in ctx.word.units[ctx.index : span_end])


def _finish(
    ctx: ConjunctContext, rule_id: int, candidates: list[str], span_end: int
) -> RuleOutcome | None:
    original = _span_text(ctx, span_end)
    seen: dict[str, None] = {}
    for cand in candidates:
        if cand != original:
            seen.setdefault(cand)
    if not seen:
        return None
    return RuleOutcome(rule_id, tuple(seen), ctx.index, span_end)


def _interchange(tables: ErrorTables, letter: str) -> tuple[str, ...]:
    return tables.phonetic_lookup.get(letter, ())


def _next_is(ctx: ConjunctContext, text: str) -> bool:
    nxt = ctx.next_unit
    return (
        nxt is not None and nxt.kind == GraphemeKind.SIMPLE and nxt.text == text
    )


class _Blocked:
    """Sentinel: a rule applied but keeps the cluster unchanged."""


_BLOCKED = _Blocked()


def _match_literal(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT or unit.text != rule.params["cluster"]:
        return None
    branch = "initial" if ctx.at_word_start else "other"
    templates = rule.branches.get(branch)
    if templates is None:
        templates = rule.branches.get("any")
    if templates is None:
        return None
    if templates == (_KEEP,):
        return _BLOCKED
    span_end = ctx.index + 1
    if rule.params.get("absorb_on") == branch and _next_is(ctx, "া"):
        span_end += 1
    return _finish(ctx, rule.rule_id, list(templates), span_end)


def _match_ya_phala(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT:
        return None
    letters = cluster_letters(unit.text)
    if len(letters) < 2 or letters[-1] != "য":  # য
        return None
    stem = letters[:-1]
    if ctx.at_word_end:
        # dropped at the end of a word: typed flat as a doubled or single
        # consonant, with interchange variants of the consonant
        last = stem[-1]
        candidates: list[str] = []
        for variant in (last, *_interchange(tables, last)):
            base = join_letters(stem[:-1] + [variant])
            candidates.append(base + variant)
            candidates.append(base)
        return _finish(ctx, rule.rule_id, candidates, ctx.index + 1)
    stem_text = join_letters(stem)
    candidates = [stem_text + "া", stem_text + "ে"]  # +া, +ে
    span_end = ctx.index + 1
    if _next_is(ctx, "া"):
        span_end += 1
    return _finish(ctx, rule.rule_id, candidates, span_end)


def _match_ba_phala(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT:
        return None
    letters = cluster_letters(unit.text)
    if len(letters) < 2 or letters[-1] != "ব":  # ব
        return None
    return _finish(ctx, rule.rule_id, [join_letters(letters[:-1])], ctx.index + 1)


def _match_anchor(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT:
        return None
    letters = cluster_letters(unit.text)
    anchor = rule.params["anchor"]
    position = rule.params.get("position", "any")
    if position == "first":
        matched = letters[0] == anchor
    elif position == "edge":
        matched = letters[0] == anchor or letters[-1] == anchor
    else:
        matched = anchor in letters
    if not matched:
        return None
    anchor_to = rule.params.get("anchor_to")
    min_changes = int(rule.params.get("min_changes", "1"))
    options: list[tuple[str, ...]] = []
    for letter in letters:
        if letter == anchor:
            options.append((anchor_to,) if anchor_to else (letter,))
        else:
            options.append((letter, *_interchange(tables, letter)))
    candidates = []
    for combo in itertools.product(*options):
        changes = sum(1 for got, orig in zip(combo, letters) if got != orig)
        if changes < max(min_changes, 1):
            continue
        candidates.append(join_letters(list(combo)))
    return _finish(ctx, rule.rule_id, candidates, ctx.index + 1)


def _match_nga_insert(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    after = rule.params["after"]
    insert = rule.params["insert"]
    if not _next_is(ctx, rule.params["requires_next"]):
        return None
    if unit.kind == GraphemeKind.SIMPLE:
        if unit.text != after:
            return None
        letters = [after]
        pos = 0
    else:
        letters = cluster_letters(unit.text)
        pos = -1
        for i, letter in enumerate(letters):
            if letter == after and (i + 1 >= len(letters) or letters[i + 1] != insert):
                pos = i
                break
        if pos < 0:
            return None
    grown = letters[: pos + 1] + [insert] + letters[pos + 1 :]
    return _finish(ctx, rule.rule_id, [join_letters(grown)], ctx.index + 1)


def _match_geminate(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT:
        return None
    letters = cluster_letters(unit.text)
    if len(letters) != 2 or letters[0] != letters[1]:
        return None
    letter = letters[0]
    candidates = [letter]
    for variant in _interchange(tables, letter):
        candidates.append(join_letters([variant, variant]))
    return _finish(ctx, rule.rule_id, candidates, ctx.index + 1)


def _match_letter_class(rule: Rule, ctx: ConjunctContext, tables: ErrorTables):
    unit = ctx.unit
    if unit.kind != GraphemeKind.CONJUNCT:
        return None
    letters = cluster_letters(unit.text)
    class_letters = rule.params["letters"].split(",")
    if not any(letter in class_letters for letter in letters):
        return None
    options = [(letter, *_interchange(tables, letter)) for letter in letters]
    candidates = []
    for combo in itertools.product(*options):
        if sum(1 for got, orig in zip(combo, letters) if got != orig) < 1:
            continue
        candidates.append(join_letters(list(combo)))
    return _finish(ctx, rule.rule_id, candidates, ctx.index + 1)


_MATCHERS = {
    "literal": _match_literal,
    "ya_phala": _match_ya_phala,
    "ba_phala": _match_ba_phala,
    "anchor": _match_anchor,
    "nga_insert": _match_nga_insert,
    "geminate": _match_geminate,
    "letter_class": _match_letter_class,
}


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]

    def match(self, ctx: ConjunctContext, tables: ErrorTables) -> RuleOutcome | None:
        """Outcome of the first applicable rule, or None."""
        for rule in self.rules:
            result = _MATCHERS[rule.kind](rule, ctx, tables)
            if result is _BLOCKED:
                return None
            if result is not None:
                return result
        return None

    def explain(
        self, ctx: ConjunctContext, tables: ErrorTables
    ) -> tuple[int, str, RuleOutcome | None]:
        """(rule_id, status, outcome) of the stopping rule; status is
        "fired" or "kept"; (0, "none", None) when nothing applies."""
        for rule in self.rules:
            result = _MATCHERS[rule.kind](rule, ctx, tables)
            if result is _BLOCKED:
                return rule.rule_id, "kept", None
            if result is not None:
                return rule.rule_id, "fired", result
        return 0, "none", None

    def without(self, rule_id: int) -> "RuleSet":
        return RuleSet(tuple(r for r in self.rules if r.rule_id != rule_id))


def match_rule(
    ctx: ConjunctContext, tables: ErrorTables, rules: RuleSet
) -> RuleOutcome | None:
    return rules.match(ctx, tables)


def apply_outcome(
    word: SegmentedWord, outcome: RuleOutcome, choice_index: int
) -> str:
    """Word string with the outcome's span replaced by the chosen
    candidate. Raises IndexError on a bad choice index."""
    candidate = outcome.candidates[choice_index]
    units = word.units
    prefix = "".join(u.text for u in units[: outcome.span_start])
    suffix = "".join(u.text for u in units[outcome.span_end :])
    return prefix + candidate + suffix


def _parse_params(field: str, path: Path, lineno: int) -> dict[str, str]:
    if field == "-":
        return {}
    params: dict[str, str] = {}
    for piece in field.split(";"):
        if "=" not in piece:
            raise ParseError(path, lineno, f"bad parameter {piece!r}")
        key, value = piece.split("=", 1)
        params[key] = value
    return params


def _parse_templates(field: str, path: Path, lineno: int) -> dict[str, tuple[str, ...]]:
    if field == "-":
        return {}
    branches: dict[str, tuple[str, ...]] = {}
    for piece in field.split("|"):
        if ":" not in piece:
            raise ParseError(path, lineno, f"bad template branch {piece!r}")
        branch, candidates = piece.split(":", 1)
        if branch in branches:
            raise ValidationError(path, lineno, f"duplicate branch {branch!r}")
        branches[branch] = tuple(candidates.split(","))
    return branches


def load_rules(path: str | Path | None = None) -> RuleSet:
    """Load the ordered rule list from ``path`` (default: packaged data)."""
    base = Path(path) if path is not None else default_data_dir()
    file = base / RULES_FILE
    rules: list[Rule] = []
    seen_ids: set[int] = set()
    for lineno, line in _read_lines(file):
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(file, lineno, "expected id<TAB>kind<TAB>params<TAB>templates")
        id_field, kind, params_field, templates_field = parts
        try:
            rule_id = int(id_field)
        except ValueError:
            raise ParseError(file, lineno, f"bad rule id {id_field!r}") from None
        if rule_id < 1:
            raise ValidationError(file, lineno, "rule id must be positive")
        if rule_id in seen_ids:
            raise ValidationError(file, lineno, f"duplicate rule id {rule_id}")
        if kind not in _KINDS:
            raise ValidationError(file, lineno, f"unknown matcher kind {kind!r}")
        seen_ids.add(rule_id)
        rules.append(
            Rule(
                rule_id=rule_id,
                kind=kind,
                params=_parse_params(params_field, file, lineno),
                branches=_parse_templates(templates_field, file, lineno),
            )
        )
    return RuleSet(tuple(rules))


def conjunct_sites(word: SegmentedWord) -> list[int]:
    """Unit indices the rewrite pass visits: conjuncts, plus bare ঙ
    (the nga_insert rule applies to it outside any cluster)."""
    sites = []
    for i, unit in enumerate(word.units):
        if unit.kind == GraphemeKind.CONJUNCT or unit.text == "ঙ":
            sites.append(i)
    return sites
