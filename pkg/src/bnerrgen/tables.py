"""Error-data tables: conjunct inventory, phonetic interchange,
key-adjacency replacement and key-adjacency insertion.

File format (UTF-8, one entry per line, ``#`` starts a comment line):

    key<TAB>replacement1,replacement2,...

The conjunct inventory file has a single field per line. An empty
replacement field is allowed only in the phonetic table and means "this
letter has no interchange partner". Loaded tables are immutable and safe
to share across workers.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib.resources import files as _package_files
from pathlib import Path

from .grapheme import GraphemeKind, GraphemeUnit, segment

TABLE_FILES = {
    "conjuncts": "juktakkhor.tsv",
    "phonetic": "phonetic.tsv",
    "adjacency": "adjacency.tsv",
    "insertion": "insertion.tsv",
}

# Nukta-composed letters exist in precomposed and decomposed forms; keys
# are registered under both so lookups hit either spelling.
_NUKTA_PAIRS = (
    ("ড়", "ড়"),
    ("ঢ়", "ঢ়"),
    ("য়", "য়"),
)


class TableError(Exception):
    """Base for table loading problems."""


class MissingFileError(TableError):
    def __init__(self, path: Path) -> None:
        super().__init__(f"table file not found: {path}")
        self.path = path


class ParseError(TableError):
    def __init__(self, path: Path | str, lineno: int, message: str) -> None:
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class ValidationError(TableError):
    def __init__(self, path: Path | str, lineno: int, message: str) -> None:
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def _spelling_variants(key: str) -> set[str]:
    variants = {key}
    for pre, dec in _NUKTA_PAIRS:
        more = set()
        for v in variants:
            if pre in v:
                more.add(v.replace(pre, dec))
            if dec in v:
                more.add(v.replace(dec, pre))
        variants |= more
    return variants


def _alias_lookup(mapping: dict[str, tuple[str, ...]]) -> dict[str, tuple[str, ...]]:
    lookup = dict(mapping)
    for key, values in mapping.items():
        for variant in _spelling_variants(key):
            lookup.setdefault(variant, values)
    return lookup


@dataclass(frozen=True)
class ErrorTables:
    """The four loaded data tables, canonical entry order preserved."""

    conjuncts: tuple[str, ...]
    phonetic: dict[str, tuple[str, ...]]
    adjacency: dict[str, tuple[str, ...]]
    insertion: dict[str, tuple[str, ...]]
    phonetic_lookup: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    adjacency_lookup: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    insertion_lookup: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    conjunct_set: frozenset[str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "phonetic_lookup", _alias_lookup(self.phonetic))
        object.__setattr__(self, "adjacency_lookup", _alias_lookup(self.adjacency))
        object.__setattr__(self, "insertion_lookup", _alias_lookup(self.insertion))
        conjunct_set = frozenset(
            v for entry in self.conjuncts for v in _spelling_variants(entry)
        )
        object.__setattr__(self, "conjunct_set", conjunct_set)

    def is_known_conjunct(self, text: str) -> bool:
        return text in self.conjunct_set


_EMPTY: tuple[str, ...] = ()


def phonetic_candidates(tables: ErrorTables, unit: GraphemeUnit) -> list[str]:
    """Interchange partners for a simple unit; empty when none exist."""
    return list(tables.phonetic_lookup.get(unit.text, _EMPTY))


def adjacency_candidates(tables: ErrorTables, unit: GraphemeUnit) -> list[str]:
    """Neighboring-key replacements for a simple unit."""
    return list(tables.adjacency_lookup.get(unit.text, _EMPTY))


def insertion_candidates(tables: ErrorTables, unit: GraphemeUnit) -> list[str]:
    """Letters prone to slip in right after this unit."""
    return list(tables.insertion_lookup.get(unit.text, _EMPTY))


def _read_lines(path: Path) -> list[tuple[int, str]]:
    if not path.is_file():
        raise MissingFileError(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.lstrip().startswith("#"):
                continue
            out.append((lineno, unicodedata.normalize("NFC", line)))
    return out


def _parse_mapping(
    path: Path, allow_empty_values: bool
) -> dict[str, tuple[str, ...]]:
    mapping: dict[str, tuple[str, ...]] = {}
    for lineno, line in _read_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(path, lineno, "expected key<TAB>replacements")
        key, value_field = parts
        if not key:
            raise ParseError(path, lineno, "empty key")
        if key in mapping:
            raise ValidationError(path, lineno, f"duplicate key {key!r}")
        if value_field:
            values = tuple(v for v in value_field.split(","))
            if any(not v for v in values):
                raise ParseError(path, lineno, "empty replacement in list")
        else:
            values = ()
        if not values and not allow_empty_values:
            raise ValidationError(path, lineno, f"empty replacement list for {key!r}")
        if key in values:
            raise ValidationError(path, lineno, f"self-replacement for {key!r}")
        mapping[key] = values
    return mapping


def _parse_conjuncts(path: Path) -> tuple[str, ...]:
    entries: list[str] = []
    seen: set[str] = set()
    for lineno, line in _read_lines(path):
        entry = line.split("\t")[0]
        if entry in seen:
            raise ValidationError(path, lineno, f"duplicate conjunct {entry!r}")
        seg = segment(entry)
        if (
            seg.irregular
            or len(seg.units) != 1
            or seg.units[0].kind != GraphemeKind.CONJUNCT
        ):
            raise ValidationError(path, lineno, f"not a valid conjunct: {entry!r}")
        seen.add(entry)
        entries.append(entry)
    return tuple(entries)


def default_data_dir() -> Path:
    return Path(str(_package_files("bnerrgen") / "data"))


def load_tables(path: str | Path | None = None) -> ErrorTables:
    """Load and validate the four tables from ``path`` (default: the
    packaged data directory)."""
    base = Path(path) if path is not None else default_data_dir()
    return ErrorTables(
        conjuncts=_parse_conjuncts(base / TABLE_FILES["conjuncts"]),
        phonetic=_parse_mapping(base / TABLE_FILES["phonetic"], allow_empty_values=True),
        adjacency=_parse_mapping(base / TABLE_FILES["adjacency"], allow_empty_values=False),
        insertion=_parse_mapping(base / TABLE_FILES["insertion"], allow_empty_values=False),
    )


def save_tables(tables: ErrorTables, path: str | Path) -> None:
    """Write the canonical table files; loading them back yields equal
    tables."""
    base = Path(path)
    base.mkdir(parents=True, exist_ok=True)
    with open(base / TABLE_FILES["conjuncts"], "w", encoding="utf-8") as fh:
        for entry in tables.conjuncts:
            fh.write(entry + "\n")
    for name, mapping in (
        ("phonetic", tables.phonetic),
        ("adjacency", tables.adjacency),
        ("insertion", tables.insertion),
    ):
        with open(base / TABLE_FILES[name], "w", encoding="utf-8") as fh:
            for key, values in mapping.items():
                fh.write(f"{key}\t{','.join(values)}\n")
