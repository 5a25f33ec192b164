"""Column schemas: which CSV headers hold which analytic roles.

A schema document is INI-style, one section per column::

    [Total Costs]
    type = money
    role = cost
    nullable = false
    aliases = Total Cost | TOTAL_COSTS
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from boat.errors import DuplicateFieldError, HeaderMismatchError, MissingRoleError, SchemaSyntaxError

SEMANTIC_TYPES = ("text", "integer", "year", "money")
ROLES = ("year", "county", "facility", "age_group", "diagnosis", "procedure", "cost")
_KEYS = {"type", "role", "nullable", "aliases"}
_BOOLS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}
_NO_DEFAULT = "\x00no-default-section"


@dataclass(frozen=True)
class FieldSpec:
    name: str
    semantic_type: str
    role: str | None = None
    nullable: bool = False
    aliases: tuple[str, ...] = ()

    @property
    def headers(self) -> tuple[str, ...]:
        return (self.name, *self.aliases)


@dataclass(frozen=True)
class ColumnSchema:
    fields: tuple[FieldSpec, ...]
    required_roles: frozenset[str] = frozenset(ROLES)

    def __post_init__(self):
        seen: set[str] = set()
        for f in self.fields:
            for h in f.headers:
                if h in seen:
                    raise DuplicateFieldError(h)
                seen.add(h)
        for role in sorted(self.required_roles):
            bound = [f for f in self.fields if f.role == role]
            if not bound:
                raise MissingRoleError(role)
            if len(bound) > 1:
                raise SchemaSyntaxError(f"role {role!r} is bound to more than one field")

    @property
    def roles(self) -> dict[str, str]:
        return {f.role: f.name for f in self.fields if f.role}

    def by_role(self, role: str) -> FieldSpec:
        for f in self.fields:
            if f.role == role:
                return f
        raise MissingRoleError(role)

    def match_header(self, header: Sequence[str]) -> dict[str, int]:
        """Field name -> column index. Exact, case-sensitive matching."""
        position = {h: i for i, h in enumerate(header)}
        found: dict[str, int] = {}
        missing = []
        for f in self.fields:
            idx = next((position[h] for h in f.headers if h in position), None)
            if idx is None:
                missing.append(f.name)
            else:
                found[f.name] = idx
        if missing:
            raise HeaderMismatchError(missing)
        return found


def _locate(lines: list[str], section: str, key: str | None = None) -> int | None:
    inside = False
    for no, line in enumerate(lines, 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            if inside and key is not None:
                return None
            inside = s[1:-1] == section
            if inside and key is None:
                return no
        elif inside and key is not None and s.split("=", 1)[0].split(":", 1)[0].strip().lower() == key:
            return no
    return None


def load_schema(document: str, required_roles: Sequence[str] = ROLES) -> ColumnSchema:
    parser = configparser.ConfigParser(default_section=_NO_DEFAULT, interpolation=None, strict=True)
    try:
        parser.read_string(document)
    except configparser.DuplicateSectionError as exc:
        raise DuplicateFieldError(exc.section) from exc
    except configparser.DuplicateOptionError as exc:
        raise SchemaSyntaxError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno) from exc
    except configparser.MissingSectionHeaderError as exc:
        raise SchemaSyntaxError("content before the first [field] header", exc.lineno) from exc
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise SchemaSyntaxError("malformed line", line) from exc

    lines = document.splitlines()
    fields = []
    for name in parser.sections():
        sec = parser[name]
        if not name.strip():
            raise SchemaSyntaxError("empty field name", _locate(lines, name))
        for key in sec:
            if key not in _KEYS:
                raise SchemaSyntaxError(f"unknown key {key!r} in [{name}]", _locate(lines, name, key))
        if "type" not in sec:
            raise SchemaSyntaxError(f"[{name}] has no type", _locate(lines, name))
        stype = sec["type"].strip()
        if stype not in SEMANTIC_TYPES:
            raise SchemaSyntaxError(f"[{name}] type must be one of {SEMANTIC_TYPES}, got {stype!r}",
                                    _locate(lines, name, "type"))
        role = sec.get("role", "").strip() or None
        if role is not None and role not in ROLES:
            raise SchemaSyntaxError(f"[{name}] unknown role {role!r}", _locate(lines, name, "role"))
        nullable_raw = sec.get("nullable", "false").strip().lower()
        if nullable_raw not in _BOOLS:
            raise SchemaSyntaxError(f"[{name}] nullable must be true/false, got {nullable_raw!r}",
                                    _locate(lines, name, "nullable"))
        aliases = tuple(a.strip() for a in sec.get("aliases", "").split("|") if a.strip())
        fields.append(FieldSpec(name, stype, role, _BOOLS[nullable_raw], aliases))
    return ColumnSchema(tuple(fields), frozenset(required_roles))


def default_schema_text() -> str:
    return resources.files("boat.ingest").joinpath("default_schema.ini").read_text(encoding="utf-8")


def default_schema() -> ColumnSchema:
    return load_schema(default_schema_text())


def load_schema_file(path: str | os.PathLike | None = None) -> ColumnSchema:
    """Schema from ``path``, else ``$BOAT_SCHEMA``, else the bundled default."""
    path = path or os.environ.get("BOAT_SCHEMA")
    if not path:
        return default_schema()
    return load_schema(Path(path).read_text(encoding="utf-8"))
