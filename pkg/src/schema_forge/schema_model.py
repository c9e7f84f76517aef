"""JSON values and hierarchical documents.

JSON values are plain Python objects: ``None``, ``bool``, ``int``,
``decimal.Decimal`` (every non-integer number), ``str``, ``list`` and
``dict``. Parsing keeps object key order, rejects duplicate keys and
non-finite constants, and caps nesting depth.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Iterator, Union

MAX_DEPTH = 128

JsonValue = Any
Segment = Union[str, int]


class JsonParseError(ValueError):
    """Raised when text is not exactly one well-formed JSON document."""

    def __init__(self, reason: str, offset: int):
        super().__init__(f"{reason} (byte offset {offset})")
        self.reason = reason
        self.offset = offset


class _DuplicateKey(ValueError):
    pass


def _pairs_hook(pairs):
    obj = dict(pairs)
    if len(obj) != len(pairs):
        seen = set()
        for k, _ in pairs:
            if k in seen:
                raise _DuplicateKey(k)
            seen.add(k)
    return obj


def _reject_constant(name):
    raise ValueError(f"non-finite number {name!r} is not JSON")


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8", "surrogatepass"))


_STRING_RE = re.compile(r'"[^"\\]*(?:\\.[^"\\]*)*"', re.DOTALL)
_BRACKET_RE = re.compile(r"[\[\]{}]")


def _depth_violation(text: str) -> int | None:
    """Char position of the first bracket opening past MAX_DEPTH, if any."""
    depth = 0
    pos = 0
    while pos < len(text):
        m_str = _STRING_RE.search(text, pos)
        stop = m_str.start() if m_str else len(text)
        for m in _BRACKET_RE.finditer(text, pos, stop):
            if m.group() in "[{":
                depth += 1
                if depth > MAX_DEPTH:
                    return m.start()
            else:
                depth -= 1
        if m_str is None:
            break
        pos = m_str.end()
    return None


def parse_json(text: str) -> JsonValue:
    """Parse one JSON document.

    Non-integer numbers become :class:`~decimal.Decimal`. Raises
    :class:`JsonParseError` with a UTF-8 byte offset on any failure,
    including trailing content, duplicate keys, ``NaN``/``Infinity`` and
    nesting deeper than :data:`MAX_DEPTH`.
    """
    if not isinstance(text, str):
        raise TypeError(f"expected str, got {type(text).__name__}")
    # cheap pre-check: depth can only exceed the cap with enough brackets
    if text.count("{") + text.count("[") > MAX_DEPTH:
        pos = _depth_violation(text)
        if pos is not None:
            raise JsonParseError(f"nesting deeper than {MAX_DEPTH}", _byte_offset(text, pos))
    try:
        return json.loads(
            text,
            parse_float=Decimal,
            parse_constant=_reject_constant,
            object_pairs_hook=_pairs_hook,
        )
    except json.JSONDecodeError as exc:
        raise JsonParseError(exc.msg, _byte_offset(text, exc.pos)) from None
    except _DuplicateKey as exc:
        key = exc.args[0]
        pos = text.find(json.dumps(key, ensure_ascii=False))
        raise JsonParseError(f"duplicate object key {key!r}", _byte_offset(text, max(pos, 0))) from None
    except ValueError as exc:
        raise JsonParseError(str(exc), 0) from None
    except RecursionError:
        raise JsonParseError("nesting too deep", 0) from None


def _dump_number(v) -> str:
    if isinstance(v, float):
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError(f"cannot serialize non-finite number {v!r}")
        return repr(v)
    if isinstance(v, Decimal):
        if not v.is_finite():
            raise ValueError(f"cannot serialize non-finite number {v!r}")
        return str(v)
    return str(int(v))


def _dump_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def dumps(value: JsonValue, *, indent: int | None = None) -> str:
    """Serialize a JSON value.

    Compact mode (``indent=None``) uses ``,`` and ``:`` separators with no
    whitespace; pretty mode indents by ``indent`` spaces per level.
    """
    parts: list[str] = []
    _dump(value, parts, indent, 0)
    return "".join(parts)


def _dump(v, out: list[str], indent: int | None, level: int) -> None:
    if v is None:
        out.append("null")
    elif v is True:
        out.append("true")
    elif v is False:
        out.append("false")
    elif isinstance(v, str):
        out.append(_dump_str(v))
    elif isinstance(v, (int, float, Decimal)):
        out.append(_dump_number(v))
    elif isinstance(v, dict):
        if not v:
            out.append("{}")
            return
        out.append("{")
        first = True
        for k, item in v.items():
            if not isinstance(k, str):
                raise TypeError(f"object keys must be str, got {type(k).__name__}")
            if not first:
                out.append(",")
            first = False
            if indent is not None:
                out.append("\n" + " " * (indent * (level + 1)))
                out.append(_dump_str(k) + ": ")
            else:
                out.append(_dump_str(k) + ":")
            _dump(item, out, indent, level + 1)
        if indent is not None:
            out.append("\n" + " " * (indent * level))
        out.append("}")
    elif isinstance(v, (list, tuple)):
        if not v:
            out.append("[]")
            return
        out.append("[")
        for i, item in enumerate(v):
            if i:
                out.append(",")
            if indent is not None:
                out.append("\n" + " " * (indent * (level + 1)))
            _dump(item, out, indent, level + 1)
        if indent is not None:
            out.append("\n" + " " * (indent * level))
        out.append("]")
    else:
        raise TypeError(f"not a JSON value: {type(v).__name__}")


def is_scalar(v: JsonValue) -> bool:
    return not isinstance(v, (dict, list, tuple))


def _is_number(v) -> bool:
    return isinstance(v, (int, float, Decimal)) and not isinstance(v, bool)


def deep_equals(a: JsonValue, b: JsonValue) -> bool:
    """Structural equality: key order ignored, list order kept, numbers by value.

    Booleans never equal numbers, even though ``True == 1`` in Python.
    """
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if _is_number(a) or _is_number(b):
        return _is_number(a) and _is_number(b) and a == b
    if isinstance(a, dict):
        if not isinstance(b, dict) or len(a) != len(b):
            return False
        for k, av in a.items():
            if k not in b or not deep_equals(av, b[k]):
                return False
        return True
    if isinstance(a, (list, tuple)):
        if not isinstance(b, (list, tuple)) or len(a) != len(b):
            return False
        return all(deep_equals(x, y) for x, y in zip(a, b))
    if isinstance(b, (dict, list, tuple)):
        return False
    return type(a) is type(b) and a == b


def blank_schema(filled: JsonValue) -> JsonValue:
    """Copy of *filled* with every value removed but the structure kept.

    Scalars become ``null``; a list keeps a single blanked exemplar taken
    from its first container element, or becomes ``[]`` if it holds only
    scalars.
    """
    if is_scalar(filled):
        raise ValueError("blank_schema needs an object or list, got a scalar")
    return _blank(filled)


def _blank(v):
    if isinstance(v, dict):
        return {k: _blank(item) for k, item in v.items()}
    if isinstance(v, (list, tuple)):
        for item in v:
            if not is_scalar(item):
                return [_blank(item)]
        return []
    return None


@dataclass(frozen=True)
class LeafPath:
    segments: tuple[Segment, ...]
    value: JsonValue


def iter_leaves(v: JsonValue, prefix: tuple = ()) -> Iterator[tuple[tuple, JsonValue]]:
    """Yield ``(segments, scalar)`` pairs depth-first."""
    # explicit stack of reversed children keeps document order without deep generator chains
    stack = [(prefix, v)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, dict):
            stack.extend((path + (k,), item) for k, item in reversed(node.items()))
        elif isinstance(node, (list, tuple)):
            stack.extend((path + (i,), node[i]) for i in range(len(node) - 1, -1, -1))
        else:
            yield path, node


def leaf_map(v: JsonValue) -> dict:
    """``{segments: scalar}`` for every leaf, in document order."""
    out: dict = {}

    def visit(pairs, path):
        # scalars are stored inline so only containers cost a call
        for key, item in pairs:
            if isinstance(item, dict):
                visit(item.items(), path + (key,))
            elif isinstance(item, (list, tuple)):
                visit(enumerate(item), path + (key,))
            else:
                out[path + (key,)] = item

    if isinstance(v, dict):
        visit(v.items(), ())
    elif isinstance(v, (list, tuple)):
        visit(enumerate(v), ())
    else:
        out[()] = v
    return out


def scalar_equals(a: JsonValue, b: JsonValue) -> bool:
    """:func:`deep_equals` restricted to scalars, without the type dispatch."""
    return a == b and (a.__class__ is bool) == (b.__class__ is bool)


def leaf_paths(v: JsonValue) -> list[LeafPath]:
    return [LeafPath(segs, val) for segs, val in iter_leaves(v)]


def resolve(v: JsonValue, segments) -> JsonValue:
    for seg in segments:
        v = v[seg]
    return v


def set_at(v: JsonValue, segments, new) -> None:
    """Replace the value at *segments* in place; empty segments are rejected."""
    if not segments:
        raise ValueError("cannot replace the root in place")
    parent = resolve(v, segments[:-1])
    parent[segments[-1]] = new


def leaf_text(v: JsonValue) -> str:
    """How a scalar reads in prose: strings verbatim, others as JSON."""
    return v if isinstance(v, str) else dumps(v)


# -- hierarchical documents -------------------------------------------------


class LevelType(str, enum.Enum):
    ROOT = "ROOT"
    SECTION = "SECTION"
    SUBSECTION = "SUBSECTION"
    DETAIL_N = "DETAIL_N"

    @classmethod
    def for_level(cls, level: int) -> "LevelType":
        if level < 0:
            raise ValueError(f"negative level {level}")
        return (cls.ROOT, cls.SECTION, cls.SUBSECTION)[level] if level < 3 else cls.DETAIL_N


class ComponentKind(str, enum.Enum):
    PARAGRAPH = "paragraph"
    TABLE = "table"
    CHECKBOX = "checkbox"


CHECKBOX_STATES = ("checked", "unchecked", "na")


@dataclass
class Component:
    """One content element of a node.

    ``payload`` is the paragraph text, the table grid (header row first),
    or ``{"label": ..., "state": ...}`` for a checkbox.
    """

    kind: ComponentKind
    payload: JsonValue

    def __post_init__(self):
        self.kind = ComponentKind(self.kind)
        if self.kind is ComponentKind.PARAGRAPH:
            if not isinstance(self.payload, str):
                raise ValueError("paragraph payload must be text")
        elif self.kind is ComponentKind.TABLE:
            grid = self.payload
            if not grid or not all(isinstance(r, list) for r in grid):
                raise ValueError("table payload must be a non-empty list of rows")
            width = len(grid[0])
            if width < 1 or any(len(r) != width for r in grid):
                raise ValueError("table grid must be rectangular with at least one column")
        else:
            p = self.payload
            if not isinstance(p, dict) or set(p) != {"label", "state"}:
                raise ValueError("checkbox payload must have exactly 'label' and 'state'")
            if p["state"] not in CHECKBOX_STATES:
                raise ValueError(f"checkbox state must be one of {CHECKBOX_STATES}")


@dataclass
class DocNode:
    id: str
    title: str
    level: int
    level_type: LevelType
    components: list[Component] = field(default_factory=list)
    children: list["DocNode"] = field(default_factory=list)
    properties: dict = field(default_factory=lambda: {"variables": {}, "content": ""})

    def walk(self) -> Iterator["DocNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def validate(self) -> None:
        """Check level/type agreement, parent-child levels and id uniqueness."""
        seen: set[str] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if node.level_type is not LevelType.for_level(node.level):
                raise ValueError(f"node {node.id}: level {node.level} is not {node.level_type.value}")
            if node.id in seen:
                raise ValueError(f"duplicate node id {node.id}")
            seen.add(node.id)
            for child in node.children:
                if child.level != node.level + 1:
                    raise ValueError(f"node {child.id}: level {child.level} under level {node.level}")
                stack.append(child)

    def to_json(self) -> dict:
        """Project the tree onto the filled-object layout used in corpora."""
        comps = []
        for idc, comp in enumerate(self.components, start=1):
            entry: dict = {"idc": idc, "component_type": comp.kind.name}
            if comp.kind is ComponentKind.PARAGRAPH:
                entry["text"] = comp.payload
            elif comp.kind is ComponentKind.TABLE:
                entry["rows"] = [list(r) for r in comp.payload]
            else:
                entry["label"] = comp.payload["label"]
                entry["state"] = comp.payload["state"]
            comps.append(entry)
        return {
            "id": self.id,
            "title": self.title,
            "level": self.level,
            "level_type": self.level_type.value,
            "component": comps,
            "children": [c.to_json() for c in self.children],
            "properties": {
                "variables": dict(self.properties.get("variables", {})),
                "content": self.properties.get("content", ""),
            },
        }
