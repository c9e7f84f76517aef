"""Seeded synthesis of (text, blank schema, filled object) benchmark triples."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator

from . import phrases
from .extraction import ANSWER_CLOSE, ANSWER_OPEN, THINK_CLOSE, THINK_OPEN
from .schema_model import (
    CHECKBOX_STATES,
    Component,
    ComponentKind,
    DocNode,
    JsonValue,
    LevelType,
    blank_schema,
    dumps,
    leaf_text,
)

LAYOUTS = ("sequential", "parallel", "combined")
TABLE_STYLES = ("ascii", "xml_like", "pdf_sim")
CHECKBOX_STYLES = ("brackets", "yes_no", "na_variants")


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    domain_label: str = phrases.DOMAINS[0]
    max_depth: int = 3
    children_per_node: tuple[int, int] = (1, 3)
    components_per_node: tuple[int, int] = (1, 3)
    layout: str = "sequential"
    table_style: str = "ascii"
    checkbox_style: str = "brackets"
    filler_density: float = 0.3

    def __post_init__(self):
        if not 1 <= self.max_depth <= 6:
            raise ValueError(f"max_depth must be in [1, 6], got {self.max_depth}")
        for name in ("children_per_node", "components_per_node"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} range ({lo}, {hi}) is empty or below 1")
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.table_style not in TABLE_STYLES:
            raise ValueError(f"unknown table style {self.table_style!r}")
        if self.checkbox_style not in CHECKBOX_STYLES:
            raise ValueError(f"unknown checkbox style {self.checkbox_style!r}")
        if not 0.0 <= self.filler_density <= 1.0:
            raise ValueError(f"filler_density must be in [0, 1], got {self.filler_density}")


@dataclass(frozen=True)
class CorpusTriple:
    id: str
    text: str
    blank: JsonValue
    filled: JsonValue

    def to_json(self) -> dict:
        return {"id": self.id, "text": self.text, "blank": self.blank, "filled": self.filled}


def _rng(config: SynthConfig, stream: str) -> random.Random:
    # str seeds hash through sha512, so streams are stable across processes
    return random.Random(f"schema-forge/{stream}/{config.seed}")


def _tenths(rng: random.Random, lo: int, hi: int) -> Decimal:
    return Decimal(rng.randint(lo, hi)).scaleb(-1)


# -- document generation ----------------------------------------------------


def _paragraph(rng) -> Component:
    text = " ".join([
        f"{rng.choice(phrases.PARAGRAPH_SUBJECTS)} {rng.choice(phrases.PARAGRAPH_VERBS)} "
        f"{rng.choice(phrases.PARAGRAPH_OBJECTS)}.",
        rng.choice(phrases.CONTENT_SENTENCES),
    ])
    return Component(ComponentKind.PARAGRAPH, text)


def _table(rng) -> Component:
    value_cols = rng.sample(phrases.TABLE_VALUE_COLUMNS, rng.randint(1, 2))
    header = ["Parameter", *value_cols, "Unit"]
    grid = [header]
    for name in rng.sample(phrases.TABLE_PARAMETERS, rng.randint(1, 3)):
        row = [name, *(_tenths(rng, 10, 999) for _ in value_cols), rng.choice(phrases.TABLE_UNITS)]
        grid.append(row)
    return Component(ComponentKind.TABLE, grid)


def _checkbox(rng) -> Component:
    return Component(ComponentKind.CHECKBOX, {
        "label": rng.choice(phrases.CHECKBOX_LABELS),
        "state": rng.choice(CHECKBOX_STATES),
    })


_MAKERS = {
    ComponentKind.PARAGRAPH: _paragraph,
    ComponentKind.TABLE: _table,
    ComponentKind.CHECKBOX: _checkbox,
}


def _title(rng, level: int, config: SynthConfig) -> str:
    if level == 0:
        return f"{config.domain_label} {rng.choice(phrases.DOCUMENT_KINDS)}"
    bank = (phrases.SECTION_TITLES, phrases.SUBSECTION_TITLES)[level - 1] if level < 3 else phrases.DETAIL_TITLES
    return rng.choice(bank)


def _node(rng, config: SynthConfig, node_id: str, level: int) -> DocNode:
    chosen = rng.sample(phrases.VARIABLES, rng.randint(0, 2))
    variables = {}
    for name, lo, hi in chosen:
        variables[name] = _tenths(rng, lo, hi) if rng.random() < 0.7 else rng.randint(lo, hi)
    node = DocNode(
        id=node_id,
        title=_title(rng, level, config),
        level=level,
        level_type=LevelType.for_level(level),
        properties={"variables": variables, "content": rng.choice(phrases.CONTENT_SENTENCES)},
    )
    kinds = rng.choices(list(_MAKERS), weights=(2, 1, 1), k=rng.randint(*config.components_per_node))
    node.components = [_MAKERS[k](rng) for k in kinds]
    if level < config.max_depth - 1:
        for i in range(1, rng.randint(*config.children_per_node) + 1):
            child_id = str(i) if level == 0 else f"{node_id}.{i}"
            node.children.append(_node(rng, config, child_id, level + 1))
    return node


def generate_document(config: SynthConfig) -> DocNode:
    """Random document tree reaching exactly ``config.max_depth`` levels.

    Trees with two or more levels always hold at least one table and one
    checkbox; missing kinds are appended to the first section.
    """
    rng = _rng(config, "doc")
    root = _node(rng, config, "0.0", 0)
    if config.max_depth >= 2:
        kinds = {c.kind for n in root.walk() for c in n.components}
        for kind in (ComponentKind.TABLE, ComponentKind.CHECKBOX):
            if kind not in kinds:
                root.children[0].components.append(_MAKERS[kind](rng))
    root.validate()
    return root


# -- rendering --------------------------------------------------------------


def _ascii_table(grid) -> list[str]:
    cells = [[leaf_text(c) for c in row] for row in grid]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    border = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    lines = [border]
    for n, row in enumerate(cells):
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
        if n == 0:
            lines.append(border)
    lines.append(border)
    return lines


def _xml_table(grid) -> list[str]:
    lines = []
    for n, row in enumerate(grid):
        tag = "th" if n == 0 else "td"
        line = "<tr>" + "".join(f"<{tag}>{leaf_text(c)}</{tag}>" for c in row) + "</tr>"
        lines.append(line)
    lines[0] = "<table>" + lines[0]
    lines[-1] = lines[-1] + "</table>"
    return lines


def _pdf_table(grid, title: str, rng) -> list[str]:
    cells = [[leaf_text(c) for c in row] for row in grid]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    lines = []
    if rng.random() < 0.5:
        head, tail = rng.choice(phrases.CAPTION_WORDS)
        lines += [f"Tabulated {head}-", f"{tail} for {title}"]
    for row in cells:
        lines.append("   ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return lines


def _checkbox_mark(state: str, style: str, rng) -> str:
    if style == "brackets":
        return {"checked": "[X]", "unchecked": "[ ]", "na": "[-]"}[state]
    if style == "yes_no":
        return {"checked": "YES", "unchecked": "NO", "na": "N/A"}[state]
    if state == "na":
        return rng.choice(("N/A", "n/a", "Not applicable"))
    return {"checked": "Confirmed", "unchecked": "Not confirmed"}[state]


class _Renderer:
    def __init__(self, config: SynthConfig):
        self.config = config
        self.rng = _rng(config, "render")

    def remark(self) -> str:
        return self.rng.choice(phrases.REMARKS)

    def lead(self) -> str:
        return self.rng.choice(phrases.LEADS)

    def own_blocks(self, node: DocNode) -> list[list[str]]:
        blocks = [[
            f"{self.lead()} {node.level_type.value} {node.id} is titled {node.title} "
            f"(level {node.level}); {self.remark()}."
        ]]
        for name, value in node.properties["variables"].items():
            blocks.append([f"{self.lead()} {name} was {leaf_text(value)}; {self.remark()}."])
        blocks.append([f"Notes for {node.id}: {node.properties['content']} Incidentally, {self.remark()}."])
        for idc, comp in enumerate(node.components, start=1):
            blocks.append(self.component_block(node, idc, comp))
        return blocks

    def component_block(self, node: DocNode, idc: int, comp: Component) -> list[str]:
        head = f"Component {idc} ({comp.kind.name})"
        if comp.kind is ComponentKind.PARAGRAPH:
            return [f"{head}: {comp.payload} By the way, {self.remark()}."]
        if comp.kind is ComponentKind.CHECKBOX:
            label, state = comp.payload["label"], comp.payload["state"]
            mark = _checkbox_mark(state, self.config.checkbox_style, self.rng)
            return [f"{head}: {mark} {label} (state: {state}); {self.remark()}."]
        lines = [f"{head} follows; {self.remark()}."]
        style = self.config.table_style
        if style == "ascii":
            lines += _ascii_table(comp.payload)
        elif style == "xml_like":
            lines += _xml_table(comp.payload)
        else:
            lines += _pdf_table(comp.payload, node.title, self.rng)
        return lines

    def blocks(self, node: DocNode) -> list[list[str]]:
        layout = self.config.layout
        if layout == "combined":
            out, queue = [], [node]
            while queue:
                current = queue.pop(0)
                out += self.own_blocks(current)
                queue += current.children
            return out
        out = self.own_blocks(node)
        child_blocks = [self.blocks(c) for c in node.children]
        if layout == "sequential":
            for cb in child_blocks:
                out += cb
        else:
            for i in range(max((len(cb) for cb in child_blocks), default=0)):
                out += [cb[i] for cb in child_blocks if i < len(cb)]
        return out

    def render(self, doc: DocNode) -> str:
        lines = ["<text>"]
        for block in self.blocks(doc):
            lines += block
            if self.rng.random() < self.config.filler_density:
                k = self.rng.randint(1, 2)
                lines.append(" ".join(self.rng.sample(phrases.FILLER, k)))
        lines.append("</text>")
        return "\n".join(lines)


def render_unstructured(doc: DocNode, config: SynthConfig) -> str:
    """Prose rendering of *doc* wrapped in ``<text>`` tags.

    One data point per line, each closed by an unrelated remark. Layouts:
    ``sequential`` walks the tree depth-first, ``parallel`` interleaves
    sibling subtrees block by block, ``combined`` emits whole sections in
    level order.
    """
    return _Renderer(config).render(doc)


def triple_id(config: SynthConfig) -> str:
    slug = "-".join(config.domain_label.lower().split())
    return f"{slug}-{_rng(config, 'id').getrandbits(64):016x}"


def emit_triple(config: SynthConfig) -> CorpusTriple:
    doc = generate_document(config)
    filled = doc.to_json()
    return CorpusTriple(
        id=triple_id(config),
        text=render_unstructured(doc, config),
        blank=blank_schema(filled),
        filled=filled,
    )


def derive_seed(base_seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{base_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def corpus_configs(seed: int, count: int, *, layout: str | None = None,
                   table_style: str | None = None, checkbox_style: str | None = None,
                   domain_label: str | None = None, **overrides) -> Iterator[SynthConfig]:
    """Per-row configs; any style left as None cycles round-robin over its values."""
    for i in range(count):
        yield SynthConfig(
            seed=derive_seed(seed, i),
            domain_label=domain_label or phrases.DOMAINS[i % len(phrases.DOMAINS)],
            layout=layout or LAYOUTS[i % len(LAYOUTS)],
            # mixed-radix cycling walks every style combination
            table_style=table_style or TABLE_STYLES[(i // 3) % 3],
            checkbox_style=checkbox_style or CHECKBOX_STYLES[(i // 9) % 3],
            **overrides,
        )


# -- completions built from triples ----------------------------------------


def reference_reasoning(triple: CorpusTriple) -> str:
    n_nodes = 1
    stack = list(triple.filled.get("children", []))
    while stack:
        node = stack.pop()
        n_nodes += 1
        stack += node.get("children", [])
    return f"The text describes {n_nodes} nodes; each heading, value and component maps onto the blank schema."


def canonical_completion(triple: CorpusTriple, reasoning: str | None = None) -> str:
    """Completion text as a model would emit it after the opening think tag."""
    reasoning = reference_reasoning(triple) if reasoning is None else reasoning
    return f"{reasoning}{THINK_CLOSE}\n{ANSWER_OPEN}{dumps(triple.filled)}{ANSWER_CLOSE}"


PERTURBATIONS = (
    "delete_think_close",
    "delete_answer_open",
    "delete_answer_close",
    "swap_blocks",
    "missing_newline",
    "trailing_text",
    "nested_think",
    "leading_think",
)


def perturb(completion: str, kind: str) -> str:
    """Single edit to a canonical completion that breaks the two-block grammar."""
    think_end = completion.index(THINK_CLOSE)
    reasoning = completion[:think_end]
    answer_part = completion[think_end + len(THINK_CLOSE) + 1:]
    if kind == "delete_think_close":
        return completion.replace(THINK_CLOSE, "", 1)
    if kind == "delete_answer_open":
        return completion.replace(ANSWER_OPEN, "", 1)
    if kind == "delete_answer_close":
        i = completion.rindex(ANSWER_CLOSE)
        return completion[:i] + completion[i + len(ANSWER_CLOSE):]
    if kind == "swap_blocks":
        return f"{answer_part}\n{reasoning}{THINK_CLOSE}"
    if kind == "missing_newline":
        return completion.replace(f"{THINK_CLOSE}\n", f"{THINK_CLOSE} ", 1)
    if kind == "trailing_text":
        return completion + " Hope this helps."
    if kind == "nested_think":
        mid = len(reasoning) // 2
        return reasoning[:mid] + THINK_OPEN + reasoning[mid:] + completion[think_end:]
    if kind == "leading_think":
        return THINK_OPEN + completion
    raise ValueError(f"unknown perturbation {kind!r}")
