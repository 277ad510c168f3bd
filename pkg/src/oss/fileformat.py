"""Reader and writer for ``.oss`` system files.

Grammar (line oriented, ``#`` starts a comment)::

    semiring <name>[(params)]
    outputs { id+ ; (id < id)* }
    states { id+ }
    <state> = w*<id> (+ w*<id>)*

A term without ``w*`` has weight one; a right-hand side of ``0`` is the
empty sum.  Blocks may span lines; equations may not.
"""
from __future__ import annotations

import dataclasses
import re

from .errors import (
    BadElement,
    CycleDetected,
    DuplicateEquation,
    MassViolation,
    OSSError,
    ParseError,
    UndeclaredIdentifier,
)
from .freemod import WeightedMap
from .poset import FinPoset, build_poset
from .semiring import Semiring, parse_semiring
from .solver import UnguardedSystem

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*")


@dataclasses.dataclass
class SystemFile:
    semiring: Semiring
    outputs: FinPoset
    states: tuple | None
    equations: dict  # state -> WeightedMap over states + outputs
    system: UnguardedSystem | None


class _Source:
    def __init__(self, text: str):
        # blank out comments but keep offsets intact
        self.text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
        self.pos = 0

    def loc(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, cls, msg, pos):
        line, col = self.loc(pos)
        return cls(msg, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def line_end(self) -> int:
        end = self.text.find("\n", self.pos)
        return len(self.text) if end < 0 else end


def _parse_terms(src: _Source, start: int, end: int, P: Semiring, known) -> list:
    """Parse ``w*id + w*id ...`` in ``src.text[start:end]`` into ``(id, weight)``."""
    raw = src.text[start:end]
    if not raw.strip():
        raise src.error(ParseError, "empty right-hand side", start)
    if raw.strip() == "0":
        return []
    terms = []
    offset = start
    for piece in _split_keep_offsets(raw, "+"):
        text, rel = piece
        pos = offset + rel
        body = text.strip()
        lead = len(text) - len(text.lstrip())
        pos += lead
        if not body:
            raise src.error(ParseError, "missing term around '+'", pos)
        if "*" in body:
            cut = body.rfind("*")
            wtext, ident = body[:cut].strip(), body[cut + 1 :].strip()
            try:
                weight = P.parse(wtext)
            except (BadElement, ValueError) as exc:
                raise src.error(ParseError, f"bad weight {wtext!r} for {P.name}: {exc}", pos) from None
            ipos = pos + cut + 1 + (len(body[cut + 1 :]) - len(body[cut + 1 :].lstrip()))
        else:
            ident, weight, ipos = body, P.one, pos
        if not IDENT.fullmatch(ident):
            raise src.error(ParseError, f"expected an identifier, got {ident!r}", ipos)
        if known is not None and ident not in known:
            raise src.error(UndeclaredIdentifier, f"undeclared identifier {ident!r}", ipos)
        terms.append((ident, weight))
    return terms


def _split_keep_offsets(text: str, sep: str):
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return parts


def _read_block(src: _Source, keyword_pos: int) -> tuple[str, int]:
    src.skip_ws()
    if src.pos >= len(src.text) or src.text[src.pos] != "{":
        raise src.error(ParseError, "expected '{'", src.pos)
    close = src.text.find("}", src.pos)
    if close < 0:
        raise src.error(ParseError, "unterminated block", keyword_pos)
    body_start = src.pos + 1
    src.pos = close + 1
    return src.text[body_start:close], body_start


def _idents(src, text, base) -> list[tuple[str, int]]:
    out = []
    for m in re.finditer(r"\S+", text):
        if not IDENT.fullmatch(m.group()):
            raise src.error(ParseError, f"bad identifier {m.group()!r}", base + m.start())
        out.append((m.group(), base + m.start()))
    return out


def parse_file(text: str) -> SystemFile:
    src = _Source(text)
    P = None
    outputs = None
    states = None
    equations: dict = {}
    pending = []  # (state, pos, rhs_start, rhs_end)
    while not src.at_end():
        start = src.pos
        m = IDENT.match(src.text, src.pos)
        if not m:
            raise src.error(ParseError, f"unexpected {src.text[src.pos]!r}", src.pos)
        word = m.group()
        src.pos = m.end()
        if word == "semiring" and P is None and not src.text[src.pos:src.line_end()].lstrip().startswith("="):
            end = src.line_end()
            decl = src.text[src.pos:end].strip()
            try:
                P = parse_semiring(decl)
            except OSSError as exc:
                raise src.error(ParseError, str(exc), src.pos) from None
            src.pos = end
        elif word in ("outputs", "states") and not src.text[src.pos:src.line_end()].lstrip().startswith("="):
            body, base = _read_block(src, start)
            if word == "outputs":
                if outputs is not None:
                    raise src.error(ParseError, "second outputs block", start)
                outputs = _outputs_block(src, body, base)
            else:
                if states is not None:
                    raise src.error(ParseError, "second states block", start)
                ids = _idents(src, body, base)
                names = [i for i, _ in ids]
                if len(set(names)) != len(names):
                    raise src.error(ParseError, "duplicate state name", base)
                states = tuple(names)
        else:
            rest_end = src.line_end()
            line = src.text[src.pos:rest_end]
            eq = line.find("=")
            if eq < 0 or line[:eq].strip():
                raise src.error(ParseError, f"expected '=' after {word!r}", src.pos)
            pending.append((word, start, src.pos + eq + 1, rest_end))
            src.pos = rest_end
    if P is None:
        raise ParseError("missing 'semiring' declaration", 1, 1)
    if outputs is None:
        outputs = build_poset([])
    if states is not None:
        clash = set(states) & set(outputs.elements)
        if clash:
            raise ParseError(f"identifiers declared as both state and output: {sorted(clash)}")
    known = set(outputs.elements) | set(states or ())
    for name, pos, a, b in pending:
        if states is None or name not in states:
            raise src.error(UndeclaredIdentifier, f"equation for undeclared state {name!r}", pos)
        if name in equations:
            raise src.error(DuplicateEquation, f"second equation for {name!r}", pos)
        terms = _parse_terms(src, a, b, P, known)
        equations[name] = WeightedMap(P, terms)
    system = None
    if states is not None:
        missing = [x for x in states if x not in equations]
        if missing:
            raise ParseError(f"no equation for state(s): {', '.join(missing)}")
        try:
            system = UnguardedSystem.from_rows(P, states, outputs, equations)
        except MassViolation as exc:
            where = {name: pos for name, pos, _, _ in pending}
            line, col = src.loc(where.get(exc.state, 0))
            raise MassViolation(f"line {line}, column {col}: {exc}", state=exc.state) from None
    return SystemFile(P, outputs, states, equations, system)


def _outputs_block(src, body: str, base: int) -> FinPoset:
    parts = _split_keep_offsets(body, ";")
    elements = [i for i, _ in _idents(src, parts[0][0], base + parts[0][1])]
    if len(set(elements)) != len(elements):
        raise src.error(ParseError, "duplicate output name", base)
    gens = []
    for text, rel in parts[1:]:
        if not text.strip():
            continue
        names = [s.strip() for s in text.split("<")]
        if len(names) < 2 or not all(IDENT.fullmatch(n) for n in names):
            raise src.error(ParseError, f"bad order relation {text.strip()!r}", base + rel)
        for n in names:
            if n not in elements:
                raise src.error(UndeclaredIdentifier, f"undeclared output {n!r}", base + rel)
        gens.extend(zip(names, names[1:]))
    try:
        return build_poset(elements, gens)
    except CycleDetected as exc:
        raise src.error(ParseError, str(exc), base) from None


def parse_system(text: str) -> UnguardedSystem:
    f = parse_file(text)
    if f.system is None:
        return UnguardedSystem(f.semiring, (), f.outputs, (), ())
    return f.system


def parse_distribution(text: str, P: Semiring, outputs: FinPoset) -> WeightedMap:
    """Parse an expression such as ``1/2*d1 + 1/2*d2`` over ``outputs``."""
    src = _Source(text)
    return WeightedMap(P, _parse_terms(src, 0, len(src.text), P, set(outputs.elements)))


def format_system(sys: UnguardedSystem) -> str:
    P = sys.semiring
    lines = [f"semiring {P.name}"]
    rel = " ; ".join(f"{a} < {b}" for a, b in sys.outputs.cover_pairs())
    outs = " ".join(map(str, sys.outputs.elements))
    lines.append("outputs { " + outs + (" ; " + rel if rel else "") + " }")
    lines.append("states { " + " ".join(map(str, sys.states)) + " }")
    for i, x in enumerate(sys.states):
        row = sys.row(i)
        rhs = " + ".join(f"{P.format(w)}*{k}" for k, w in row.items()) or "0"
        lines.append(f"{x} = {rhs}")
    return "\n".join(lines) + "\n"


__all__ = ["SystemFile", "parse_file", "parse_system", "parse_distribution", "format_system"]
