"""Parser and serializer for ``.alg`` structure-definition files.

A file declares algebroids, tensors, endomorphisms, morphisms and paired
operators, then lists verification tasks.  Every referenced name must be
declared earlier; indices are 1-based in the file and validated against the
rank.  ``#`` starts a comment.  See the README for the full grammar and the
task vocabulary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .calculus import (
    FORM,
    MULTIVECTOR,
    AlgebroidPresentation,
    BundleMorphism,
    GradedSection,
)
from .errors import ParseError, SemanticError
from .paired import PairedOperator
from .rational import ExpressionParser, RationalFunction, Token, tokenize

_FRAME_RE = re.compile(r"^e([0-9]+)$")


@dataclass
class TaskItem:
    name: str
    args: list
    line: int = field(compare=False, default=0)


@dataclass
class StructureFile:
    algebroids: dict[str, AlgebroidPresentation] = field(default_factory=dict)
    tensors: dict[str, GradedSection] = field(default_factory=dict)
    endos: dict[str, tuple] = field(default_factory=dict)
    morphisms: dict[str, BundleMorphism] = field(default_factory=dict)
    paired: dict[str, PairedOperator] = field(default_factory=dict)
    tensor_parent: dict[str, str] = field(default_factory=dict)
    endo_parent: dict[str, str] = field(default_factory=dict)
    paired_parent: dict[str, str] = field(default_factory=dict)
    tasks: list[TaskItem] = field(default_factory=list)
    order: list[tuple[str, str]] = field(default_factory=list)

    def declared(self, name: str) -> bool:
        return (
            name in self.algebroids
            or name in self.tensors
            or name in self.endos
            or name in self.morphisms
            or name in self.paired
        )


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.file = StructureFile()

    # -- token helpers ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.line, tok.column, what or repr(kind), tok.value or "end of input")
        return self.next()

    def expect_name(self, value: str | None = None) -> Token:
        tok = self.expect("name", value and f"'{value}'")
        if value is not None and tok.value != value:
            raise ParseError(tok.line, tok.column, f"'{value}'", tok.value)
        return tok

    def expect_int(self) -> int:
        return int(self.expect("int", "an integer").value)

    def parse_expr(self, coords) -> RationalFunction:
        parser = ExpressionParser(self.tokens, self.pos, coords)
        value = parser.parse()
        self.pos = parser.pos
        return value

    # -- declarations ------------------------------------------------------

    def parse(self) -> StructureFile:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "name":
                raise ParseError(tok.line, tok.column, "a declaration or task", tok.value)
            handler = {
                "algebroid": self._algebroid,
                "tensor": self._tensor,
                "endo": self._endo,
                "morphism": self._morphism,
                "paired": self._paired,
                "task": self._task,
            }.get(tok.value)
            if handler is None:
                raise ParseError(tok.line, tok.column, "a declaration or task keyword", tok.value)
            handler()
        return self.file

    def _fresh_name(self) -> str:
        tok = self.expect("name", "a name")
        if self.file.declared(tok.value):
            raise SemanticError(f"duplicate name {tok.value!r}", tok.line, tok.column)
        return tok.value

    def _lookup_algebroid(self, tok: Token) -> AlgebroidPresentation:
        A = self.file.algebroids.get(tok.value)
        if A is None:
            raise SemanticError(f"unknown algebroid {tok.value!r}", tok.line, tok.column)
        return A

    def _frame_index(self, rank: int) -> int:
        tok = self.expect_int_token()
        i = int(tok.value)
        if not 1 <= i <= rank:
            raise SemanticError(f"frame index {i} outside 1..{rank}", tok.line, tok.column)
        return i - 1

    def expect_int_token(self) -> Token:
        return self.expect("int", "an integer")

    def _algebroid(self):
        self.expect_name("algebroid")
        name = self._fresh_name()
        self.expect("{")
        self.expect_name("base")
        self.expect("=")
        self.expect("[")
        coords = []
        if self.peek().kind == "name":
            coords.append(self.next().value)
            while self.peek().kind == ",":
                self.next()
                coords.append(self.expect("name", "a coordinate name").value)
        self.expect("]")
        self.expect(";")
        self.expect_name("rank")
        self.expect("=")
        rank = self.expect_int()
        if rank < 1:
            tok = self.tokens[self.pos - 1]
            raise SemanticError("rank must be positive", tok.line, tok.column)
        self.expect(";")
        coords = tuple(coords)
        zero = RationalFunction.zero(coords)
        anchor = [[zero for _ in coords] for _ in range(rank)]
        npairs = rank * (rank - 1) // 2
        structure = [[zero for _ in range(rank)] for _ in range(npairs)]
        seen_anchor = set()
        seen_bracket = set()
        while self.peek().kind == "name" and self.peek().value in ("anchor", "bracket"):
            which = self.next().value
            self.expect("[")
            if which == "anchor":
                i = self._frame_index(rank)
                self.expect(",")
                ctok = self.expect("name", "a coordinate name")
                if ctok.value not in coords:
                    raise SemanticError(
                        f"unknown coordinate {ctok.value!r}", ctok.line, ctok.column
                    )
                a = coords.index(ctok.value)
                self.expect("]")
                self.expect("=")
                value = self.parse_expr(coords)
                if (i, a) in seen_anchor:
                    raise SemanticError(
                        f"anchor[{i+1},{ctok.value}] set twice", ctok.line, ctok.column
                    )
                seen_anchor.add((i, a))
                anchor[i][a] = value
            else:
                itok = self.expect_int_token()
                i = int(itok.value)
                self.expect(",")
                j = int(self.expect_int_token().value)
                if not (1 <= i <= rank and 1 <= j <= rank) or i == j:
                    raise SemanticError(
                        f"bracket indices [{i},{j}] invalid for rank {rank}",
                        itok.line,
                        itok.column,
                    )
                self.expect("]")
                self.expect("=")
                combo = self._lincomb(coords, rank)
                sign = 1
                if i > j:
                    i, j, sign = j, i, -1
                key = (i, j)
                if key in seen_bracket:
                    raise SemanticError(
                        f"bracket[{i},{j}] set twice", itok.line, itok.column
                    )
                seen_bracket.add(key)
                row = structure[_pair_pos(i - 1, j - 1, rank)]
                for k, c in combo.items():
                    row[k] = c if sign == 1 else -c
            self.expect(";")
        self.expect("}")
        self.file.algebroids[name] = AlgebroidPresentation(
            coords,
            rank,
            tuple(tuple(r) for r in anchor),
            tuple(tuple(r) for r in structure),
            name=name,
        )
        self.file.order.append(("algebroid", name))

    def _lincomb(self, coords, rank) -> dict[int, RationalFunction]:
        # lincomb := "0" | [sign] term (("+"|"-") term)*,
        # term := (EXPR "*")? FRAME with FRAME = e<digits>
        out: dict[int, RationalFunction] = {}
        tok = self.peek()
        if tok.kind == "int" and tok.value == "0":
            after = self.tokens[self.pos + 1]
            if after.kind == ";":
                self.next()
                return out
        sign = 1
        while True:
            while self.peek().kind in ("+", "-"):
                if self.next().kind == "-":
                    sign = -sign
            start = self.pos
            frame_at = self._find_frame_token(start)
            if frame_at is None:
                tok = self.peek()
                raise ParseError(tok.line, tok.column, "a frame term like e1 or f*e1", tok.value)
            if frame_at == start:
                coeff = RationalFunction.one(coords)
            else:
                star = self.tokens[frame_at - 1]
                if star.kind != "*":
                    raise ParseError(star.line, star.column, "'*' before the frame symbol", star.value)
                sub = self.tokens[start : frame_at - 1] + [Token("eof", "", star.line, star.column)]
                parser = ExpressionParser(sub, 0, coords)
                coeff = parser.parse()
                if parser.peek().kind != "eof":
                    bad = parser.peek()
                    raise ParseError(bad.line, bad.column, "end of coefficient", bad.value)
            frame_tok = self.tokens[frame_at]
            k = int(_FRAME_RE.match(frame_tok.value).group(1))
            if not 1 <= k <= rank:
                raise SemanticError(
                    f"frame index e{k} outside rank {rank}", frame_tok.line, frame_tok.column
                )
            self.pos = frame_at + 1
            value = coeff if sign == 1 else -coeff
            prev = out.get(k - 1)
            out[k - 1] = value if prev is None else prev + value
            sign = 1
            if self.peek().kind in ("+", "-"):
                continue
            break
        return out

    def _find_frame_token(self, start: int) -> int | None:
        depth = 0
        i = start
        while i < len(self.tokens):
            tok = self.tokens[i]
            if tok.kind == "(":
                depth += 1
            elif tok.kind == ")":
                depth -= 1
            elif depth == 0 and tok.kind in (";", "+", "-") and i > start:
                return None
            elif depth == 0 and tok.kind == "name" and _FRAME_RE.match(tok.value):
                nxt = self.tokens[i + 1]
                if nxt.kind in (";", "+", "-", "eof"):
                    return i
            elif tok.kind == "eof":
                return None
            i += 1
        return None

    def _tensor(self):
        self.expect_name("tensor")
        name = self._fresh_name()
        self.expect_name("on")
        parent_tok = self.expect("name", "an algebroid name")
        A = self._lookup_algebroid(parent_tok)
        kind_tok = self.expect("name", "'multivector' or 'form'")
        if kind_tok.value not in (MULTIVECTOR, FORM):
            raise ParseError(kind_tok.line, kind_tok.column, "'multivector' or 'form'", kind_tok.value)
        self.expect_name("degree")
        dtok = self.expect_int_token()
        degree = int(dtok.value)
        # degrees above the rank only admit the zero section (empty body)
        if degree < 0:
            raise SemanticError(f"negative degree {degree}", dtok.line, dtok.column)
        self.expect("{")
        if degree > A.rank and self.peek().kind == "(":
            raise SemanticError(
                f"degree {degree} exceeds rank {A.rank}: only the empty (zero) section is allowed",
                dtok.line,
                dtok.column,
            )
        coeffs = {}
        while self.peek().kind == "(":
            open_tok = self.next()
            idx = []
            if self.peek().kind == "int":
                idx.append(int(self.next().value))
                while self.peek().kind == ",":
                    self.next()
                    idx.append(int(self.expect_int_token().value))
            self.expect(")")
            if len(idx) != degree:
                raise SemanticError(
                    f"index tuple {tuple(idx)} has length {len(idx)}, degree is {degree}",
                    open_tok.line,
                    open_tok.column,
                )
            if any(not 1 <= k <= A.rank for k in idx):
                raise SemanticError(
                    f"index tuple {tuple(idx)} outside 1..{A.rank}", open_tok.line, open_tok.column
                )
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise SemanticError(
                    f"index tuple {tuple(idx)} must be strictly increasing",
                    open_tok.line,
                    open_tok.column,
                )
            key = tuple(k - 1 for k in idx)
            if key in coeffs:
                raise SemanticError(
                    f"entry {tuple(idx)} set twice", open_tok.line, open_tok.column
                )
            self.expect("=")
            coeffs[key] = self.parse_expr(A.coords)
            self.expect(";")
        self.expect("}")
        self.file.tensors[name] = A.section(kind_tok.value, degree, coeffs)
        self.file.tensor_parent[name] = parent_tok.value
        self.file.order.append(("tensor", name))

    def _endo(self):
        self.expect_name("endo")
        name = self._fresh_name()
        self.expect_name("on")
        parent_tok = self.expect("name", "an algebroid name")
        A = self._lookup_algebroid(parent_tok)
        zero = A.zero_rf()
        matrix = [[zero for _ in range(A.rank)] for _ in range(A.rank)]
        seen = set()
        self.expect("{")
        while self.peek().kind == "[":
            self.next()
            i = self._frame_index(A.rank)
            self.expect(",")
            j = self._frame_index(A.rank)
            self.expect("]")
            self.expect("=")
            if (i, j) in seen:
                tok = self.peek()
                raise SemanticError(f"entry [{i+1},{j+1}] set twice", tok.line, tok.column)
            seen.add((i, j))
            matrix[i][j] = self.parse_expr(A.coords)
            self.expect(";")
        self.expect("}")
        self.file.endos[name] = tuple(tuple(r) for r in matrix)
        self.file.endo_parent[name] = parent_tok.value
        self.file.order.append(("endo", name))

    def _morphism(self):
        self.expect_name("morphism")
        name = self._fresh_name()
        self.expect(":")
        src = self._lookup_algebroid(self.expect("name", "a source algebroid"))
        self.expect("arrow")
        dst = self._lookup_algebroid(self.expect("name", "a target algebroid"))
        self.expect("{")
        zero = RationalFunction.zero(src.coords)
        base = [zero for _ in dst.coords]
        matrix = [[zero for _ in range(src.rank)] for _ in range(dst.rank)]
        while self.peek().kind == "name" and self.peek().value in ("base", "matrix"):
            which = self.next().value
            self.expect("[")
            if which == "base":
                ctok = self.expect("name", "a target coordinate")
                if ctok.value not in dst.coords:
                    raise SemanticError(
                        f"unknown target coordinate {ctok.value!r}", ctok.line, ctok.column
                    )
                self.expect("]")
                self.expect("=")
                base[dst.coords.index(ctok.value)] = self.parse_expr(src.coords)
            else:
                jtok = self.expect_int_token()
                j = int(jtok.value)
                self.expect(",")
                i = int(self.expect_int_token().value)
                if not (1 <= j <= dst.rank and 1 <= i <= src.rank):
                    raise SemanticError(
                        f"matrix indices [{j},{i}] outside rank bounds", jtok.line, jtok.column
                    )
                self.expect("]")
                self.expect("=")
                matrix[j - 1][i - 1] = self.parse_expr(src.coords)
            self.expect(";")
        self.expect("}")
        self.file.morphisms[name] = BundleMorphism(
            src, dst, tuple(base), tuple(tuple(r) for r in matrix), name=name
        )
        self.file.order.append(("morphism", name))

    def _paired(self):
        self.expect_name("paired")
        name = self._fresh_name()
        self.expect_name("on")
        parent_tok = self.expect("name", "an algebroid name")
        A = self._lookup_algebroid(parent_tok)
        self.expect("{")
        parts = {}
        for key in ("N", "pi", "sigma"):
            ktok = self.expect_name(key)
            self.expect("=")
            vtok = self.expect("name", "a declared name")
            parts[key] = vtok
            self.expect(";")
        self.expect("}")
        ntok = parts["N"]
        n_matrix = self.file.endos.get(ntok.value)
        if n_matrix is None or self.file.endo_parent[ntok.value] != parent_tok.value:
            raise SemanticError(
                f"N must be an endo on {parent_tok.value}", ntok.line, ntok.column
            )
        pi = self._tensor_ref(parts["pi"], parent_tok.value, MULTIVECTOR, 2)
        sigma = self._tensor_ref(parts["sigma"], parent_tok.value, FORM, 2)
        self.file.paired[name] = PairedOperator(A, n_matrix, pi, sigma, name=name)
        self.file.paired_parent[name] = parent_tok.value
        self.file.order.append(("paired", name))

    def _tensor_ref(self, tok: Token, parent: str, variance: str, degree: int) -> GradedSection:
        t = self.file.tensors.get(tok.value)
        if t is None or self.file.tensor_parent[tok.value] != parent:
            raise SemanticError(
                f"{tok.value!r} must be a tensor on {parent}", tok.line, tok.column
            )
        if t.variance != variance or t.degree != degree:
            raise SemanticError(
                f"{tok.value!r} must be a degree-{degree} {variance}", tok.line, tok.column
            )
        return t

    def _task(self):
        head = self.expect_name("task")
        name_tok = self.expect("name", "a task name")
        name = name_tok.value
        while self.peek().kind == "-":
            self.next()
            name += "-" + self.expect("name", "task name continuation").value
        args = []
        while self.peek().kind != ";":
            tok = self.peek()
            if tok.kind == "name":
                args.append(self.next().value)
            elif tok.kind == "int":
                args.append(int(self.next().value))
            elif tok.kind == "[":
                self.next()
                group = []
                while self.peek().kind in ("name", "int"):
                    entry = self.next()
                    group.append(int(entry.value) if entry.kind == "int" else entry.value)
                    if self.peek().kind == ",":
                        self.next()
                        continue
                    break
                self.expect("]")
                args.append(group)
            elif tok.kind == "eof":
                raise ParseError(tok.line, tok.column, "';'", "end of input")
            else:
                raise ParseError(tok.line, tok.column, "a task argument", tok.value)
        self.expect(";")
        self.file.tasks.append(TaskItem(name, args, head.line))


def _pair_pos(i: int, j: int, rank: int) -> int:
    return i * rank - i * (i + 1) // 2 + (j - i - 1)


def parse(text: str) -> StructureFile:
    """Parse a structure file; ParseError/SemanticError carry positions."""
    return _Parser(text).parse()


def serialize(file: StructureFile) -> str:
    """Deterministic canonical text whose parse equals the original parse."""
    lines: list[str] = []
    for kind, name in file.order:
        if kind == "algebroid":
            A = file.algebroids[name]
            lines.append(f"algebroid {name} {{")
            lines.append(f"  base = [{', '.join(A.coords)}];")
            lines.append(f"  rank = {A.rank};")
            for i in range(A.rank):
                for a, c in enumerate(A.coords):
                    if not A.anchor[i][a].is_zero():
                        lines.append(f"  anchor[{i+1},{c}] = {A.anchor[i][a]};")
            for i in range(A.rank):
                for j in range(i + 1, A.rank):
                    row = A.structure[_pair_pos(i, j, A.rank)]
                    terms = [
                        f"({c})*e{k+1}" for k, c in enumerate(row) if not c.is_zero()
                    ]
                    if terms:
                        lines.append(f"  bracket[{i+1},{j+1}] = {' + '.join(terms)};")
            lines.append("}")
        elif kind == "tensor":
            t = file.tensors[name]
            parent = file.tensor_parent[name]
            lines.append(f"tensor {name} on {parent} {t.variance} degree {t.degree} {{")
            for idx, c in t.items():
                inside = ",".join(str(k + 1) for k in idx)
                lines.append(f"  ({inside}) = {c};")
            lines.append("}")
        elif kind == "endo":
            m = file.endos[name]
            parent = file.endo_parent[name]
            lines.append(f"endo {name} on {parent} {{")
            for i, row in enumerate(m):
                for j, c in enumerate(row):
                    if not c.is_zero():
                        lines.append(f"  [{i+1},{j+1}] = {c};")
            lines.append("}")
        elif kind == "morphism":
            phi = file.morphisms[name]
            lines.append(f"morphism {name} : {phi.source.name} -> {phi.target.name} {{")
            for b, c in enumerate(phi.target.coords):
                if not phi.base_map[b].is_zero():
                    lines.append(f"  base[{c}] = {phi.base_map[b]};")
            for j, row in enumerate(phi.matrix):
                for i, cval in enumerate(row):
                    if not cval.is_zero():
                        lines.append(f"  matrix[{j+1},{i+1}] = {cval};")
            lines.append("}")
        elif kind == "paired":
            op = file.paired[name]
            parent = file.paired_parent[name]
            n_name = next(k for k, v in file.endos.items() if v == op.n_matrix)
            pi_name = next(k for k, v in file.tensors.items() if v == op.pi)
            sigma_name = next(k for k, v in file.tensors.items() if v == op.sigma)
            lines.append(f"paired {name} on {parent} {{")
            lines.append(f"  N = {n_name};")
            lines.append(f"  pi = {pi_name};")
            lines.append(f"  sigma = {sigma_name};")
            lines.append("}")
    for task in file.tasks:
        rendered = []
        for arg in task.args:
            if isinstance(arg, list):
                rendered.append("[" + ", ".join(str(a) for a in arg) + "]")
            else:
                rendered.append(str(arg))
        suffix = (" " + " ".join(rendered)) if rendered else ""
        lines.append(f"task {task.name}{suffix};")
    return "\n".join(lines) + "\n"
