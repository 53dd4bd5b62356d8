"""Recursive-descent parser for formulas and the ``.poctl`` model format.

Formula precedence, tightest first: ``!`` and the next operators, then
``U`` / ``U<=n`` (right-associative), then ``&``, then ``|`` (both
left-associative).  ``X`` without a subscript ranges over all observations.
"""
from __future__ import annotations

import re

from . import formula as fm
from .lexer import ParseError, Token, tokenize
from .model import Hmm, ModelError, validate_hmm


class _FormulaParser:
    def __init__(self, tokens: list[Token], text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0
        self.prob_depth = 0

    # -- helpers
    def peek(self, offset=0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def end_pos(self) -> int:
        if self.text:
            return len(self.text)
        if self.tokens:
            last = self.tokens[-1]
            return last.pos + len(last.text)
        return 0

    def error(self, message: str, tok: Token | None = None):
        pos = tok.pos if tok is not None else self.end_pos()
        raise ParseError(message, pos, self.text)

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.text)
            self.error(f"expected {what}, found {found}", tok)
        self.i += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.i += 1
            return tok
        return None

    def temporal_guard(self, tok: Token):
        if self.prob_depth == 0:
            self.error(f"temporal operator {tok.text!r} outside P[...]", tok)

    # -- grammar
    def parse_or(self):
        left = self.parse_and()
        while self.accept("OR"):
            left = fm.path_or(left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_until()
        while self.accept("AND"):
            left = fm.path_and(left, self.parse_until())
        return left

    def parse_until(self):
        left = self.parse_unary()
        tok = self.accept("UNTIL")
        if tok is None:
            return left
        self.temporal_guard(tok)
        cmp = self.accept("CMP")
        if cmp is None:
            return fm.Until(fm.lift(left), fm.lift(self.parse_until()))
        if cmp.text != "<=":
            self.error("step-bounded until must be written U<=n", cmp)
        num = self.expect("NUMBER", "step bound")
        if not num.text.isdigit():
            self.error("step bound must be a nonnegative integer", num)
        return fm.BoundedUntil(fm.lift(left), int(num.text), fm.lift(self.parse_until()))

    def parse_unary(self):
        tok = self.peek()
        if tok is None:
            self.error("expected a formula, found end of input")
        if tok.kind == "NOT":
            self.i += 1
            return fm.path_not(self.parse_unary())
        if tok.kind == "NEXT_OBS":
            self.i += 1
            self.temporal_guard(tok)
            obs = [self.obs_index()]
            while self.accept("COMMA"):
                obs.append(self.obs_index())
            self.expect("RBRACE", "'}'")
            return fm.NextObs(frozenset(obs), fm.lift(self.parse_unary()))
        if tok.kind == "NEXT":
            self.i += 1
            self.temporal_guard(tok)
            return fm.NextObs(None, fm.lift(self.parse_unary()))
        return self.parse_primary()

    def obs_index(self) -> int:
        tok = self.expect("NUMBER", "observation index")
        if not tok.text.isdigit():
            self.error("observation index must be a nonnegative integer", tok)
        return int(tok.text)

    def parse_primary(self):
        tok = self.peek()
        self.i += 1
        if tok.kind == "TRUE":
            return fm.State(fm.TRUE)
        if tok.kind == "FALSE":
            return fm.State(fm.FALSE)
        if tok.kind == "IDENT":
            return fm.State(fm.atom(tok.text))
        if tok.kind == "LPAREN":
            inner = self.parse_or()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "PROB":
            self.expect("LBRACK", "'['")
            cmp = self.expect("CMP", "comparison operator")
            num = self.expect("NUMBER", "probability bound")
            p = float(num.text)
            if not 0.0 <= p <= 1.0:
                self.error("probability bound must be in [0,1]", num)
            self.expect("RBRACK", "']'")
            self.expect("LPAREN", "'('")
            self.prob_depth += 1
            body = fm.lift(self.parse_or())
            self.prob_depth -= 1
            self.expect("RPAREN", "')'")
            return fm.State(fm.Prob(cmp.text, p, body))
        self.i -= 1
        self.error(f"unexpected {tok.text!r}", tok)


def parse_state_formula(source) -> fm.StateFormula:
    """Parse a state formula from text or a token list."""
    if isinstance(source, str):
        text, tokens = source, tokenize(source)
    else:
        text, tokens = "", list(source)
    p = _FormulaParser(tokens, text)
    result = p.parse_or()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek().text!r}", p.peek())
    assert isinstance(result, fm.State), result
    return result.formula


def parse_path_formula(source) -> fm.PathFormula:
    """Parse a path formula (the body of ``P[..](...)``)."""
    if isinstance(source, str):
        text, tokens = source, tokenize(source)
    else:
        text, tokens = "", list(source)
    p = _FormulaParser(tokens, text)
    p.prob_depth = 1
    result = fm.lift(p.parse_or())
    if p.peek() is not None:
        p.error(f"unexpected {p.peek().text!r}", p.peek())
    return result


# -- model files ----------------------------------------------------------------

SECTIONS = ("States", "Transitions", "Observations", "ObsProb", "Labelling", "Initial")
_SECTION_RE = re.compile(r"\b(" + "|".join(SECTIONS) + r")\s*=")
_IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class ModelFileError(ParseError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.line = text.count("\n", 0, pos) + 1
        super().__init__(message, pos, text)
        self.args = (f"{message} (line {self.line})",)

    def __str__(self):
        return self.args[0]

    def diagnostic(self) -> str:
        return str(self)


def _strip_comments(text: str) -> str:
    # blank out comments in place so offsets stay valid
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def _parse_int(body: str, name: str, pos: int, text: str) -> int:
    try:
        v = int(body.strip())
    except ValueError:
        raise ModelFileError(f"{name} must be a positive integer, got {body.strip()!r}", pos, text) from None
    if v <= 0:
        raise ModelFileError(f"{name} must be a positive integer, got {v}", pos, text)
    return v


def _parse_row(chunk: str, name: str, pos: int, text: str) -> list:
    try:
        return [float(x) for x in chunk.split()]
    except ValueError as e:
        raise ModelFileError(f"{name}: {e}", pos, text) from None


def _parse_matrix(body: str, name: str, rows: int, cols: int, pos: int, text: str):
    chunks = body.split(",")
    if chunks and not chunks[-1].strip():
        chunks = chunks[:-1]
    matrix = [_parse_row(c, name, pos, text) for c in chunks]
    if len(matrix) != rows:
        raise ModelFileError(f"{name} has {len(matrix)} rows, expected {rows}", pos, text)
    for i, row in enumerate(matrix):
        if len(row) != cols:
            raise ModelFileError(f"{name} row {i} has {len(row)} entries, expected {cols}", pos, text)
    return matrix


def _parse_labels(body: str, n: int, pos: int, text: str):
    sets = re.findall(r"\{([^{}]*)\}", body)
    rest = re.sub(r"\{[^{}]*\}", "", body)
    if rest.replace(",", "").strip():
        raise ModelFileError("Labelling must be a list of {a,b} sets", pos, text)
    if len(sets) != n:
        raise ModelFileError(f"Labelling has {len(sets)} sets, expected {n}", pos, text)
    labels = []
    for s in sets:
        names = [x.strip() for x in s.split(",") if x.strip()]
        for name in names:
            if not _IDENT_RE.match(name):
                raise ModelFileError(f"invalid proposition name {name!r}", pos, text)
        labels.append(frozenset(names))
    return labels


def parse_model_file(text: str) -> Hmm:
    clean = _strip_comments(text)
    matches = list(_SECTION_RE.finditer(clean))
    head = clean[: matches[0].start()] if matches else clean
    if head.strip():
        raise ModelFileError("unexpected text before the first section", len(head) - len(head.lstrip()), text)
    bodies = {}
    positions = {}
    for k, m in enumerate(matches):
        name = m.group(1)
        if name in bodies:
            raise ModelFileError(f"duplicate section {name}", m.start(), text)
        end = matches[k + 1].start() if k + 1 < len(matches) else len(clean)
        bodies[name] = clean[m.end():end]
        positions[name] = m.start()
    for name in SECTIONS:
        if name not in bodies:
            raise ModelFileError(f"missing reserved word {name}", len(text), text)

    n = _parse_int(bodies["States"], "States", positions["States"], text)
    m = _parse_int(bodies["Observations"], "Observations", positions["Observations"], text)
    A = _parse_matrix(bodies["Transitions"], "Transitions", n, n, positions["Transitions"], text)
    B = _parse_matrix(bodies["ObsProb"], "ObsProb", n, m, positions["ObsProb"], text)
    labels = _parse_labels(bodies["Labelling"], n, positions["Labelling"], text)
    pi = _parse_row(bodies["Initial"].replace(",", " "), "Initial", positions["Initial"], text)
    if len(pi) != n:
        raise ModelFileError(f"Initial has {len(pi)} entries, expected {n}", positions["Initial"], text)

    h = Hmm(A=A, B=B, labels=labels, pi=pi)
    report = validate_hmm(h)
    if not report.ok:
        raise ModelError(report)
    return h


def load_model(path) -> Hmm:
    with open(path, encoding="utf-8") as f:
        return parse_model_file(f.read())


def format_model(h: Hmm) -> str:
    """Serialise an HMM in the ``.poctl`` format."""

    def matrix(M):
        return ",\n".join(" ".join(repr(float(x)) for x in row) for row in M)

    labels = ",\n".join("{" + ",".join(sorted(lab)) + "}" for lab in h.labels)
    return (
        f"States={h.n}\n"
        f"Transitions=\n{matrix(h.A)}\n"
        f"Observations={h.m}\n"
        f"ObsProb=\n{matrix(h.B)}\n"
        f"Labelling=\n{labels}\n"
        f"Initial=\n{' '.join(repr(float(x)) for x in h.pi)}\n"
    )
