"""OpenQASM 2 subset parser and emitter.

Supported: one quantum register, the closed gate set in lowercase, `pi`
arithmetic in parameters. `include`, `creg`, `measure` and `barrier`
statements are tolerated and ignored. Everything else is an error.
"""
from __future__ import annotations

import math
import re
from pathlib import Path

from .circuits import ARITY, PARAM_COUNT, Circuit, Gate, GateKind


class QasmError(ValueError):
    """Parse failure; carries 1-based line and column."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


class QasmSyntaxError(QasmError):
    pass


class UnsupportedGateError(QasmError):
    def __init__(self, gate: str, line: int, col: int):
        super().__init__(f"unsupported gate '{gate}'", line, col)
        self.gate = gate


class RegisterError(QasmError):
    pass


_GATE_NAMES = {k.value: k for k in GateKind if k is not GateKind.TELEGATE_MARKER}

_IGNORED_STATEMENTS = ("include", "creg", "measure", "barrier")

_TOKEN_RE = re.compile(r"\s*(->|[A-Za-z_][A-Za-z0-9_.]*|\d+\.?\d*(?:[eE][-+]?\d+)?"
                       r"|\.\d+(?:[eE][-+]?\d+)?|\"[^\"]*\"|[()\[\],;+\-*/])")


def _tokenize(text: str):
    """Yield (token, line, col) with comments stripped."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("//", 1)[0]
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                if line[pos:].strip():
                    raise QasmSyntaxError(
                        f"unexpected character {line[pos:].strip()[0]!r}",
                        lineno, pos + 1)
                break
            yield m.group(1), lineno, m.start(1) + 1
            pos = m.end()


def _statements(text: str):
    """Group tokens into ';'-terminated statements."""
    current: list[tuple[str, int, int]] = []
    for tok in _tokenize(text):
        if tok[0] == ";":
            if current:
                yield current
                current = []
        else:
            current.append(tok)
    if current:
        tok, line, col = current[0]
        raise QasmSyntaxError(f"missing ';' after statement starting at '{tok}'", line, col)


class _ExprParser:
    """Recursive-descent evaluator for parameter expressions: numbers, pi, + - * / ()."""

    def __init__(self, tokens: list[tuple[str, int, int]]):
        self.tokens = tokens
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def _where(self):
        if self.pos < len(self.tokens):
            _, line, col = self.tokens[self.pos]
        else:
            _, line, col = self.tokens[-1]
        return line, col

    def _take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> float:
        value = self._expr()
        if self.pos != len(self.tokens):
            line, col = self._where()
            raise QasmSyntaxError(f"unexpected '{self._peek()}' in expression", line, col)
        return value

    def _expr(self) -> float:
        value = self._term()
        while self._peek() in ("+", "-"):
            op = self._take()[0]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> float:
        value = self._factor()
        while self._peek() in ("*", "/"):
            op, line, col = self._take()
            rhs = self._factor()
            if op == "/":
                if rhs == 0:
                    raise QasmSyntaxError("division by zero in expression", line, col)
                value /= rhs
            else:
                value *= rhs
        return value

    def _factor(self) -> float:
        tok = self._peek()
        if tok is None:
            line, col = self._where()
            raise QasmSyntaxError("unexpected end of expression", line, col)
        if tok == "-":
            self._take()
            return -self._factor()
        if tok == "+":
            self._take()
            return self._factor()
        if tok == "(":
            self._take()
            value = self._expr()
            if self._peek() != ")":
                line, col = self._where()
                raise QasmSyntaxError("expected ')'", line, col)
            self._take()
            return value
        tok, line, col = self._take()
        if tok == "pi":
            return math.pi
        try:
            return float(tok)
        except ValueError:
            raise QasmSyntaxError(f"expected number or 'pi', got '{tok}'", line, col) from None


def parse_qasm(text: str, id: str = "") -> Circuit:
    """Parse QASM 2 text into a Circuit. Raises QasmError subclasses."""
    width = None
    reg_name = None
    gates: list[Gate] = []

    for stmt in _statements(text):
        head, line, col = stmt[0]

        if head == "OPENQASM":
            continue
        if head in _IGNORED_STATEMENTS:
            continue
        if head == "qreg":
            if width is not None:
                raise RegisterError("only a single quantum register is supported", line, col)
            name, size = _parse_reg_decl(stmt, line, col)
            if size < 1:
                raise RegisterError(f"register size must be >= 1, got {size}", line, col)
            width, reg_name = size, name
            continue
        if head == "qubit" or head == "gate" or head == "opaque" or head == "if":
            raise QasmSyntaxError(f"unsupported statement '{head}'", line, col)

        # anything else must be a gate application
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", head):
            raise QasmSyntaxError(f"expected statement, got '{head}'", line, col)
        kind = _GATE_NAMES.get(head)
        if kind is None:
            raise UnsupportedGateError(head, line, col)
        if width is None:
            raise RegisterError("gate before qreg declaration", line, col)
        params, qubits = _parse_gate_args(stmt[1:], head, line, col, reg_name, width)
        want_p = PARAM_COUNT.get(kind, 0)
        if len(params) != want_p:
            raise QasmSyntaxError(
                f"'{head}' takes {want_p} parameter(s), got {len(params)}", line, col)
        if len(qubits) != ARITY[kind]:
            raise QasmSyntaxError(
                f"'{head}' acts on {ARITY[kind]} qubit(s), got {len(qubits)}", line, col)
        try:
            gates.append(Gate(kind, tuple(qubits), tuple(params)))
        except ValueError as exc:
            raise QasmSyntaxError(str(exc), line, col) from None

    if width is None:
        raise RegisterError("no qreg declaration found", 1, 1)
    return Circuit(width, tuple(gates), id)


def _parse_reg_decl(stmt, line, col):
    # qreg name [ n ]
    toks = [t[0] for t in stmt]
    if len(toks) != 5 or toks[2] != "[" or toks[4] != "]" or not toks[3].isdigit():
        raise QasmSyntaxError("malformed register declaration", line, col)
    return toks[1], int(toks[3])


def _parse_gate_args(rest, head, line, col, reg_name, width):
    """Split '(' params ')' qargs into evaluated params and qubit indices."""
    params: list[float] = []
    idx = 0
    if idx < len(rest) and rest[idx][0] == "(":
        depth_ = 1
        idx += 1
        start = idx
        groups: list[list] = [[]]
        while idx < len(rest) and depth_ > 0:
            tok = rest[idx][0]
            if tok == "(":
                depth_ += 1
            elif tok == ")":
                depth_ -= 1
                if depth_ == 0:
                    idx += 1
                    break
            if depth_ == 1 and tok == ",":
                groups.append([])
            elif depth_ >= 1:
                groups[-1].append(rest[idx])
            idx += 1
        else:
            if depth_ > 0:
                raise QasmSyntaxError("unbalanced '(' in parameter list", line, col)
        for group in groups:
            if not group:
                raise QasmSyntaxError("empty parameter", line, col)
            params.append(_ExprParser(group).parse())
        del start

    qubits: list[int] = []
    expect_arg = True
    while idx < len(rest):
        tok, tline, tcol = rest[idx]
        if expect_arg:
            if (idx + 3 < len(rest) and rest[idx + 1][0] == "["
                    and rest[idx + 3][0] == "]" and rest[idx + 2][0].isdigit()):
                if tok != reg_name:
                    raise QasmSyntaxError(f"unknown register '{tok}'", tline, tcol)
                q = int(rest[idx + 2][0])
                if q >= width:
                    raise QasmSyntaxError(
                        f"qubit index {q} out of range for {reg_name}[{width}]", tline, tcol)
                qubits.append(q)
                idx += 4
                expect_arg = False
                continue
            raise QasmSyntaxError(f"expected indexed qubit argument for '{head}'", tline, tcol)
        if tok != ",":
            raise QasmSyntaxError(f"expected ',' between qubit arguments, got '{tok}'",
                                  tline, tcol)
        idx += 1
        expect_arg = True
    if expect_arg:
        raise QasmSyntaxError(f"missing qubit argument for '{head}'", line, col)
    return params, qubits


def emit_qasm(c: Circuit) -> str:
    """Deterministic QASM 2 text: one gate per line, 17-significant-digit angles."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{c.width}];"]
    for g in c.gates:
        if g.is_marker:
            raise ValueError("circuit contains telegate markers and cannot be emitted as QASM")
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.params:
            ps = ",".join(f"{p:.17g}" for p in g.params)
            lines.append(f"{g.kind.value}({ps}) {args};")
        else:
            lines.append(f"{g.kind.value} {args};")
    return "\n".join(lines) + "\n"


def load_qasm_file(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_qasm(path.read_text(), id=path.stem)


def load_qasm_dir(path: str | Path) -> list[Circuit]:
    """All *.qasm files in a directory, sorted by name for determinism."""
    path = Path(path)
    files = sorted(path.glob("*.qasm"))
    if not files:
        raise FileNotFoundError(f"no .qasm files in {path}")
    return [load_qasm_file(f) for f in files]
