"""DIMACS CNF reading and writing."""

from __future__ import annotations

from typing import Iterable

from .cnf import CNFError, Formula, sorted_clause


class DimacsError(CNFError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF text.

    Comment lines start with ``c``. A clause may span several lines and
    ends at ``0``; a bare ``0`` is the empty clause.
    """
    header = None
    clauses = []
    current: list[int] = []
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"malformed header {line!r}", lineno)
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad token {tok!r}", lineno) from None
            if start_line is None:
                start_line = lineno
            if lit == 0:
                if tok != "0":
                    raise DimacsError(f"literal index 0 in clause body ({tok!r})", lineno)
                try:
                    clauses.append(Formula([current]).clauses)
                except CNFError as exc:
                    raise DimacsError(str(exc), start_line) from None
                current = []
                start_line = None
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated clause at end of input", start_line)
    return Formula(c for group in clauses for c in group)


def write_dimacs(f: Formula, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p cnf {f.max_variable()} {len(f)}")
    for clause in f:
        lines.append(" ".join(str(l) for l in sorted_clause(clause)) + (" 0" if clause else "0"))
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Formula:
    with open(path) as fh:
        return parse_dimacs(fh.read())
