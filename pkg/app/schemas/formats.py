"""
Line-oriented text formats for automata, lattices, morphisms, relations,
monoids, biclique covers and certificates.

Every format is UTF-8 with LF line ends. Blank lines are ignored, and a
'#' at the start of a token begins a comment. Parse failures raise
ParseError with the file and line.
"""
import hashlib
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from app.core.errors import ParseError
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.certificate import (
    AtomicCertificate, BicliqueCover, Certificate, SubatomicCertificate,
)
from app.models.language import MonoidRecognizer
from app.models.lattice import FinLattice, JslMorphism
from app.models.relation import Rel, members

Automaton = Union[Dfa, Nfa]

_COMMENT = re.compile(r"(^|\s)#.*$")


def _strip(raw: str) -> str:
    """Drop a comment: a '#' at line start or after whitespace. Symbols like J#0 survive."""
    return _COMMENT.sub("", raw).strip()


class _Reader:
    """Cursor over the significant lines of a text, keeping line numbers."""

    def __init__(self, text: str, path: Optional[str] = None):
        self.path = path
        self.lines: List[Tuple[int, List[str]]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = _strip(raw)
            if content:
                self.lines.append((number, content.split()))
        self.pos = 0

    def error(self, message: str, line: Optional[int] = None) -> ParseError:
        if line is None:
            line = self.lines[min(self.pos, len(self.lines) - 1)][0] if self.lines else None
        return ParseError(message, path=self.path, line=line)

    def at_end(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self) -> Optional[List[str]]:
        return None if self.at_end() else self.lines[self.pos][1]

    def next(self, expected: Optional[str] = None) -> Tuple[int, List[str]]:
        if self.at_end():
            raise self.error(f"unexpected end of file, expected {expected or 'more input'}")
        number, tokens = self.lines[self.pos]
        if expected is not None and tokens[0] != expected:
            raise self.error(f"expected '{expected}', got '{tokens[0]}'", number)
        self.pos += 1
        return number, tokens

    def ints(self, tokens: Sequence[str], line: int) -> List[int]:
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise self.error(f"expected integers, got {' '.join(tokens)}", line)


def _validated(reader: _Reader, build: Callable[[], object], line: Optional[int] = None):
    try:
        return build()
    except (ValidationError, ValueError) as e:
        raise reader.error(str(e).splitlines()[0] if isinstance(e, ValidationError) else str(e), line)


def file_digest(*texts: str) -> str:
    """sha256 over the given file contents, used to pin a certificate to its instance."""
    h = hashlib.sha256()
    for text in texts:
        h.update(text.encode("utf-8"))
    return h.hexdigest()


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path=str(path))


# Automata

def parse_automaton(text: str, path: Optional[str] = None) -> Automaton:
    reader = _Reader(text, path)
    line, tokens = reader.next("type")
    if len(tokens) != 2 or tokens[1] not in ("dfa", "nfa"):
        raise reader.error("type must be 'dfa' or 'nfa'", line)
    kind = tokens[1]
    line, tokens = reader.next("alphabet")
    if len(tokens) < 2:
        raise reader.error("alphabet must not be empty", line)
    alphabet = _validated(reader, lambda: Alphabet(symbols=tuple(tokens[1:])), line)
    line, tokens = reader.next("states")
    counts = reader.ints(tokens[1:], line)
    if len(counts) != 1 or counts[0] < 0:
        raise reader.error("states takes one non-negative count", line)
    n = counts[0]
    line, tokens = reader.next("init")
    inits = reader.ints(tokens[1:], line)
    finals: List[int] = []
    if reader.peek() is not None and reader.peek()[0] == "final":
        line, tokens = reader.next("final")
        finals = reader.ints(tokens[1:], line)
    edges: List[Tuple[int, str, int]] = []
    seen: Dict[Tuple[int, str], int] = {}
    while not reader.at_end():
        line, tokens = reader.next("trans")
        if len(tokens) != 4:
            raise reader.error("trans takes <src> <sym> <dst>", line)
        src, dst = reader.ints([tokens[1], tokens[3]], line)
        sym = tokens[2]
        if sym not in alphabet.symbols:
            raise reader.error(f"unknown symbol '{sym}'", line)
        if not (0 <= src < n and 0 <= dst < n):
            raise reader.error("state out of range", line)
        if kind == "dfa" and (src, sym) in seen:
            raise reader.error(f"second transition from {src} on {sym}", line)
        seen[(src, sym)] = dst
        edges.append((src, sym, dst))
    if kind == "nfa":
        return _validated(reader, lambda: Nfa.from_edges(alphabet, n, inits, finals, edges))
    if len(inits) != 1:
        raise reader.error("a dfa has exactly one initial state")
    missing = [(q, s) for q in range(n) for s in alphabet.symbols if (q, s) not in seen]
    if missing:
        q, s = missing[0]
        raise reader.error(f"dfa is not complete: no transition from {q} on {s}")
    trans = tuple(tuple(seen[(q, s)] for s in alphabet.symbols) for q in range(n))
    return _validated(
        reader,
        lambda: Dfa(alphabet=alphabet, state_count=n, init=inits[0], finals=frozenset(finals), trans=trans),
    )


def emit_automaton(x: Automaton) -> str:
    kind = "dfa" if isinstance(x, Dfa) else "nfa"
    inits = [x.init] if isinstance(x, Dfa) else sorted(x.inits)
    out = [
        f"type {kind}",
        "alphabet " + " ".join(x.alphabet.symbols),
        f"states {x.state_count}",
        "init " + " ".join(str(q) for q in inits),
        ("final " + " ".join(str(q) for q in sorted(x.finals))).rstrip(),
    ]
    edges = x.as_nfa().edges() if isinstance(x, Dfa) else x.edges()
    out.extend(f"trans {src} {sym} {dst}" for src, sym, dst in edges)
    return "\n".join(out) + "\n"


def parse_dfa(text: str, path: Optional[str] = None) -> Dfa:
    x = parse_automaton(text, path)
    if not isinstance(x, Dfa):
        raise ParseError("expected a dfa", path=path)
    return x


# Lattices and morphisms

def parse_lattice(text: str, path: Optional[str] = None) -> FinLattice:
    reader = _Reader(text, path)
    line, tokens = reader.next("lattice")
    sizes = reader.ints(tokens[1:], line)
    if len(sizes) != 1 or sizes[0] < 1:
        raise reader.error("lattice takes one positive size", line)
    n = sizes[0]
    rows = []
    for _ in range(n):
        line, tokens = reader.next()
        row = "".join(tokens)
        if len(row) != n or set(row) - {"0", "1"}:
            raise reader.error(f"order row must be {n} characters of 0/1", line)
        rows.append(sum(1 << j for j, ch in enumerate(row) if ch == "1"))
    if not reader.at_end():
        raise reader.error("trailing input after the order table")
    return _validated(reader, lambda: FinLattice(size=n, leq=tuple(rows)))


def emit_lattice(s: FinLattice) -> str:
    out = [f"lattice {s.size}"]
    out.extend("".join("1" if row >> j & 1 else "0" for j in range(s.size)) for row in s.leq)
    return "\n".join(out) + "\n"


def parse_morphism(
    text: str,
    load_lattice: Callable[[str], FinLattice],
    path: Optional[str] = None,
) -> JslMorphism:
    """
    `mor <dom-file> <cod-file>` followed by the image of each element.
    Lattice file names are resolved through load_lattice.
    """
    reader = _Reader(text, path)
    line, tokens = reader.next("mor")
    if len(tokens) != 3:
        raise reader.error("mor takes <dom-file> <cod-file>", line)
    dom, cod = load_lattice(tokens[1]), load_lattice(tokens[2])
    values: List[int] = []
    while not reader.at_end():
        line, tokens = reader.next()
        values.extend(reader.ints(tokens, line))
    if len(values) != dom.size:
        raise reader.error(f"expected {dom.size} images, got {len(values)}")
    return _validated(reader, lambda: JslMorphism(dom=dom, cod=cod, map=tuple(values)))


def emit_morphism(f: JslMorphism, dom_file: str, cod_file: str) -> str:
    return f"mor {dom_file} {cod_file}\n" + " ".join(str(v) for v in f.map) + "\n"


# Relations

def _read_rel(reader: _Reader) -> Rel:
    line, tokens = reader.next("rel")
    shape = reader.ints(tokens[1:], line)
    if len(shape) != 2 or min(shape) < 0:
        raise reader.error("rel takes <rows> <cols>", line)
    n_rows, n_cols = shape
    row_labels: Optional[List[str]] = None
    col_labels: Optional[List[str]] = None
    for key in ("rows", "cols"):
        peek = reader.peek()
        if peek is not None and peek[0] == key:
            line, tokens = reader.next(key)
            if key == "rows":
                row_labels = tokens[1:]
            else:
                col_labels = tokens[1:]
    bits = []
    for _ in range(n_rows):
        line, tokens = reader.next()
        row = "".join(tokens)
        if n_cols == 0 and row == "-":
            bits.append(0)
            continue
        if len(row) != n_cols or set(row) - {"0", "1"}:
            raise reader.error(f"relation row must be {n_cols} characters of 0/1", line)
        bits.append(sum(1 << j for j, ch in enumerate(row) if ch == "1"))
    return _validated(reader, lambda: Rel.build(bits, n_cols, row_labels, col_labels), line)


def _rel_lines(r: Rel) -> List[str]:
    out = [f"rel {r.n_rows} {r.n_cols}"]
    if r.n_rows:
        out.append("rows " + " ".join(r.rows))
    if r.n_cols:
        out.append("cols " + " ".join(r.cols))
    for row in r.bits:
        out.append("".join("1" if row >> j & 1 else "0" for j in range(r.n_cols)) or "-")
    return out


def parse_rel(text: str, path: Optional[str] = None) -> Rel:
    reader = _Reader(text, path)
    r = _read_rel(reader)
    if not reader.at_end():
        raise reader.error("trailing input after the relation")
    return r


def emit_rel(r: Rel) -> str:
    return "\n".join(_rel_lines(r)) + "\n"


# Monoids

def parse_monoid(text: str, path: Optional[str] = None) -> MonoidRecognizer:
    reader = _Reader(text, path)
    line, tokens = reader.next("monoid")
    sizes = reader.ints(tokens[1:], line)
    if len(sizes) != 1 or sizes[0] < 1:
        raise reader.error("monoid takes one positive size", line)
    n = sizes[0]
    table = []
    for _ in range(n):
        line, tokens = reader.next()
        row = reader.ints(tokens, line)
        if len(row) != n:
            raise reader.error(f"table row must have {n} entries", line)
        table.append(tuple(row))
    symbols: List[str] = []
    letters: List[int] = []
    finals: List[int] = []
    while not reader.at_end():
        line, tokens = reader.next()
        if tokens[0] == "h" and len(tokens) == 3:
            symbols.append(tokens[1])
            letters.append(reader.ints(tokens[2:], line)[0])
        elif tokens[0] == "final":
            finals.extend(reader.ints(tokens[1:], line))
        else:
            raise reader.error(f"expected 'h <sym> <idx>' or 'final', got '{tokens[0]}'", line)
    if not symbols:
        raise reader.error("monoid needs at least one letter")
    alphabet = _validated(reader, lambda: Alphabet(symbols=tuple(symbols)))
    return _validated(
        reader,
        lambda: MonoidRecognizer(
            alphabet=alphabet, table=tuple(table), letters=tuple(letters), finals=frozenset(finals)
        ),
    )


def emit_monoid(m: MonoidRecognizer) -> str:
    out = [f"monoid {m.size}"]
    out.extend(" ".join(str(v) for v in row) for row in m.table)
    out.extend(f"h {sym} {m.letters[idx]}" for idx, sym in enumerate(m.alphabet.symbols))
    out.append(("final " + " ".join(str(x) for x in sorted(m.finals))).rstrip())
    return "\n".join(out) + "\n"


# Biclique covers

def parse_cover(text: str, path: Optional[str] = None) -> BicliqueCover:
    bicliques = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = _strip(raw)
        if not content:
            continue
        left, sep, right = content.partition("|")
        left_key, _, left_vals = left.strip().partition(":")
        right_key, _, right_vals = right.strip().partition(":")
        if not sep or left_key.strip() != "rows" or right_key.strip() != "cols":
            raise ParseError("expected 'rows: ... | cols: ...'", path=path, line=number)
        try:
            rows = sum(1 << int(t) for t in left_vals.split())
            cols = sum(1 << int(t) for t in right_vals.split())
        except ValueError:
            raise ParseError("biclique indices must be integers", path=path, line=number)
        bicliques.append((rows, cols))
    return BicliqueCover(bicliques=tuple(bicliques))


def emit_cover(c: BicliqueCover) -> str:
    lines = [
        "rows: " + " ".join(str(i) for i in members(rows)) + " | cols: " + " ".join(str(j) for j in members(cols))
        for rows, cols in c.bicliques
    ]
    return "".join(line + "\n" for line in lines)


# Certificates

def parse_certificate(text: str, path: Optional[str] = None) -> Tuple[Certificate, int, str]:
    """
    Returns the certificate, its bound k and the recorded instance digest.
    """
    reader = _Reader(text, path)
    line, tokens = reader.next("certificate")
    if len(tokens) != 2 or tokens[1] not in ("atomic", "subatomic"):
        raise reader.error("certificate kind must be 'atomic' or 'subatomic'", line)
    kind = tokens[1]
    line, tokens = reader.next("k")
    k = reader.ints(tokens[1:], line)
    if len(k) != 1 or k[0] < 0:
        raise reader.error("k takes one non-negative integer", line)
    line, tokens = reader.next("instance")
    digest = tokens[1] if len(tokens) == 2 else ""
    line, tokens = reader.next("alphabet")
    alphabet = _validated(reader, lambda: Alphabet(symbols=tuple(tokens[1:])), line)
    reader.next("S")
    s = _read_rel(reader)
    reader.next("P")
    p = _read_rel(reader)
    reader.next("Q")
    q = _read_rel(reader)
    t: Dict[str, Rel] = {}
    while not reader.at_end():
        line, tokens = reader.next("T")
        if len(tokens) != 2 or tokens[1] not in alphabet.symbols:
            raise reader.error("T takes a symbol of the alphabet", line)
        t[tokens[1]] = _read_rel(reader)
    if set(t) != set(alphabet.symbols):
        raise reader.error("one T section per symbol is required")
    cls = AtomicCertificate if kind == "atomic" else SubatomicCertificate
    cert = _validated(
        reader,
        lambda: cls(alphabet=alphabet, s=s, p=p, q=q, t=tuple(t[sym] for sym in alphabet.symbols)),
    )
    return cert, k[0], digest


def emit_certificate(c: Certificate, k: int, digest: str) -> str:
    out = [f"certificate {c.kind}", f"k {k}", f"instance {digest}", "alphabet " + " ".join(c.alphabet.symbols)]
    for name, rel in (("S", c.s), ("P", c.p), ("Q", c.q)):
        out.append(name)
        out.extend(_rel_lines(rel))
    for sym, rel in zip(c.alphabet.symbols, c.t):
        out.append(f"T {sym}")
        out.extend(_rel_lines(rel))
    return "\n".join(out) + "\n"


def first_keyword(text: str) -> str:
    """First token of the first significant line; tells the file formats apart."""
    reader = _Reader(text)
    peek = reader.peek()
    return peek[0] if peek else ""
