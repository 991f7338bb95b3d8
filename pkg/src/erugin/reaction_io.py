"""Text format and DOT output for reaction networks.

Line grammar (one reaction per line, '#' starts a comment):

    complex ( "->" | "<->" ) complex "@" rate [ "@" rate ]
    complex := "0" | term ( "+" term )*
    term    := [ positive integer ] species-identifier

Rates are positive rationals or decimals ("3/2" and "1.5" both accepted).
Reversible lines carry two rates (forward, backward) and expand into two
reactions.  Unknown species are registered in order of first appearance.
The empty complex is written "0" in both the parser and the DOT output.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .kinetics import Reaction, ReactionNetwork
from .polynomials import ExponentVector


class ReactionSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"\s*(?:(?P<arrow><->|->)|(?P<plus>\+)|(?P<at>@)|(?P<slash>/)"
    r"|(?P<number>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str, line_no: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            column = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ReactionSyntaxError(f"unexpected character {stripped[0]!r}", line_no, column)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


class _LineParser:
    def __init__(self, tokens: list[tuple[str, str, int]], line_no: int, line_len: int):
        self.tokens = tokens
        self.line_no = line_no
        self.line_len = line_len
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def fail(self, message: str):
        column = self.tokens[self.pos][2] if self.pos < len(self.tokens) else self.line_len + 1
        raise ReactionSyntaxError(message, self.line_no, column)

    def take(self, kind: str, message: str) -> tuple[str, str, int]:
        token = self.peek()
        if token is None or token[0] != kind:
            self.fail(message)
        self.pos += 1
        return token

    def parse_complex(self) -> dict[str, int]:
        token = self.peek()
        if token is None:
            self.fail("expected a complex (write the empty complex as '0')")
        if token[0] == "number" and token[1] == "0":
            nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
            if nxt is None or nxt[0] in ("arrow", "at"):
                self.pos += 1
                return {}
        counts: dict[str, int] = {}
        while True:
            count = 1
            token = self.peek()
            if token is not None and token[0] == "number":
                if "." in token[1]:
                    self.fail("stoichiometric coefficients must be integers")
                count = int(token[1])
                if count == 0:
                    self.fail("zero stoichiometric coefficient (write the empty complex as '0')")
                self.pos += 1
            name = self.take("ident", "expected a species identifier")[1]
            counts[name] = counts.get(name, 0) + count
            token = self.peek()
            if token is not None and token[0] == "plus":
                self.pos += 1
                continue
            return counts

    def parse_rate(self) -> Fraction:
        token = self.take("number", "expected a rate")
        value = token[1]
        nxt = self.peek()
        if nxt is not None and nxt[0] == "slash":
            if "." in value:
                self.fail("mixed decimal/fraction rate")
            self.pos += 1
            denom = self.take("number", "expected a denominator")[1]
            if "." in denom:
                self.fail("fractional rate denominator must be an integer")
            rate = Fraction(int(value), int(denom))
        else:
            rate = Fraction(value)
        if rate <= 0:
            raise ReactionSyntaxError(f"rate must be positive, got {rate}", self.line_no, token[2])
        return rate


def parse_reactions(text: str) -> ReactionNetwork:
    """Parse reaction lines into a network; see the module docstring for the grammar."""
    species: list[str] = []
    raw: list[tuple[dict[str, int], dict[str, int], Fraction]] = []

    def register(counts: dict[str, int]) -> None:
        for name in counts:
            if name not in species:
                species.append(name)

    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = _tokenize(body, line_no)
        if not tokens:
            continue
        parser = _LineParser(tokens, line_no, len(body))
        reactant = parser.parse_complex()
        arrow = parser.take("arrow", "expected '->' or '<->'")
        product = parser.parse_complex()
        parser.take("at", "expected '@' before the rate")
        forward = parser.parse_rate()
        backward = None
        if parser.peek() is not None and parser.peek()[0] == "at":
            parser.pos += 1
            backward = parser.parse_rate()
        if parser.peek() is not None:
            parser.fail("unexpected trailing input")
        if arrow[1] == "<->" and backward is None:
            parser.fail("a reversible reaction needs two rates ('@ k1 @ k2')")
        if arrow[1] == "->" and backward is not None:
            parser.fail("an irreversible reaction takes a single rate")
        register(reactant)
        register(product)
        raw.append((reactant, product, forward))
        if backward is not None:
            raw.append((product, reactant, backward))

    names = tuple(species)

    def vector(counts: dict[str, int]) -> ExponentVector:
        return tuple(counts.get(name, 0) for name in names)

    reactions = tuple(Reaction(vector(r), vector(p), rate) for r, p, rate in raw)
    return ReactionNetwork(names, reactions)


def complex_label(exponents: ExponentVector, species: tuple[str, ...]) -> str:
    """Render a complex the usual way: "2X+Y", or "0" when empty."""
    parts = []
    for count, name in zip(exponents, species):
        if count == 1:
            parts.append(name)
        elif count > 1:
            parts.append(f"{count}{name}")
    return "+".join(parts) if parts else "0"


def format_reactions(network: ReactionNetwork) -> str:
    """Canonical text form; ``parse_reactions`` of the result is the identity."""

    def side(exponents: ExponentVector) -> str:
        parts = []
        for count, name in zip(exponents, network.species):
            if count == 1:
                parts.append(name)
            elif count > 1:
                parts.append(f"{count} {name}")
        return " + ".join(parts) if parts else "0"

    lines = [
        f"{side(r.reactant)} -> {side(r.product)} @ {r.rate}"
        for r in network.reactions
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def emit_fhj_dot(network: ReactionNetwork) -> str:
    """Deterministic DOT digraph: complexes as vertices, rate-labeled edges.

    Vertices are sorted lexicographically by label, edges by (source, target,
    rate), so identical networks always render identically.
    """
    labels = {c: complex_label(c, network.species) for c in network.complexes()}
    lines = ["digraph reaction_network {"]
    for label in sorted(labels.values()):
        lines.append(f'  "{label}";')
    edges = sorted(
        (labels[r.reactant], labels[r.product], str(r.rate)) for r in network.reactions
    )
    for src, dst, rate in edges:
        lines.append(f'  "{src}" -> "{dst}" [label="{rate}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
