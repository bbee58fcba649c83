"""
Evaluation-checkable certificates.

A certificate names a few group elements, two words over those names, a
point, and the images of the point under both words. Checking needs nothing
but evaluation: re-apply every letter of both words to the point and compare
with the stored images and the claimed relation ("ne" or "eq").

Text form, one certificate per block::

    CERT lemma31
    MODEL PL
    NOTE swapped h and h^g
    ELEMENT h = PL[(0,0),(1,2),(3,3)]
    LHS h g^-1 h^-1 g
    RHS 1
    CLAIM ne AT 5/2: 3 vs 5/2
    END
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import MalformedCert, ParseError
from .lex import LexAut, TowerModel, format_lexaut, format_point, parse_lexaut, parse_model, parse_point
from .plmap import PLMap, parse_plmap

Element = Union[PLMap, LexAut]
Token = tuple  # (name, +1 | -1)
Word = tuple  # tuple[Token, ...]

RELATIONS = ("ne", "eq")


# -- words -----------------------------------------------------------------


def letter(name: str) -> Word:
    return ((name, 1),)


def w_inv(word: Word) -> Word:
    return tuple((n, -e) for n, e in reversed(word))


def w_conj(a: Word, b: Word) -> Word:
    """a^b = b^-1 a b."""
    return w_inv(b) + a + b


def w_comm(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return w_inv(a) + w_inv(b) + a + b


def w_subst(word: Word, name: str, replacement: Word) -> Word:
    out = []
    for n, e in word:
        if n == name:
            out.extend(replacement if e == 1 else w_inv(replacement))
        else:
            out.append((n, e))
    return tuple(out)


def w_reduce(word: Word) -> Word:
    """Free reduction: cancel adjacent ``x x^-1`` pairs."""
    out: list = []
    for tok in word:
        if out and out[-1][0] == tok[0] and out[-1][1] == -tok[1]:
            out.pop()
        else:
            out.append(tok)
    return tuple(out)


def fmt_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(n if e == 1 else f"{n}^-1" for n, e in word)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def parse_word(text: str, line: int = 1) -> Word:
    text = text.strip()
    if text == "1":
        return ()
    out = []
    col = 1
    for token in text.split(" "):
        name, exp = token, 1
        if token.endswith("^-1"):
            name, exp = token[:-3], -1
        if not _NAME_RE.fullmatch(name):
            raise ParseError(f"bad word letter {token!r}", line, col)
        out.append((name, exp))
        col += len(token) + 1
    return tuple(out)


def evaluate(word: Word, elements: Mapping[str, Element], point):
    inverses: dict[str, Element] = {}
    for name, exp in word:
        if name not in elements:
            raise MalformedCert(f"word references unknown element {name!r}")
        g = elements[name]
        if exp == -1:
            if name not in inverses:
                inverses[name] = g.inverse()
            g = inverses[name]
        point = g(point)
    return point


def word_element(word: Word, elements: Mapping[str, Element], identity: Element) -> Element:
    out = identity
    for name, exp in word:
        g = elements[name]
        out = out * (g if exp == 1 else g.inverse())
    return out


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class WitnessCert:
    claim: str
    relation: str
    elements: tuple  # ((name, element), ...)
    lhs: Word
    rhs: Word
    point: object
    lhs_image: object
    rhs_image: object
    model: TowerModel | None = None  # None: elements are plain PL maps
    notes: tuple = ()

    @property
    def element_map(self) -> dict[str, Element]:
        return dict(self.elements)

    def to_text(self) -> str:
        return format_cert(self)


def make_cert(claim: str, relation: str, elements: Mapping[str, Element], lhs: Word, rhs: Word,
              point, notes: Sequence[str] = ()) -> WitnessCert:
    """Evaluate both words at ``point`` and package the result."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    used = {n for n, _ in lhs + rhs}
    items = tuple((n, elements[n]) for n in elements if n in used)
    model = None
    for _, g in items:
        if isinstance(g, LexAut):
            model = g.model
    emap = dict(items)
    return WitnessCert(
        claim=claim,
        relation=relation,
        elements=items,
        lhs=tuple(lhs),
        rhs=tuple(rhs),
        point=point,
        lhs_image=evaluate(lhs, emap, point),
        rhs_image=evaluate(rhs, emap, point),
        model=model,
        notes=tuple(notes),
    )


def check_cert(cert: WitnessCert) -> bool:
    """Re-evaluate both words; true iff the stored images and relation are reproduced."""
    emap = cert.element_map
    for name, _ in cert.lhs + cert.rhs:
        if name not in emap:
            raise MalformedCert(f"word references unknown element {name!r}")
    lhs = evaluate(cert.lhs, emap, cert.point)
    rhs = evaluate(cert.rhs, emap, cert.point)
    if lhs != cert.lhs_image or rhs != cert.rhs_image:
        return False
    if cert.relation == "ne":
        return lhs != rhs
    if cert.relation == "eq":
        return lhs == rhs
    return False


def substitute(cert: WitnessCert, name: str, replacement: Word, new_elements: Mapping[str, Element],
               claim: str | None = None, notes: Sequence[str] = ()) -> WitnessCert:
    """Rewrite letter ``name`` as a word over ``new_elements`` and re-evaluate."""
    emap = {n: g for n, g in cert.elements if n != name}
    emap.update(new_elements)
    return make_cert(
        claim or cert.claim,
        cert.relation,
        emap,
        w_subst(cert.lhs, name, replacement),
        w_subst(cert.rhs, name, replacement),
        cert.point,
        tuple(cert.notes) + tuple(notes),
    )


# -- text ---------------------------------------------------------------------------


def _fmt_element(g: Element) -> str:
    return str(g) if isinstance(g, PLMap) else format_lexaut(g)


def format_cert(cert: WitnessCert) -> str:
    lines = [f"CERT {cert.claim}", f"MODEL {cert.model if cert.model is not None else 'PL'}"]
    lines += [f"NOTE {n}" for n in cert.notes]
    lines += [f"ELEMENT {n} = {_fmt_element(g)}" for n, g in cert.elements]
    lines.append(f"LHS {fmt_word(cert.lhs)}")
    lines.append(f"RHS {fmt_word(cert.rhs)}")
    lines.append(
        f"CLAIM {cert.relation} AT {format_point(cert.point)}: "
        f"{format_point(cert.lhs_image)} vs {format_point(cert.rhs_image)}"
    )
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_certs(certs: Iterable[WitnessCert]) -> str:
    return "\n".join(format_cert(c) for c in certs)


_CLAIM_RE = re.compile(r"CLAIM (\w+) AT (\S+): (\S+) vs (\S+)")


def parse_certs(text: str) -> list[WitnessCert]:
    """Parse every certificate block in ``text``; blank lines between blocks are ignored."""
    lines = text.split("\n")
    certs = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        cert, i = _parse_block(lines, i)
        certs.append(cert)
    if not certs:
        raise ParseError("no certificate found", 1, 1)
    return certs


def _take(lines: list[str], i: int, prefix: str) -> str:
    if i >= len(lines) or not lines[i].startswith(prefix):
        raise ParseError(f"expected {prefix.strip()!r}", i + 1, 1)
    return lines[i][len(prefix):]


def _parse_block(lines: list[str], i: int) -> tuple[WitnessCert, int]:
    claim = _take(lines, i, "CERT ")
    i += 1
    model_text = _take(lines, i, "MODEL ")
    model = None if model_text == "PL" else parse_model(model_text)
    i += 1
    notes = []
    while i < len(lines) and lines[i].startswith("NOTE "):
        notes.append(lines[i][5:])
        i += 1
    elements = []
    while i < len(lines) and lines[i].startswith("ELEMENT "):
        body = lines[i][8:]
        name, sep, rest = body.partition(" = ")
        if not sep or not _NAME_RE.fullmatch(name):
            raise ParseError("expected 'ELEMENT <name> = <element>'", i + 1, 9)
        try:
            g = parse_plmap(rest) if model is None else parse_lexaut(rest, model, line=i + 1)
        except ParseError as exc:
            raise ParseError(str(exc).split(" (line")[0], i + 1, 9 + len(name) + 3 + exc.column - 1) from None
        elements.append((name, g))
        i += 1
    lhs = parse_word(_take(lines, i, "LHS "), i + 1)
    i += 1
    rhs = parse_word(_take(lines, i, "RHS "), i + 1)
    i += 1
    claim_line = lines[i] if i < len(lines) else ""
    m = _CLAIM_RE.fullmatch(claim_line)
    if not m:
        raise ParseError("expected 'CLAIM <relation> AT <point>: <lhs> vs <rhs>'", i + 1, 1)
    if m.group(1) not in RELATIONS:
        raise ParseError(f"unknown relation {m.group(1)!r}", i + 1, 7)
    point, lhs_image, rhs_image = (parse_point(m.group(k), i + 1) for k in (2, 3, 4))
    i += 1
    _take(lines, i, "END")
    if lines[i] != "END":
        raise ParseError("expected 'END'", i + 1, 1)
    i += 1
    cert = WitnessCert(
        claim=claim,
        relation=m.group(1),
        elements=tuple(elements),
        lhs=lhs,
        rhs=rhs,
        point=point,
        lhs_image=lhs_image,
        rhs_image=rhs_image,
        model=model,
        notes=tuple(notes),
    )
    return cert, i
