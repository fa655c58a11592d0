"""Algebra descriptor documents (YAML) and their conversion to TrinomialData.

Format::

    kind: type2          # or type1
    m: 0
    blocks:              # exponent tuples l_iota, ..., l_r
      - [2]
      - [2, 1]
      - [4]
    a:                   # type 1: [a_1, ..., a_r]; type 2: two rows of A
      - [1, 0, -1]
      - [0, 1, -1]

Scalars are integers or strings ``"p/q"``.
"""

from __future__ import annotations

import re
from fractions import Fraction

import yaml

from .errors import ParseError
from .model import Kind, ModelError, TrinomialData

_RATIONAL = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")
_KEYS = ("kind", "m", "blocks", "a")


def _where(node) -> tuple[int, int]:
    return node.start_mark.line + 1, node.start_mark.column + 1


def _fail(msg: str, node) -> ParseError:
    return ParseError(msg, *_where(node))


def _scalar(node) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise _fail("expected a scalar", node)
    return node.value


def _int(node, what: str) -> int:
    text = _scalar(node)
    if not re.fullmatch(r"-?\d+", text.strip()):
        raise _fail(f"{what} must be an integer, got {text!r}", node)
    return int(text)


def _rational(node) -> Fraction:
    text = _scalar(node)
    m = _RATIONAL.match(text)
    if not m:
        line, col = _where(node)
        # point at the first character that breaks the p/q grammar
        quoted = node.style in ("'", '"')
        good = re.match(r"\s*-?\d*\s*/?\s*\d*", text).end()
        raise ParseError(f"malformed rational {text!r}", line, col + good + (1 if quoted else 0))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise _fail(f"zero denominator in {text!r}", node)
    return Fraction(int(m.group(1)), den)


def _seq(node, what: str) -> list:
    if not isinstance(node, yaml.SequenceNode):
        raise _fail(f"{what} must be a list", node)
    return node.value


def loads(text: str) -> TrinomialData:
    """Parse a descriptor; raises ParseError with the offending line and column."""
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (1, 1)
        raise ParseError(f"invalid YAML: {exc.problem or exc}", line, col) from None
    if root is None or not isinstance(root, yaml.MappingNode):
        raise ParseError("descriptor must be a mapping", 1, 1)
    fields = {}
    for key, value in root.value:
        name = _scalar(key)
        if name not in _KEYS:
            raise _fail(f"unknown key {name!r}", key)
        if name in fields:
            raise _fail(f"duplicate key {name!r}", key)
        fields[name] = value
    for name in _KEYS:
        if name not in fields and name != "m":
            raise ParseError(f"missing key {name!r}", *_where(root))
    kind_text = _scalar(fields["kind"]).strip().lower()
    try:
        kind = Kind(kind_text)
    except ValueError:
        raise _fail(f"kind must be type1 or type2, got {kind_text!r}", fields["kind"]) from None
    m = _int(fields["m"], "m") if "m" in fields else 0
    blocks = []
    for b in _seq(fields["blocks"], "blocks"):
        blocks.append(tuple(_int(e, "exponent") for e in _seq(b, "block")))
    a_node = fields["a"]
    try:
        if kind is Kind.TYPE1:
            a = [_rational(x) for x in _seq(a_node, "a")]
            return TrinomialData.type1(blocks, a, m=m)
        rows = _seq(a_node, "a")
        if len(rows) != 2:
            raise _fail("type-2 matrix a must have two rows", a_node)
        r0, r1 = ([_rational(x) for x in _seq(row, "row")] for row in rows)
        if len(r0) != len(r1):
            raise _fail("rows of a have different lengths", a_node)
        return TrinomialData.type2(blocks, [r0, r1], m=m)
    except ModelError as exc:
        raise _fail(str(exc), a_node) from None


def load(path) -> TrinomialData:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _fmt(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(data: TrinomialData) -> str:
    if data.kind is Kind.TYPE1:
        a = [_fmt(x) for x in data.a]
    else:
        a = [[_fmt(c[0]) for c in data.a], [_fmt(c[1]) for c in data.a]]
    doc = {"kind": data.kind.value, "m": data.m, "blocks": [list(b) for b in data.blocks], "a": a}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
