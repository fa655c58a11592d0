"""Sparse polynomials over Q and the normal form modulo the trinomial ideal.

Elements of the free ring K[T_ij, S_k] are :class:`Poly`; normal forms are
:class:`QuotientPoly`.  A monomial is in normal form when, for every block
``i >= 2``, its block-``i`` exponents do not dominate ``l_i``.  The rewrite
rules replace ``T_i^{l_i}`` (``i >= 2``) by

* type 1: ``T_1^{l_1} - (a_i - a_1)``
* type 2: ``lam_i T_0^{l_0} + nu_i T_1^{l_1}`` with ``a_i = lam_i a_0 + nu_i a_1``.

The leading monomials of the rules use pairwise disjoint variables, so they
form a Groebner basis for a block elimination order and normal forms are
unique.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from operator import add
from typing import TYPE_CHECKING, Iterable, Mapping, Union

from .errors import MixedContext, NotHomogeneous, ParseError
from .model import GeneratorId, Kind, S, T, TrinomialData, det2, require_valid

if TYPE_CHECKING:
    from .grading import GradingGroup, GroupElement

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class DecompositionFailed(RuntimeError):
    """Homogeneous element without the expected product structure (a bug)."""


class Poly:
    """Element of the free polynomial ring attached to ``ring``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "PolyRing", terms: Mapping[Monomial, Scalar] | None = None):
        self.ring = ring
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[e] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # --- coercion -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring.data != self.ring.data:
                raise MixedContext("polynomials from different algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other, quotient=isinstance(self, QuotientPoly))
        return NotImplemented

    def _result_cls(self, other: "Poly"):
        return QuotientPoly if isinstance(self, QuotientPoly) and isinstance(other, QuotientPoly) else Poly

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._result_cls(other)._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar):
        c = Fraction(c)
        if not c:
            return type(self)._raw(self.ring, {})
        return type(self)._raw(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        prod = Poly._raw(self.ring, terms)
        if self._result_cls(other) is QuotientPoly:
            return self.ring.reduce(prod)
        return prod

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.const(1, quotient=isinstance(self, QuotientPoly))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # --- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.data == other.ring.data and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.zero_monomial, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def derivative(self, gen: GeneratorId | int) -> "Poly":
        """Formal partial derivative in the free ring."""
        k = gen if isinstance(gen, int) else self.ring.index[gen]
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                terms[tuple(f)] = c * e[k]
        return Poly._raw(self.ring, terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def free(self) -> "Poly":
        return Poly._raw(self.ring, dict(self.terms))

    def __str__(self) -> str:
        return self.ring.render(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class QuotientPoly(Poly):
    """A :class:`Poly` in normal form; products are reduced automatically."""

    __slots__ = ()


def _bivar_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(map(add, e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _bivar_pow(f: dict, k: int, nvars: int) -> dict:
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        out = _bivar_mul(out, f)
    return out


@dataclass(frozen=True)
class Decomposition:
    """``h = F(u[, v]) * T^b * S^d`` for a homogeneous ``h``.

    For type 1, ``F`` is univariate in ``u = T_1^{l_1}``; for type 2 it is a
    homogeneous bivariate form in ``u = T_1^{l_1}``, ``v = T_2^{l_2}``.  Keys
    of ``F`` are exponent tuples ``(q,)`` or ``(p, q)``.
    """

    ring: "PolyRing"
    F: dict
    rest: Monomial

    @property
    def b(self) -> dict[T, int]:
        return {g: e for g, e in zip(self.ring.gens, self.rest) if isinstance(g, T) and e}

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(self.rest[self.ring.index[S(k)]] for k in range(1, self.ring.data.m + 1))

    @property
    def form_degree(self) -> int:
        return max((sum(e) for e in self.F), default=0)

    def expand(self) -> QuotientPoly:
        ring = self.ring
        mono = ring.monomial(self.rest)
        if ring.data.kind is Kind.TYPE1:
            u = ring.block_monomial(1)
            total = sum((u ** e[0] * c for e, c in self.F.items()), ring.zero)
        else:
            u, v = ring.block_monomial(1), ring.block_monomial(2)
            total = sum((u ** e[0] * v ** e[1] * c for e, c in self.F.items()), ring.zero)
        return ring.reduce(total * mono)


class PolyRing:
    """The free ring K[T_ij, S_k] of some data, with reduction modulo its ideal."""

    def __init__(self, data: TrinomialData):
        self.data = require_valid(data)
        self.gens: tuple[GeneratorId, ...] = data.generators
        self.index: dict[GeneratorId, int] = {g: k for k, g in enumerate(self.gens)}
        self.nvars = len(self.gens)
        self.zero_monomial: Monomial = (0,) * self.nvars
        self.block_positions = {i: [self.index[T(i, j)] for j in range(1, data.n_i(i) + 1)]
                                for i in data.block_range}
        self._monomial_cache: dict[Monomial, dict] = {}
        self._power_cache: dict[tuple[int, int], dict] = {}
        self._degree_cache: dict = {}
        self._rules = {i: self._rule(i) for i in data.block_range if i >= 2}

    # --- construction --------------------------------------------------
    @property
    def zero(self) -> QuotientPoly:
        return QuotientPoly._raw(self, {})

    @property
    def one(self) -> QuotientPoly:
        return self.const(1)

    def const(self, c: Scalar, quotient: bool = True) -> Poly:
        cls = QuotientPoly if quotient else Poly
        c = Fraction(c)
        return cls._raw(self, {self.zero_monomial: c} if c else {})

    def monomial(self, exps: Iterable[int], coeff: Scalar = 1) -> Poly:
        return Poly(self, {tuple(exps): coeff})

    def gen(self, g: GeneratorId) -> Poly:
        e = [0] * self.nvars
        e[self.index[g]] = 1
        return Poly._raw(self, {tuple(e): Fraction(1)})

    def T(self, i: int, j: int) -> Poly:
        return self.gen(T(i, j))

    def S(self, k: int) -> Poly:
        return self.gen(S(k))

    def poly(self, terms: Mapping[Monomial, Scalar]) -> Poly:
        return Poly(self, terms)

    def block_exponent_vector(self, i: int, power: int = 1) -> Monomial:
        e = [0] * self.nvars
        for pos, l in zip(self.block_positions[i], self.data.exponents(i)):
            e[pos] = l * power
        return tuple(e)

    def block_monomial(self, i: int) -> Poly:
        """The monomial T_i^{l_i} in the free ring."""
        return Poly._raw(self, {self.block_exponent_vector(i): Fraction(1)})

    def block_derivative(self, i: int, c: int) -> Poly:
        """The partial derivative of T_i^{l_i} with respect to T_{ic}."""
        return self.block_monomial(i).derivative(T(i, c))

    def defining_polynomials(self) -> list[Poly]:
        data = self.data
        out = []
        for i in data.relation_range:
            if data.kind is Kind.TYPE1:
                g = self.block_monomial(i) - self.block_monomial(i + 1) - (data.scalar(i + 1) - data.scalar(i))
            else:
                a = data.column
                g = (self.block_monomial(i) * det2(a(i + 1), a(i + 2))
                     - self.block_monomial(i + 1) * det2(a(i), a(i + 2))
                     + self.block_monomial(i + 2) * det2(a(i), a(i + 1)))
            out.append(g)
        return out

    # --- reduction -----------------------------------------------------
    def _rule(self, i: int) -> dict[Monomial, Fraction]:
        data = self.data
        if data.kind is Kind.TYPE1:
            rhs = self.block_monomial(1) - (data.scalar(i) - data.scalar(1))
        else:
            a = data.column
            base = det2(a(0), a(1))
            lam = det2(a(i), a(1)) / base
            nu = det2(a(0), a(i)) / base
            rhs = self.block_monomial(0) * lam + self.block_monomial(1) * nu
        return rhs.terms

    def rewrite_rule(self, i: int) -> Poly:
        """Right-hand side replacing T_i^{l_i} for a rewritten block i >= 2."""
        return Poly(self, self._rules[i])

    def _rule_power(self, i: int, q: int) -> dict:
        key = (i, q)
        hit = self._power_cache.get(key)
        if hit is None:
            hit = _bivar_pow(self._rules[i], q, self.nvars) if q > 1 else self._rules[i]
            self._power_cache[key] = hit
        return hit

    def _reduce_monomial(self, e: Monomial) -> dict[Monomial, Fraction]:
        hit = self._monomial_cache.get(e)
        if hit is not None:
            return hit
        rest = list(e)
        factor = None
        for i, rule in self._rules.items():
            positions = self.block_positions[i]
            exps = self.data.exponents(i)
            q = min(rest[p] // l for p, l in zip(positions, exps))
            if q:
                for p, l in zip(positions, exps):
                    rest[p] -= q * l
                powered = self._rule_power(i, q)
                factor = powered if factor is None else _bivar_mul(factor, powered)
        if factor is None:
            out = {e: Fraction(1)}
        else:
            rest_t = tuple(rest)
            out = {tuple(map(add, f, rest_t)): c for f, c in factor.items()}
        if len(self._monomial_cache) > 500_000:
            self._monomial_cache.clear()
        self._monomial_cache[e] = out
        return out

    def is_normal_monomial(self, e: Monomial) -> bool:
        for i in self._rules:
            if all(e[p] >= l for p, l in zip(self.block_positions[i], self.data.exponents(i))):
                return False
        return True

    def reduce(self, p: Poly) -> QuotientPoly:
        """Normal form of ``p`` modulo the defining ideal."""
        if isinstance(p, QuotientPoly):
            return p
        if p.ring is not self and p.ring.data != self.data:
            raise MixedContext("polynomial from a different algebra")
        terms: dict[Monomial, Fraction] = {}
        for e, c in p.terms.items():
            for f, d in self._reduce_monomial(e).items():
                v = terms.get(f, 0) + c * d
                if v:
                    terms[f] = v
                else:
                    del terms[f]
        return QuotientPoly._raw(self, terms)

    def equals_in_quotient(self, p: Poly, q: Poly) -> bool:
        return self.reduce(p - q).is_zero()

    # --- grading ---------------------------------------------------------
    @cached_property
    def grading(self) -> "GradingGroup":
        from .grading import build_grading

        return build_grading(self.data)

    def monomial_degree(self, e: Monomial) -> "GroupElement":
        hit = self._degree_cache.get(e)
        if hit is None:
            hit = self.grading.element(e)
            if len(self._degree_cache) > 500_000:
                self._degree_cache.clear()
            self._degree_cache[e] = hit
        return hit

    def homogeneous_components(self, p: Poly) -> dict["GroupElement", Poly]:
        groups: dict = {}
        for e, c in p.terms.items():
            groups.setdefault(self.monomial_degree(e), {})[e] = c
        cls = type(p)
        return {deg: cls._raw(self, terms) for deg, terms in groups.items()}

    def degree_of(self, p: Poly) -> "GroupElement":
        """Degree of a nonzero homogeneous element."""
        comps = self.homogeneous_components(p)
        if len(comps) != 1:
            raise NotHomogeneous(f"{p} has {len(comps)} homogeneous components")
        return next(iter(comps))

    def is_homogeneous(self, p: Poly) -> bool:
        return len(self.homogeneous_components(p)) <= 1

    def structure_decomposition(self, p: Poly) -> Decomposition:
        """Write a nonzero homogeneous element as ``F(u[, v]) * T^b * S^d``."""
        p = self.reduce(p)
        if p.is_zero():
            raise NotHomogeneous("the zero element has no structure decomposition")
        self.degree_of(p)
        data = self.data
        bases = [1] if data.kind is Kind.TYPE1 else [0, 1]
        rest_of: Monomial | None = None
        G: dict[tuple[int, ...], Fraction] = {}
        for e, c in p.terms.items():
            rest = list(e)
            qs = []
            for i in bases:
                positions = self.block_positions[i]
                exps = data.exponents(i)
                q = min(rest[pos] // l for pos, l in zip(positions, exps))
                for pos, l in zip(positions, exps):
                    rest[pos] -= q * l
                qs.append(q)
            rest_t = tuple(rest)
            if rest_of is None:
                rest_of = rest_t
            elif rest_t != rest_of:
                raise DecompositionFailed(f"monomials of {p} do not share a common cofactor")
            G[tuple(qs)] = c
        if data.kind is Kind.TYPE1:
            F = G
        else:
            if len({sum(k) for k in G}) != 1:
                raise DecompositionFailed(f"{p} is not a form in T_0^l_0, T_1^l_1")
            # T_0^{l_0} = (v - nu_2 u) / lam_2 in terms of u = T_1^{l_1}, v = T_2^{l_2}
            a = data.column
            base = det2(a(0), a(1))
            lam = det2(a(2), a(1)) / base
            nu = det2(a(0), a(2)) / base
            x = {(1, 0): -nu / lam, (0, 1): 1 / lam}
            F = {}
            for (p0, p1), c in G.items():
                term = _bivar_mul(_bivar_pow(x, p0, 2), {(p1, 0): c})
                for k, v in term.items():
                    s = F.get(k, 0) + v
                    if s:
                        F[k] = s
                    else:
                        F.pop(k, None)
        dec = Decomposition(self, F, rest_of)
        if dec.expand() != p:
            raise DecompositionFailed(f"decomposition of {p} does not reproduce it")
        return dec

    # --- text ------------------------------------------------------------
    def render_monomial(self, e: Monomial) -> str:
        parts = []
        for g, x in zip(self.gens, e):
            if x == 1:
                parts.append(str(g))
            elif x:
                parts.append(f"{g}^{x}")
        return "*".join(parts)

    def render(self, p: Poly) -> str:
        if not p.terms:
            return "0"
        out = []
        for k, (e, c) in enumerate(p.sorted_terms()):
            mono = self.render_monomial(e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                out.append(body if sign == "+" else "-" + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def parse(self, text: str, line: int = 1) -> Poly:
        return _Parser(self, text, line).parse()


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<T>T\[(\d+)\]\[(\d+)\])|(?P<S>S\[(\d+)\])|(?P<op>[-+*/^()]))")


class _Parser:
    """Recursive descent over ``c*T[i][j]^e*...`` with +, -, *, ^ and parentheses."""

    def __init__(self, ring: PolyRing, text: str, line: int):
        self.ring, self.text, self.line = ring, text, line
        self.tokens: list[tuple[str, object, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line,
                                 pos + 1 + len(text[pos:]) - len(text[pos:].lstrip()))
            col = m.start(m.lastgroup) + 1
            if m.group("num"):
                self.tokens.append(("num", int(m.group("num")), col))
            elif m.group("T"):
                self.tokens.append(("gen", T(int(m.group(3)), int(m.group(4))), col))
            elif m.group("S"):
                self.tokens.append(("gen", S(int(m.group(6))), col))
            else:
                self.tokens.append(("op", m.group("op"), col))
            pos = m.end()
        self.k = 0

    def _peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else ("end", None, len(self.text) + 1)

    def _next(self):
        tok = self._peek()
        self.k += 1
        return tok

    def _fail(self, msg, tok):
        raise ParseError(msg, self.line, tok[2])

    def parse(self) -> Poly:
        if not self.tokens:
            self._fail("empty polynomial", self._peek())
        p = self._expr()
        tok = self._peek()
        if tok[0] != "end":
            self._fail(f"unexpected {tok[1]!r}", tok)
        return p

    def _expr(self) -> Poly:
        sign = 1
        tok = self._peek()
        if tok[0] == "op" and tok[1] in "+-":
            self._next()
            sign = -1 if tok[1] == "-" else 1
        acc = self._term().scale(sign)
        while True:
            tok = self._peek()
            if tok[0] == "op" and tok[1] in "+-":
                self._next()
                t = self._term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def _term(self) -> Poly:
        acc = self._factor()
        while self._peek()[:2] == ("op", "*"):
            self._next()
            acc = acc * self._factor()
        return acc

    def _factor(self) -> Poly:
        base = self._atom()
        if self._peek()[:2] == ("op", "^"):
            self._next()
            tok = self._next()
            if tok[0] != "num":
                self._fail("exponent must be a non-negative integer", tok)
            base = base ** tok[1]
        return base

    def _atom(self) -> Poly:
        tok = self._next()
        kind, val, _ = tok
        if kind == "num":
            num = Fraction(val)
            if self._peek()[:2] == ("op", "/"):
                self._next()
                den = self._next()
                if den[0] != "num" or den[1] == 0:
                    self._fail("malformed rational", den)
                num = Fraction(val, den[1])
            return self.ring.const(num, quotient=False)
        if kind == "gen":
            if val not in self.ring.index:
                self._fail(f"unknown generator {val}", tok)
            return self.ring.gen(val)
        if (kind, val) == ("op", "("):
            inner = self._expr()
            close = self._next()
            if close[:2] != ("op", ")"):
                self._fail("missing ')'", close)
            return inner
        self._fail(f"unexpected {val!r}" if kind != "end" else "unexpected end of input", tok)


@lru_cache(maxsize=256)
def ring_for(data: TrinomialData) -> PolyRing:
    """The (shared) ring of ``data``."""
    return PolyRing(data)


def reduce(p: Poly) -> QuotientPoly:
    return p.ring.reduce(p)


def equals_in_quotient(p: Poly, q: Poly) -> bool:
    if p.ring is not q.ring and p.ring.data != q.ring.data:
        raise MixedContext("polynomials from different algebras")
    return p.ring.equals_in_quotient(p, q)


def homogeneous_components(p: Poly) -> dict:
    return p.ring.homogeneous_components(p)


def structure_decomposition(p: Poly) -> Decomposition:
    return p.ring.structure_decomposition(p)
