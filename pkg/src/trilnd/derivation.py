"""Derivations of a trinomial algebra given by their values on generators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from operator import add
from typing import Mapping, Optional, Union

from .errors import MixedContext
from .grading import GroupElement
from .model import GeneratorId, S, T
from .polyring import Poly, PolyRing, QuotientPoly


class NotWellDefined(ValueError):
    def __init__(self, certificate: "WellDefinedness"):
        bad = ", ".join(f"g_{i} -> {p}" for i, p in certificate.residues.items() if p)
        super().__init__(f"images do not preserve the ideal: {bad}")
        self.certificate = certificate


class NotNilpotent(ValueError):
    pass


@dataclass(frozen=True)
class NotVerified:
    """Nilpotency could not be confirmed within ``cap`` steps."""

    cap: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class WellDefinedness:
    """``residues[i]`` is the normal form of the derivation applied to g_i."""

    residues: dict[int, QuotientPoly]

    @property
    def ok(self) -> bool:
        return not any(self.residues.values())

    def __bool__(self) -> bool:
        return self.ok


def _leibniz(ring: PolyRing, images: Mapping[int, Poly], p: Poly) -> Poly:
    terms: dict = {}
    for e, c in p.terms.items():
        for k, img in images.items():
            ek = e[k]
            if not ek:
                continue
            base = list(e)
            base[k] -= 1
            base = tuple(base)
            coef = c * ek
            for f, d in img.terms.items():
                g = tuple(map(add, base, f))
                v = terms.get(g, 0) + coef * d
                if v:
                    terms[g] = v
                else:
                    del terms[g]
    return Poly._raw(ring, terms)


def is_well_defined(ring: PolyRing, images: Mapping[GeneratorId, Poly]) -> WellDefinedness:
    """Check that the Leibniz extension of ``images`` kills every g_i modulo the ideal."""
    idx = {ring.index[g]: ring.reduce(p) if isinstance(p, Poly) else ring.const(p)
           for g, p in images.items()}
    idx = {k: p for k, p in idx.items() if p}
    residues = {}
    for i, g in zip(ring.data.relation_range, ring.defining_polynomials()):
        residues[i] = ring.reduce(_leibniz(ring, idx, g))
    return WellDefinedness(residues)


class Derivation:
    """A derivation of R(A, P0), determined by the images of the generators.

    Construction checks well-definedness unless ``check=False``.
    """

    def __init__(self, ring: PolyRing, images: Mapping[GeneratorId, Union[Poly, int, Fraction]],
                 check: bool = True):
        self.ring = ring
        clean: dict[GeneratorId, QuotientPoly] = {}
        for g, p in images.items():
            if g not in ring.index:
                raise KeyError(f"{g} is not a generator of this algebra")
            if isinstance(p, Poly):
                if p.ring is not ring and p.ring.data != ring.data:
                    raise MixedContext("image from a different algebra")
                q = ring.reduce(p)
            else:
                q = ring.const(p)
            if q:
                clean[g] = q
        self.images = clean
        self._by_index = {ring.index[g]: p for g, p in clean.items()}
        if check:
            cert = is_well_defined(ring, clean)
            if not cert:
                raise NotWellDefined(cert)

    def image(self, g: GeneratorId) -> QuotientPoly:
        return self.images.get(g, self.ring.zero)

    def apply(self, p: Poly) -> QuotientPoly:
        if p.ring is not self.ring and p.ring.data != self.ring.data:
            raise MixedContext("polynomial from a different algebra")
        return self.ring.reduce(_leibniz(self.ring, self._by_index, p))

    __call__ = apply

    def is_zero(self) -> bool:
        return not self.images

    def multiply(self, h: Poly) -> "Derivation":
        """The derivation ``h * self``."""
        h = self.ring.reduce(h)
        return Derivation(self.ring, {g: h * p for g, p in self.images.items()}, check=False)

    def scale(self, c) -> "Derivation":
        return Derivation(self.ring, {g: p.scale(c) for g, p in self.images.items()}, check=False)

    def normalized(self) -> "Derivation":
        """Scalar multiple whose first nonzero coefficient (generator order, then term order) is 1."""
        for g in self.ring.gens:
            if g in self.images:
                lead = self.images[g].sorted_terms()[0][1]
                return self.scale(1 / lead)
        return self

    def non_kernel_generators(self) -> list[GeneratorId]:
        return [g for g in self.ring.gens if g in self.images]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring.data == other.ring.data and self.images == other.images

    def __hash__(self):
        return hash(frozenset(self.images.items()))

    def render(self) -> str:
        return "\n".join(f"D({g}) = {self.images[g]}" for g in self.ring.gens if g in self.images)

    def __str__(self) -> str:
        return self.render() or "D = 0"

    def __repr__(self) -> str:
        return f"Derivation({'; '.join(self.render().splitlines()) or '0'})"


def apply(delta: Derivation, p: Poly) -> QuotientPoly:
    return delta.apply(p)


def degree_of(delta: Derivation) -> Optional[GroupElement]:
    """The degree of ``delta`` if it is K0-homogeneous, else ``None``.

    The zero derivation is reported with the zero element.
    """
    ring = delta.ring
    g = ring.grading
    d = None
    for x, img in delta.images.items():
        comps = ring.homogeneous_components(img)
        if len(comps) != 1:
            return None
        shift = next(iter(comps)) - g.degree(x)
        if d is None:
            d = shift
        elif d != shift:
            return None
    return g.zero if d is None else d


def default_cap(delta: Derivation) -> int:
    data = delta.ring.data
    return 2 + sum(sum(b) for b in data.blocks) + sum(p.total_degree() for p in delta.images.values())


def nilpotency_index(delta: Derivation, x: GeneratorId, cap: int | None = None,
                     max_terms: int | None = None) -> Union[int, NotVerified]:
    """Smallest ``n <= cap`` with ``delta^n(x) = 0``.

    ``max_terms`` abandons the iteration (as not verified) once an iterate
    grows beyond that many terms.
    """
    if cap is None:
        cap = default_cap(delta)
    if cap < 1:
        raise ValueError("cap must be at least 1")
    p: Poly = delta.ring.gen(x)
    for n in range(1, cap + 1):
        p = delta.apply(p)
        if p.is_zero():
            return n
        if max_terms is not None and len(p) > max_terms:
            break
    return NotVerified(cap)


def is_locally_nilpotent_on_generators(delta: Derivation, cap: int | None = None,
                                       max_terms: int | None = None) -> Union[bool, NotVerified]:
    if cap is None:
        cap = default_cap(delta)
    for x in delta.images:
        res = nilpotency_index(delta, x, cap, max_terms)
        if isinstance(res, NotVerified):
            return res
    return True


class Flow:
    """The additive group action exp(t D): each generator maps to a polynomial in ``t``.

    ``images[x][k]`` is the coefficient of ``t^k``.
    """

    def __init__(self, ring: PolyRing, images: dict[GeneratorId, tuple[QuotientPoly, ...]]):
        self.ring = ring
        self.images = images

    def substitute(self, p: Poly) -> list[QuotientPoly]:
        """Coefficients (in ``t``) of ``p`` evaluated at the flow images, reduced."""
        ring = self.ring
        out: list[Poly] = []

        def tmul(a, b):
            res = [ring.zero.free() for _ in range(len(a) + len(b) - 1)]
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    res[i + j] = res[i + j] + x * y
            return res

        gens = ring.gens
        cache: dict = {}
        for e, c in p.terms.items():
            acc = [ring.const(c, quotient=False)]
            for k, x in enumerate(e):
                if x:
                    key = (k, x)
                    if key not in cache:
                        base = [q.free() for q in self.images[gens[k]]]
                        pw = [ring.one.free()]
                        for _ in range(x):
                            pw = [ring.reduce(q) for q in tmul(pw, base)]
                        cache[key] = pw
                    acc = [ring.reduce(q) for q in tmul(acc, cache[key])]
            for k, q in enumerate(acc):
                while len(out) <= k:
                    out.append(ring.zero)
                out[k] = out[k] + q
        out = [ring.reduce(q) for q in out]
        while out and out[-1].is_zero():
            out.pop()
        return out

    def preserves_relations(self) -> bool:
        return all(not self.substitute(g) for g in self.ring.defining_polynomials())

    def render_line(self, x: GeneratorId) -> str:
        parts = []
        for k, q in enumerate(self.images[x]):
            if q.is_zero():
                continue
            if k == 0:
                parts.append(str(q))
                continue
            tk = "t" if k == 1 else f"t^{k}"
            if q == 1:
                parts.append(tk)
            elif q.is_monomial() and next(iter(q.terms.values())) == 1:
                parts.append(f"{tk}*{q}")
            else:
                parts.append(f"{tk}*({q})")
        text = " + ".join(parts) if parts else "0"
        return f"{x} -> {text}"

    def render(self) -> str:
        return "\n".join(self.render_line(x) for x in self.ring.gens)

    def __str__(self) -> str:
        return self.render()


def flow(delta: Derivation, cap: int | None = None) -> Flow:
    """exp(t delta) on generators; requires nilpotency on every generator."""
    if cap is None:
        cap = default_cap(delta)
    ring = delta.ring
    images = {}
    for x in ring.gens:
        coeffs = [ring.reduce(ring.gen(x))]
        p = coeffs[0]
        for k in range(1, cap + 1):
            p = delta.apply(p)
            if p.is_zero():
                break
            coeffs.append(p.scale(Fraction(1, factorial(k))))
        else:
            raise NotNilpotent(f"{x} is not annihilated within {cap} steps")
        images[x] = tuple(coeffs)
    return Flow(ring, images)


# --- structural invariants of homogeneous LNDs -------------------------------

def separates_s_and_t(delta: Derivation) -> bool:
    """Either every S_k or every T_ij lies in the kernel."""
    s = any(isinstance(g, S) for g in delta.images)
    t = any(isinstance(g, T) for g in delta.images)
    return not (s and t)


def non_kernel_variables(delta: Derivation) -> list[T]:
    return [g for g in delta.non_kernel_generators() if isinstance(g, T)]


def at_most_one_non_kernel_per_block(delta: Derivation) -> bool:
    blocks = [g.i for g in non_kernel_variables(delta)]
    return len(blocks) == len(set(blocks))


def at_most_one_non_unit_non_kernel(delta: Derivation) -> bool:
    """No two non-kernel variables with exponent > 1."""
    data = delta.ring.data
    heavy = [g for g in non_kernel_variables(delta) if data.exponents(g.i)[g.j - 1] > 1]
    return len(heavy) <= 1
