"""Existence of homogeneous LNDs, the non-rigid gap case, and a brute-force search oracle."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .derivation import (Derivation, NotVerified, at_most_one_non_kernel_per_block,
                         at_most_one_non_unit_non_kernel, degree_of, is_locally_nilpotent_on_generators,
                         separates_s_and_t)
from .elementary import (ElementaryFamily, FamilyKind, beta_case, enumerate_families,
                         in_row_space)
from .grading import GroupElement
from .kernel import generate_kernel_elements, kernel_membership
from .linalg import nullspace, solve
from .model import Kind, S, T, TrinomialData, require_valid
from .polyring import Poly, PolyRing, QuotientPoly, ring_for


@dataclass(frozen=True)
class ClassificationReport:
    has_homogeneous_lnd: bool
    cor1_gap: bool
    rigid: bool
    exceptional_blocks: tuple[int, ...]
    unit_positions: dict
    cor1_witness: Optional[tuple[int, int, int]] = None

    def record(self) -> dict:
        return {
            "has_homogeneous_lnd": self.has_homogeneous_lnd,
            "cor1_gap": self.cor1_gap,
            "rigid": self.rigid,
            "exceptional_blocks": list(self.exceptional_blocks),
            "unit_positions": {str(i): list(js) for i, js in self.unit_positions.items()},
            "cor1_witness": list(self.cor1_witness) if self.cor1_witness else None,
        }


def unit_positions(data: TrinomialData) -> dict[int, tuple[int, ...]]:
    """For each block, the indices j with l_ij = 1."""
    return {i: tuple(j for j, l in enumerate(data.exponents(i), start=1) if l == 1)
            for i in data.block_range}


def exceptional_blocks(data: TrinomialData) -> tuple[int, ...]:
    """Blocks without a unit exponent."""
    return tuple(i for i, js in unit_positions(data).items() if not js)


def has_homogeneous_lnd(data: TrinomialData) -> tuple[bool, tuple[int, ...]]:
    require_valid(data)
    E = exceptional_blocks(data)
    allowed = 1 if data.kind is Kind.TYPE1 else 2
    return data.m > 0 or len(E) <= allowed, E


def cor1_gap(data: TrinomialData) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Type 2, m = 0, exactly three blocks without units, two of them all-even
    with an exponent 2 and the third with all exponents above 1."""
    require_valid(data)
    if data.kind is not Kind.TYPE2 or data.m:
        return False, None
    E = exceptional_blocks(data)
    if len(E) != 3:
        return False, None

    def even_with_two(i):
        ls = data.exponents(i)
        return all(l % 2 == 0 for l in ls) and 2 in ls

    for i2 in E:
        i0, i1 = (i for i in E if i != i2)
        if even_with_two(i0) and even_with_two(i1) and all(l > 1 for l in data.exponents(i2)):
            return True, (i0, i1, i2)
    return False, None


def is_rigid(data: TrinomialData) -> bool:
    return not has_homogeneous_lnd(data)[0] and not cor1_gap(data)[0]


def classify(data: TrinomialData) -> ClassificationReport:
    has, E = has_homogeneous_lnd(data)
    gap, witness = cor1_gap(data)
    return ClassificationReport(has, gap, not has and not gap, E, unit_positions(data), witness)


# --- brute-force search -------------------------------------------------------

class SearchSpaceTooLarge(RuntimeError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} candidate supports exceed the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass
class Match:
    """A survivor written as ``h * delta`` with ``delta`` a template instance."""

    family: ElementaryFamily
    beta: Optional[tuple[Fraction, ...]]
    h: QuotientPoly
    kernel_certified: bool

    def describe(self) -> str:
        beta = "" if self.beta is None else " beta=(" + ",".join(map(str, self.beta)) + ")"
        return f"h = {self.h} times {self.family.kind.value}{beta}" + (
            f" C=({','.join(map(str, self.family.C))})" if self.family.C else f" p={self.family.p}")


@dataclass
class Survivor:
    derivation: Derivation
    degree: GroupElement
    match: Optional[Match]

    @property
    def structural_ok(self) -> bool:
        d = self.derivation
        return (separates_s_and_t(d) and at_most_one_non_kernel_per_block(d)
                and at_most_one_non_unit_non_kernel(d))


@dataclass
class SearchReport:
    data: TrinomialData
    degree_bound: int
    survivors: list[Survivor]
    candidates: int
    missing: list[str] = field(default_factory=list)

    @property
    def unmatched(self) -> list[Survivor]:
        return [s for s in self.survivors if s.match is None]

    @property
    def complete(self) -> bool:
        return not self.unmatched and not self.missing


def normal_monomials(ring: PolyRing, max_total: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(max_total + 1):
        for c in itertools.combinations(range(total + ring.nvars - 1), ring.nvars - 1):
            e, prev = [], -1
            for x in c:
                e.append(x - prev - 1)
                prev = x
            e.append(total + ring.nvars - 2 - prev)
            e = tuple(e)
            if ring.is_normal_monomial(e):
                out.append(e)
    return out


class _Search:
    def __init__(self, data: TrinomialData, bound: int, cap: int, seed: int, max_terms: int):
        self.ring = ring_for(data)
        self.data = data
        self.bound = bound
        self.cap = cap
        self.rng = random.Random(seed)
        self.max_terms = max_terms
        ring = self.ring
        self.monos = normal_monomials(ring, bound)
        self.by_degree: dict[GroupElement, list] = {}
        for e in self.monos:
            self.by_degree.setdefault(ring.monomial_degree(e), []).append(e)
        self.gdeg = {x: ring.grading.degree(x) for x in ring.gens}
        self.partials = {x: [g.derivative(x) for g in ring.defining_polynomials()] for x in ring.gens}
        self.term_choices = 2 if data.kind is Kind.TYPE2 or data.m else 1
        self._contrib: dict = {}

    def contribution(self, x, e) -> dict:
        """Column for the unknown coefficient of monomial ``e`` in the image of ``x``."""
        key = (x, e)
        hit = self._contrib.get(key)
        if hit is None:
            ring = self.ring
            mono = ring.monomial(e)
            hit = {}
            for i, dg in enumerate(self.partials[x]):
                for f, c in ring.reduce(dg * mono).terms.items():
                    hit[(i, f)] = c
            self._contrib[key] = hit
        return hit

    def shifts(self) -> list[GroupElement]:
        seen = {}
        for x, dx in self.gdeg.items():
            for deg in self.by_degree:
                seen.setdefault(deg - dx, None)
        return sorted(seen, key=lambda d: (d.free, d.torsion))

    def choices(self, x, d) -> list[tuple]:
        pool = self.by_degree.get(self.gdeg[x] + d, [])
        out = [(e,) for e in pool]
        if self.term_choices > 1:
            out += list(itertools.combinations(pool, 2))
        return out

    def plan(self):
        plan = []
        total = 0
        for d in self.shifts():
            opts = {x: self.choices(x, d) for x in self.ring.gens}
            live = [x for x in self.ring.gens if opts[x]]
            for k in range(1, len(live) + 1):
                for N in itertools.combinations(live, k):
                    count = 1
                    for x in N:
                        count *= len(opts[x])
                    total += count
                    plan.append((d, N, opts))
        if total > self.cap:
            raise SearchSpaceTooLarge(total, self.cap)
        return plan, total

    def run(self) -> tuple[list[tuple[Derivation, GroupElement]], int]:
        plan, total = self.plan()
        ring = self.ring
        found: dict = {}
        for d, N, opts in plan:
            for pick in itertools.product(*(opts[x] for x in N)):
                unknowns = [(x, e) for x, es in zip(N, pick) for e in es]
                cols = [self.contribution(x, e) for x, e in unknowns]
                basis = nullspace(cols)
                if not basis:
                    continue
                for vec in self._points(basis):
                    images: dict = {}
                    for (x, e), c in zip(unknowns, vec):
                        images[x] = images.get(x, ring.zero.free()) + ring.monomial(e, c)
                    delta = Derivation(ring, images, check=False)
                    if len(delta.images) != len(N):
                        continue
                    verdict = is_locally_nilpotent_on_generators(delta, max_terms=self.max_terms)
                    if isinstance(verdict, NotVerified):
                        continue
                    delta = Derivation(ring, delta.normalized().images)
                    found.setdefault(delta, d)
        return list(found.items()), total

    GRID = (1, -1, 2, -2)
    GRID_MAX_DIM = 4

    def _points(self, basis):
        """Points of the solution space to test for nilpotency.

        A one-dimensional space is a single point up to scale.  Otherwise the
        nilpotent locus is usually a proper subvariety, so besides one random
        point a small integer grid on the basis is tried.
        """
        if len(basis) == 1:
            return [basis[0]] if all(basis[0]) else []
        combine = lambda w: [sum(c * b[k] for c, b in zip(w, basis)) for k in range(len(basis[0]))]
        out = []
        for _ in range(20):
            vec = combine([Fraction(self.rng.randint(1, 97)) for _ in basis])
            if all(vec):
                out.append(vec)
                break
        if len(basis) <= self.GRID_MAX_DIM:
            for w in itertools.product(self.GRID, repeat=len(basis)):
                # nilpotency is invariant under scaling, so skip multiples
                first = next(c for c in w if c)
                if first < 0 or math.gcd(*w) != 1:
                    continue
                vec = combine(w)
                if all(vec):
                    out.append(vec)
        return out


def _exact_quotient(ring: PolyRing, target: Poly, divisor: Poly, max_total: int) -> Optional[QuotientPoly]:
    """``q`` with ``q * divisor = target`` in the quotient, searched among bounded normal monomials."""
    target = ring.reduce(target)
    divisor = ring.reduce(divisor)
    deg = ring.degree_of(target) - ring.degree_of(divisor)
    cands = [e for e in normal_monomials_cached(ring, max_total) if ring.monomial_degree(e) == deg]
    cols = [dict(ring.reduce(ring.monomial(e) * divisor).terms) for e in cands]
    x = solve(cols, target.terms)
    if x is None:
        return None
    return ring.reduce(ring.poly({e: c for e, c in zip(cands, x) if c}))


_NM_CACHE: dict = {}


def normal_monomials_cached(ring: PolyRing, max_total: int):
    key = (ring.data, max_total)
    if key not in _NM_CACHE:
        _NM_CACHE[key] = normal_monomials(ring, max_total)
    return _NM_CACHE[key]


def match_elementary(delta: Derivation, families: Optional[list[ElementaryFamily]] = None) -> Optional[Match]:
    """Write ``delta`` as ``h * template`` with ``h`` kernel-certified, if possible."""
    ring = delta.ring
    data = ring.data
    families = families if families is not None else enumerate_families(data)
    nk = delta.non_kernel_generators()
    if not nk:
        return None
    slack = delta_total(delta) + max(sum(b) for b in data.blocks)
    if all(isinstance(g, S) for g in nk):
        if len(nk) != 1:
            return None
        fam = next(f for f in families if f.kind is FamilyKind.DS and f.p == nk[0].k)
        inst = fam.instance()
        h = delta.image(nk[0])
        return _confirm(delta, inst, h)
    if any(isinstance(g, S) for g in nk):
        return None
    nk_set = set(nk)
    for fam in families:
        if fam.kind is FamilyKind.DS or set(fam.non_kernel()) != nk_set:
            continue
        if fam.kind is FamilyKind.DELTA_C:
            inst = fam.instance()
            x = nk[0]
            h = _exact_quotient(ring, delta.image(x), inst.derivation.image(x), slack)
            if h is not None:
                m = _confirm(delta, inst, h)
                if m:
                    return m
            continue
        # beta templates: image of T_{i c_i} is beta_i * h * P_i
        P = _beta_free_products(ring, fam)
        quotients = {}
        for x in nk:
            q = _exact_quotient(ring, delta.image(x), P[x], slack)
            if q is None or q.is_zero():
                break
            quotients[x] = q
        else:
            x0 = nk[0]
            q0 = quotients[x0]
            e0, c0 = q0.sorted_terms()[0]
            beta = [Fraction(0)] * (data.r + 1)
            ok = True
            for x, q in quotients.items():
                ratio = q.terms.get(e0, Fraction(0)) / c0
                if not ratio or q != q0.scale(ratio):
                    ok = False
                    break
                beta[x.i] = ratio
            if not ok or not in_row_space(data, beta):
                continue
            try:
                i0 = beta_case(data, beta)
            except ValueError:
                continue
            if i0 != fam.i0:
                continue
            inst = fam.instance(beta=beta)
            m = _confirm(delta, inst, q0)
            if m:
                return m
    return None


def delta_total(delta: Derivation) -> int:
    return max((p.total_degree() for p in delta.images.values()), default=0)


def _beta_free_products(ring: PolyRing, fam: ElementaryFamily) -> dict:
    data = ring.data
    C = fam.C
    derivs = {i: ring.block_derivative(i, C[i - data.iota]) for i in data.block_range}
    out = {}
    for x in fam.non_kernel():
        p = ring.one.free()
        for k in data.block_range:
            if k != x.i and k != fam.i0:
                p = p * derivs[k]
        out[x] = ring.reduce(p)
    return out


def _confirm(delta: Derivation, inst, h: Poly) -> Optional[Match]:
    ring = delta.ring
    h = ring.reduce(h)
    if h.is_zero() or not ring.is_homogeneous(h):
        return None
    certified = kernel_membership(inst, h)
    if not certified:
        return None
    if inst.derivation.multiply(h) != delta:
        return None
    return Match(inst.family, inst.beta, h, certified)


def _expected(data: TrinomialData, bound: int, families, max_terms: int, seed: int):
    """Template times kernel-element derivations whose images fit the search shape."""
    rng = random.Random(seed)
    out = []
    for fam in families:
        inst = fam.instance(rng=rng)
        for h in generate_kernel_elements(inst, max_form_degree=bound, max_monomial_degree=bound):
            cand = inst.derivation.multiply(h)
            if cand.is_zero():
                continue
            imgs = cand.images.values()
            if all(p.total_degree() <= bound and len(p) <= max_terms for p in imgs):
                out.append((fam, h, cand))
    return out


def search_homogeneous_lnds(data: TrinomialData, degree_bound: int, cap: int = 2_000_000,
                            seed: int = 0, max_terms: int = 400, check_soundness: bool = True) -> SearchReport:
    """Exhaustive search for homogeneous LNDs with short images of total degree <= bound.

    For every degree shift, support set of generators and choice of image
    monomials (one, or two for type 2 and for m > 0), the well-definedness
    conditions are solved exactly for the coefficients; solutions with all
    coefficients nonzero that are nilpotent on generators survive.  Each
    survivor is then matched against ``h * template``; with
    ``check_soundness`` every template multiple of the searched shape is
    required to appear among the survivors.
    """
    require_valid(data)
    search = _Search(data, degree_bound, cap, seed, max_terms)
    raw, total = search.run()
    families = enumerate_families(data)
    survivors = []
    for delta, d in sorted(raw, key=lambda t: t[0].render()):
        if degree_of(delta) != d:
            raise AssertionError(f"survivor of shift {d} has degree {degree_of(delta)}")
        survivors.append(Survivor(delta, d, match_elementary(delta, families)))
    report = SearchReport(data, degree_bound, survivors, total)
    if check_soundness:
        for fam, h, cand in _expected(data, degree_bound, families, search.term_choices, seed):
            if not any(s.match and s.match.family.key == fam.key and _same_multiplier(fam, s.match.h, h)
                       for s in survivors):
                report.missing.append(f"{fam.describe()} with h = {h}")
    return report


def _same_multiplier(fam: ElementaryFamily, found: Poly, expected: Poly) -> bool:
    """Whether a survivor's kernel multiplier accounts for an expected one.

    In the generic beta stratum the multiplier contains the binomial of the
    chosen beta, so it is compared by shape (cofactor exponents and power
    of the form) rather than coefficient by coefficient.
    """
    if fam.kind is not FamilyKind.DELTA_C_BETA_21:
        return _proportional(found, expected)
    ring = ring_for(fam.data)

    def shape(h):
        dec = ring.structure_decomposition(ring.reduce(h))
        return dec.b, dec.d, max(sum(k) for k in dec.F)

    return shape(found) == shape(expected)


def _proportional(p: Poly, q: Poly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if set(p.terms) != set(q.terms):
        return False
    e = next(iter(p.terms))
    r = p.terms[e] / q.terms[e]
    return all(p.terms[k] == r * q.terms[k] for k in p.terms)
