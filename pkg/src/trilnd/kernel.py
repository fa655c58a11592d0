"""Homogeneous kernel elements of the elementary derivations.

Two independent deciders are used.  Engine A applies the derivation and
reduces.  Engine B matches the closed forms:

* ``DS(p)``: ``F * T^b * prod_{k != p} S_k^{d_k}`` with ``F`` a form in the
  block monomials (univariate in ``T_1^{l_1}`` for type 1);
* ``DeltaC``: ``alpha * (monomial in kernel variables and S)``;
* ``DeltaCBeta``: ``alpha * (beta_2 T_1^{l_1} - beta_1 T_2^{l_2})^t * (monomial
  in kernel variables and S)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .derivation import Derivation, NotVerified, is_locally_nilpotent_on_generators
from .elementary import ElementaryFamily, ElementaryInstance, FamilyKind
from .errors import NotHomogeneous
from .model import Kind, S, T
from .polyring import Poly, PolyRing, QuotientPoly, _bivar_pow


class EngineDisagreement(AssertionError):
    """The two kernel deciders disagree: always a bug."""


class NotInKernel(ValueError):
    pass


@dataclass(frozen=True)
class KernelPattern:
    """Closed-form data of a kernel element ``h = F * T^b * S^d``.

    ``F`` is the form in the block monomials; for the beta templates
    ``power`` is the exponent of the binomial and ``alpha`` its coefficient.
    """

    F: dict
    b: dict
    d: tuple[int, ...]
    alpha: Optional[Fraction] = None
    power: Optional[int] = None


def binomial(inst: ElementaryInstance) -> dict:
    """``beta_2 u - beta_1 v`` as a form in ``u = T_1^{l_1}``, ``v = T_2^{l_2}``."""
    b = inst.beta
    return {k: c for k, c in {(1, 0): b[2], (0, 1): -b[1]}.items() if c}


def _divide_linear(F: dict, L: dict) -> Optional[dict]:
    """Exact quotient of the binary form ``F`` by the linear form ``L``, or ``None``."""
    F = dict(F)
    # divide on the u-exponent when L involves u, otherwise on v
    idx = 0 if (1, 0) in L else 1
    step = (1, 0) if idx == 0 else (0, 1)
    lead = L[step]
    Q: dict = {}
    while F:
        e = max(F, key=lambda k: k[idx])
        if e[idx] == 0:
            return None
        q = (e[0] - step[0], e[1] - step[1])
        c = F[e] / lead
        Q[q] = c
        for term, coef in L.items():
            k = (q[0] + term[0], q[1] + term[1])
            v = F.get(k, 0) - c * coef
            if v:
                F[k] = v
            else:
                F.pop(k, None)
    return Q


def binomial_power(F: dict, L: dict) -> Optional[tuple[Fraction, int]]:
    """``(alpha, t)`` with ``F = alpha * L^t`` by iterated exact division, else ``None``."""
    G, t = dict(F), 0
    while not (len(G) == 1 and (0, 0) in G):
        G = _divide_linear(G, L)
        if G is None:
            return None
        t += 1
    alpha = G[(0, 0)]
    if {k: alpha * v for k, v in _bivar_pow(L, t, 2).items()} != F:
        return None
    return alpha, t


def _check_homogeneous(ring: PolyRing, h: Poly) -> QuotientPoly:
    h = ring.reduce(h)
    if not ring.is_homogeneous(h):
        raise NotHomogeneous(f"{h} is not K0-homogeneous")
    return h


def engine_a(inst: ElementaryInstance, h: Poly) -> bool:
    return inst.derivation.apply(h).is_zero()


def match_pattern(inst: ElementaryInstance, h: Poly) -> Optional[KernelPattern]:
    """Engine B: the closed-form decomposition of ``h`` if it has one."""
    delta = inst.derivation
    ring = delta.ring
    h = _check_homogeneous(ring, h)
    if h.is_zero():
        return KernelPattern({}, {}, (0,) * ring.data.m, Fraction(0), 0)
    dec = ring.structure_decomposition(h)
    fam = inst.family
    if fam.kind is FamilyKind.DS:
        if dec.d[fam.p - 1]:
            return None
        return KernelPattern(dec.F, dec.b, dec.d)
    kernel_vars = set(inst.kernel_generators())
    if any(g not in kernel_vars for g in dec.b):
        return None
    if fam.kind is FamilyKind.DELTA_C:
        if set(dec.F) != {(0,)}:
            return None
        return KernelPattern(dec.F, dec.b, dec.d, dec.F[(0,)], 0)
    found = binomial_power(dec.F, binomial(inst))
    if found is None:
        return None
    return KernelPattern(dec.F, dec.b, dec.d, found[0], found[1])


def engine_b(inst: ElementaryInstance, h: Poly) -> bool:
    return match_pattern(inst, h) is not None


def kernel_membership(inst: ElementaryInstance, h: Poly) -> bool:
    """Whether the homogeneous element ``h`` lies in the kernel.

    Returns engine A's verdict after checking that engine B agrees.
    """
    ring = inst.derivation.ring
    h = _check_homogeneous(ring, h)
    a = engine_a(inst, h)
    b = engine_b(inst, h)
    if a != b:
        raise EngineDisagreement(f"evaluation says {a}, closed form says {b} for {h}")
    return a


def _monomials(nvars: int, total: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors of exactly the given total degree."""
    if nvars == 0:
        if total == 0:
            yield ()
        return
    for c in itertools.combinations(range(total + nvars - 1), nvars - 1):
        prev = -1
        out = []
        for x in c:
            out.append(x - prev - 1)
            prev = x
        out.append(total + nvars - 2 - prev)
        yield tuple(out)


def generate_kernel_elements(inst: ElementaryInstance, max_form_degree: int = 2,
                             max_monomial_degree: int = 4) -> Iterator[QuotientPoly]:
    """All pattern instances within the bounds, each certified by engine A.

    Forms run over monomial bases (``u^a v^b`` or ``u^q``) for ``DS`` and
    over powers of the binomial for the beta templates.  Cofactors are
    monomials in the allowed variables of total degree up to the bound.
    """
    delta = inst.derivation
    ring = delta.ring
    data = ring.data
    fam = inst.family
    if fam.kind is FamilyKind.DS:
        allowed = [g for g in ring.gens if g != S(fam.p)]
    else:
        allowed = inst.kernel_generators()
    forms: list[Poly] = [ring.one]
    if fam.kind is FamilyKind.DS:
        u = ring.block_monomial(1)
        if data.kind is Kind.TYPE1:
            forms += [u ** q for q in range(1, max_form_degree + 1)]
        else:
            v = ring.block_monomial(2)
            forms += [u ** a * v ** (t - a) for t in range(1, max_form_degree + 1) for a in range(t + 1)]
    elif fam.kind is not FamilyKind.DELTA_C:
        L = ring.poly({ring.block_exponent_vector(1): inst.beta[2]}) - ring.poly(
            {ring.block_exponent_vector(2): inst.beta[1]})
        forms += [L ** t for t in range(1, max_form_degree + 1)]
    forms = [ring.reduce(f) for f in forms]
    positions = [ring.index[g] for g in allowed]
    for total in range(max_monomial_degree + 1):
        for exps in _monomials(len(positions), total):
            e = [0] * ring.nvars
            for pos, x in zip(positions, exps):
                e[pos] = x
            mono = ring.reduce(ring.monomial(e))
            for f in forms:
                h = f * mono
                if not engine_a(inst, h):
                    raise EngineDisagreement(f"generated element {h} is not annihilated")
                yield h


def random_homogeneous(ring: PolyRing, rng: random.Random, max_exponent: int = 2,
                       max_form_degree: int = 2) -> QuotientPoly:
    """A random nonzero homogeneous element ``F * monomial`` with random rational coefficients."""
    data = ring.data
    e = [rng.randint(0, max_exponent) if rng.random() < 0.5 else 0 for _ in range(ring.nvars)]
    mono = ring.reduce(ring.monomial(e))
    t = rng.randint(0, max_form_degree)
    u = ring.block_monomial(1)
    coeff = lambda: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    if data.kind is Kind.TYPE1:
        F = sum((u ** q * coeff() for q in range(t + 1) if rng.random() < 0.7), ring.zero.free())
    else:
        v = ring.block_monomial(2)
        F = sum((u ** a * v ** (t - a) * coeff() for a in range(t + 1) if rng.random() < 0.7), ring.zero.free())
    h = ring.reduce(F) * mono
    return h if h else mono


def general_lnd_form(target: ElementaryFamily | ElementaryInstance, h: Poly,
                     cap: Optional[int] = None) -> Derivation:
    """The derivation ``h * delta`` for a kernel element ``h``."""
    inst = target if isinstance(target, ElementaryInstance) else target.instance()
    if not kernel_membership(inst, h):
        raise NotInKernel(f"{h} is not annihilated by the template")
    out = inst.derivation.multiply(h)
    verdict = is_locally_nilpotent_on_generators(out, cap)
    if isinstance(verdict, NotVerified):
        raise NotInKernel(f"h * delta not verified nilpotent within {verdict.cap} steps")
    return out
