"""Command-line front end.

Exit codes: 0 success, 1 computational error, 2 parse or validation error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import descriptor
from .classify import SearchSpaceTooLarge, classify, search_homogeneous_lnds
from .derivation import NotNilpotent, flow
from .elementary import (BetaNotInRowSpace, BetaZeroPattern, FamilyKind, InvalidTuple,
                         enumerate_families, instance_from_spec)
from .errors import IndexOutOfRange, NotHomogeneous, ParseError
from .grading import GroupElement
from .kernel import NotInKernel, generate_kernel_elements, kernel_membership
from .model import ModelError, validate
from .polyring import ring_for


class UsageError(Exception):
    pass


def parse_derivation_spec(text: str):
    """``ds:p``, ``dc:c1,...`` or ``dcb:c0,...,cr;b0,...,br``."""
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError(f"derivation spec {text!r} lacks a ':'", 1, 1)
    col = len(head) + 2

    def ints(part, offset):
        try:
            return tuple(int(x) for x in part.split(","))
        except ValueError:
            raise ParseError(f"expected comma-separated integers, got {part!r}", 1, offset) from None

    head = head.strip().lower()
    if head == "ds":
        vals = ints(body, col)
        if len(vals) != 1:
            raise ParseError("ds takes a single index", 1, col)
        return FamilyKind.DS, {"p": vals[0]}
    if head == "dc":
        return FamilyKind.DELTA_C, {"C": ints(body, col)}
    if head == "dcb":
        cpart, sep, bpart = body.partition(";")
        if not sep:
            raise ParseError("dcb needs 'c0,...,cr;b0,...,br'", 1, col + len(body))
        beta = []
        offset = col + len(cpart) + 1
        for x in bpart.split(","):
            try:
                if x.count("/") > 1:
                    raise ValueError
                beta.append(Fraction(x.strip()))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"malformed rational {x!r}", 1, offset) from None
            offset += len(x) + 1
        return FamilyKind.DELTA_C_BETA_21, {"C": ints(cpart, col), "beta": beta}
    raise ParseError(f"unknown derivation kind {head!r}", 1, 1)


def _instance(data, spec: str):
    kind, kw = parse_derivation_spec(spec)
    return instance_from_spec(data, kind, **kw)


def _degree_record(d: GroupElement) -> dict:
    return {"free": list(d.free), "torsion": list(d.torsion), "moduli": list(d.moduli), "text": str(d)}


def _emit(args, human: list[str], machine: dict):
    if args.machine:
        print(json.dumps(machine, indent=2, ensure_ascii=False))
    else:
        print("\n".join(human))


def _load(args):
    data = descriptor.load(args.file)
    report = validate(data)
    if not report.ok:
        raise _Invalid(report)
    return data


class _Invalid(Exception):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


# --- commands ---------------------------------------------------------------------

def cmd_validate(args) -> int:
    data = descriptor.load(args.file)
    report = validate(data)
    human = [str(report)]
    machine = {"ok": report.ok, "violations": [
        {"code": v.code, "indices": list(v.indices), "message": v.message} for v in report.violations]}
    _emit(args, human, machine)
    return 0 if report.ok else 2


def cmd_grading(args) -> int:
    data = _load(args)
    ring = ring_for(data)
    g = ring.grading
    homogeneous = all(ring.is_homogeneous(p) for p in ring.defining_polynomials())
    human = [g.describe(),
             "invariant factors: " + ", ".join(map(str, g.invariant_factors)),
             f"free rank: {g.free_rank}",
             "torsion: [" + ", ".join(map(str, g.torsion)) + "]",
             "degrees:"]
    human += [f"  {x}: {g.degree(x)}" for x in ring.gens]
    human.append(f"μ: {g.mu}")
    e = [g.e_coeff(k, g.mu) for k in range(1, data.m + 1)]
    if data.m:
        human.append("e-coefficients of μ: " + ", ".join(map(str, e)))
    human.append(f"all 𝔤_i homogeneous: {'yes' if homogeneous else 'no'}")
    machine = {
        "group": g.describe(),
        "invariant_factors": list(g.invariant_factors),
        "free_rank": g.free_rank,
        "torsion": list(g.torsion),
        "degrees": {str(x): _degree_record(g.degree(x)) for x in ring.gens},
        "mu": _degree_record(g.mu),
        "mu_e_coefficients": e,
        "relations_homogeneous": homogeneous,
    }
    _emit(args, human, machine)
    return 0


def cmd_derivations(args) -> int:
    data = _load(args)
    fams = enumerate_families(data)
    human = [f"{len(fams)} families"] + [f.describe() for f in fams]
    for f in fams:
        if f.kind is not FamilyKind.DS:
            human.append(f"  sample of {f.describe()}:")
            human += ["    " + line for line in f.instantiate().render().splitlines()]
    machine = {"families": [dict(f.record(), degree_text=str(f.degree)) for f in fams]}
    _emit(args, human, machine)
    return 0


def cmd_classify(args) -> int:
    data = _load(args)
    rep = classify(data)
    yes = lambda b: "true" if b else "false"
    human = [f"has_homogeneous_lnd: {yes(rep.has_homogeneous_lnd)}",
             f"cor1_gap: {yes(rep.cor1_gap)}",
             f"rigid: {yes(rep.rigid)}",
             "exceptional blocks: {" + ", ".join(map(str, rep.exceptional_blocks)) + "}"]
    if rep.cor1_witness:
        human.append("gap witness (even, even, >1): " + ", ".join(map(str, rep.cor1_witness)))
    _emit(args, human, rep.record())
    return 0


def cmd_apply(args) -> int:
    data = _load(args)
    inst = _instance(data, args.derivation)
    ring = inst.derivation.ring
    p = ring.parse(args.poly)
    out = inst.derivation.apply(p)
    _emit(args, [str(out)], {"input": str(ring.reduce(p)), "result": str(out)})
    return 0


def cmd_kernel(args) -> int:
    data = _load(args)
    inst = _instance(data, args.derivation)
    ring = inst.derivation.ring
    if args.generate:
        gen = generate_kernel_elements(inst, args.form_degree, args.max_degree)
        items = [str(h) for h in itertools.islice(gen, args.limit)]
        _emit(args, items, {"elements": items})
        return 0
    if args.poly is None:
        raise UsageError("give a polynomial or --generate")
    h = ring.parse(args.poly)
    verdict = kernel_membership(inst, h)
    _emit(args, [f"in kernel: {'yes' if verdict else 'no'}"],
          {"element": str(ring.reduce(h)), "in_kernel": verdict})
    return 0


def cmd_flow(args) -> int:
    data = _load(args)
    inst = _instance(data, args.derivation)
    fl = flow(inst.derivation, args.cap)
    ok = fl.preserves_relations()
    human = [fl.render_line(x) for x in fl.ring.gens] + [f"relations preserved: {'yes' if ok else 'no'}"]
    machine = {"flow": {str(x): [str(q) for q in fl.images[x]] for x in fl.ring.gens},
               "relations_preserved": ok}
    _emit(args, human, machine)
    return 0 if ok else 1


def cmd_search(args) -> int:
    data = _load(args)
    kw = {"seed": args.seed}
    if args.cap is not None:
        kw["cap"] = args.cap
    rep = search_homogeneous_lnds(data, args.max_degree, **kw)
    human = [f"candidates: {rep.candidates}", f"survivors: {len(rep.survivors)}",
             f"unmatched: {len(rep.unmatched)}", f"missing templates: {len(rep.missing)}"]
    for s in rep.survivors:
        human.append(f"degree {s.degree}: " + "; ".join(s.derivation.render().splitlines()))
        human.append("  " + (s.match.describe() if s.match else "NO MATCH"))
    human += [f"missing: {m}" for m in rep.missing]
    machine = {
        "candidates": rep.candidates,
        "survivors": [{
            "images": {str(x): str(p) for x, p in s.derivation.images.items()},
            "degree": _degree_record(s.degree),
            "match": None if s.match is None else {
                "family": s.match.family.record(),
                "beta": None if s.match.beta is None else [str(b) for b in s.match.beta],
                "h": str(s.match.h)},
        } for s in rep.survivors],
        "unmatched": len(rep.unmatched),
        "missing": rep.missing,
    }
    _emit(args, human, machine)
    return 0 if rep.complete else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="emit JSON")
    common.add_argument("--cap", type=int, default=None, help="nilpotency cap / search candidate cap")
    common.add_argument("--seed", type=int, default=0)
    parser = argparse.ArgumentParser(prog="trilnd", description="Homogeneous LNDs of trinomial algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, spec=False):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file")
        if spec:
            p.add_argument("derivation", help="ds:p | dc:c1,... | dcb:c0,...,cr;b0,...,br")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the descriptor")
    add("grading", cmd_grading, "finest grading group and degrees")
    add("derivations", cmd_derivations, "enumerate template families")
    add("classify", cmd_classify, "existence, gap case and rigidity")
    add("apply", cmd_apply, "apply a template to a polynomial", spec=True).add_argument("poly")
    k = add("kernel", cmd_kernel, "kernel membership or generation", spec=True)
    k.add_argument("poly", nargs="?")
    k.add_argument("--generate", action="store_true")
    k.add_argument("--max-degree", type=int, default=3, help="cofactor monomial degree bound")
    k.add_argument("--form-degree", type=int, default=2)
    k.add_argument("--limit", type=int, default=100)
    add("flow", cmd_flow, "exp(t D) on generators", spec=True)
    add("search", cmd_search, "brute-force search oracle").add_argument("--max-degree", type=int, default=2)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Invalid as exc:
        print(str(exc.report), file=sys.stderr)
        return 2
    except (ParseError, ModelError, InvalidTuple, BetaNotInRowSpace, BetaZeroPattern,
            IndexOutOfRange, UsageError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotNilpotent, SearchSpaceTooLarge, NotHomogeneous, NotInKernel, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
