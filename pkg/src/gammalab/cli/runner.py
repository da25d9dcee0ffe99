"""Directive dispatch, verdict aggregation and exit statuses."""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import __version__, naive
from ..errors import LimitExceeded, Obstruction, StructureError
from ..exact import (Conflation, certify, check_quillen_instance, pullback,
                     pullback_universal_property, pushout, pushout_universal_property)
from ..free import extend_morphism, free_module, representability, validate_free_module
from ..modules import (biproduct, biproduct_identities, cokernel, cokernel_universal_property,
                       kernel, kernel_universal_property, validate_bimodule, validate_module,
                       validate_morphism, validate_structure)
from ..reports import FAIL, UNAVAILABLE, Report
from ..semiring import (GammaIdeal, enumerate_ideals, is_gamma_ideal, prime_spectrum,
                        quotient_semiring, validate_gamma_semiring, validate_homomorphism)
from ..tensor import (check_adjunction, check_hom_left_exact, check_tensor_right_exact,
                      internal_hom, multi_tensor, positional_tensor, validate_tensor)
from .format import FormatError

PASS_EXIT, FAIL_EXIT, UNAVAILABLE_EXIT, ERROR_EXIT = 0, 1, 2, 3
SCHEMA = 1


@dataclass
class Limits:
    max_carrier: int = 16
    max_tensor_classes: int = 4096
    max_hom_enumeration: int = 2 ** 20


@dataclass
class Outcome:
    line: int
    verb: str
    args: list
    status: str = "pass"
    reports: list = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    def to_dict(self, timings=False) -> dict:
        out = {"line": self.line, "directive": self.verb, "args": list(self.args),
               "status": self.status, "reports": [r.to_dict() for r in self.reports]}
        if self.error is not None:
            out["error"] = self.error
        if timings:
            out["seconds"] = round(self.seconds, 6)
        return out


class Context:
    def __init__(self, env: dict, limits: Limits):
        self.env = env
        self.limits = limits

    def get(self, name, kind, line):
        if name not in self.env:
            raise FormatError(f"undeclared name {name!r}", line)
        k, value = self.env[name]
        if k != kind:
            raise FormatError(f"{name!r} is a {k}, expected a {kind}", line)
        return value

    def modules(self):
        return [v for k, v in self.env.values() if k == "module"]

    def conflation(self, name, line) -> Conflation:
        i, p = self.get(name, "conflation", line)
        return Conflation(i, p, certify(i, p), name)


def _slots(args, start, line):
    rest = args[start:]
    if not rest:
        return None, None
    if len(rest) != 2:
        raise FormatError("expected two slot numbers j k", line)
    try:
        return int(rest[0]), int(rest[1])
    except ValueError:
        raise FormatError(f"slot numbers must be integers, got {rest}", line) from None


def _need(args, count, usage, line):
    if len(args) < count:
        raise FormatError(f"usage: {usage}", line)


def _options(args, line):
    opts, plain = {}, []
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            opts[k] = v
        else:
            plain.append(a)
    return opts, plain


# ---- handlers -----------------------------------------------------------------------------

def h_check_semiring(ctx, args, line):
    _need(args, 1, "check-semiring S", line)
    return [validate_gamma_semiring(ctx.get(args[0], "semiring", line))]


def h_check_module(ctx, args, line):
    _need(args, 1, "check-module M [SLOT]", line)
    M = ctx.get(args[0], "module", line)
    slot = int(args[1]) if len(args) > 1 else None
    if slot is None and len(M.actions) > 1:
        return [validate_module(M, s) for s in M.slots]
    return [validate_module(M, slot)]


def h_check_bimodule(ctx, args, line):
    _need(args, 1, "check-bimodule M", line)
    return [validate_bimodule(ctx.get(args[0], "module", line))]


def h_check_morphism(ctx, args, line):
    _need(args, 1, "check-morphism F", line)
    return [validate_morphism(ctx.get(args[0], "morphism", line))]


def _tests_for(ctx, M):
    return [X for X in ctx.modules() if X.slots == M.slots and X.size <= 4]


def h_kernel(ctx, args, line):
    _need(args, 1, "kernel F", line)
    f = ctx.get(args[0], "morphism", line)
    ker = kernel(f)
    r = validate_structure(ker.module)
    r.subject = f"kernel of {args[0]}"
    r.info["carrier"] = list(ker.inclusion.map)
    return [r, kernel_universal_property(f, ker, _tests_for(ctx, f.source),
                                         ctx.limits.max_hom_enumeration)]


def h_cokernel(ctx, args, line):
    _need(args, 1, "cokernel F", line)
    f = ctx.get(args[0], "morphism", line)
    cok = cokernel(f)
    r = validate_structure(cok.module)
    r.subject = f"cokernel of {args[0]}"
    r.info["classes"] = [sorted(b) for b in cok.congruence.blocks()]
    r.info["coset_description_agrees"] = cok.coset_agrees
    return [r, cokernel_universal_property(f, cok, _tests_for(ctx, f.target),
                                           ctx.limits.max_hom_enumeration)]


def h_biproduct(ctx, args, line):
    _need(args, 2, "biproduct M N", line)
    B = biproduct(ctx.get(args[0], "module", line), ctx.get(args[1], "module", line))
    r = biproduct_identities(B)
    r.info["size"] = B.module.size
    return [r]


def _tensor_reports(T):
    r = validate_tensor(T)
    if T.complete:
        r.info["size"] = T.module.size
        r.info["slots"] = list(T.module.slots)
        r.info["relations"] = T.relation_counts
        if T.warnings:
            r.info["warnings"] = T.warnings
        return [r, validate_structure(T.module)]
    r.info["warnings"] = T.warnings
    return [r]


def h_tensor(ctx, args, line):
    _need(args, 2, "tensor M N [J K]", line)
    j, k = _slots(args, 2, line)
    T = positional_tensor(ctx.get(args[0], "module", line), ctx.get(args[1], "module", line),
                          j, k, ctx.limits.max_tensor_classes)
    return _tensor_reports(T)


def h_multi_tensor(ctx, args, line):
    _need(args, 2, "multi-tensor M1 M2 ... MK", line)
    T = multi_tensor([ctx.get(a, "module", line) for a in args], None,
                     ctx.limits.max_tensor_classes)
    return _tensor_reports(T)


def h_hom(ctx, args, line):
    _need(args, 4, "hom M P J K", line)
    j, k = _slots(args, 2, line)
    H = internal_hom(ctx.get(args[0], "module", line), ctx.get(args[1], "module", line), j, k,
                     limit=ctx.limits.max_hom_enumeration)
    r = validate_structure(H.module)
    r.subject = f"Hom({args[0]},{args[1]})"
    r.info["size"] = H.module.size
    r.info["maps"] = [list(m) for m in H.maps]
    return [r]


def h_adjunction(ctx, args, line):
    _need(args, 3, "adjunction M N P [J K]", line)
    j, k = _slots(args, 3, line)
    M, N, P = (ctx.get(a, "module", line) for a in args[:3])
    return [check_adjunction(M, N, P, j, k, ctx.limits.max_hom_enumeration,
                             ctx.limits.max_tensor_classes)]


def h_hom_left_exact(ctx, args, line):
    _need(args, 2, "hom-left-exact M C", line)
    c = ctx.conflation(args[1], line)
    if not c.certified:
        return [c.report]
    return [check_hom_left_exact(ctx.get(args[0], "module", line), c,
                                 ctx.limits.max_hom_enumeration)]


def h_tensor_right_exact(ctx, args, line):
    _need(args, 2, "tensor-right-exact N C [J K]", line)
    j, k = _slots(args, 2, line)
    c = ctx.conflation(args[1], line)
    if not c.certified:
        return [c.report]
    return [check_tensor_right_exact(ctx.get(args[0], "module", line), c, j, k,
                                     ctx.limits.max_tensor_classes)]


def h_conflation(ctx, args, line):
    _need(args, 1, "conflation C", line)
    return [ctx.conflation(args[0], line).report]


def h_pushout(ctx, args, line):
    _need(args, 2, "pushout C F", line)
    c = ctx.conflation(args[0], line)
    f = ctx.get(args[1], "morphism", line)
    sq = pushout(c.inflation, f)
    r = certify(sq.first, cokernel(sq.first).projection)
    r.subject = "pushed inflation"
    sq.report.info["size"] = sq.module.size
    return [sq.report, r, pushout_universal_property(c.inflation, f, sq,
                                                     _tests_for(ctx, sq.module),
                                                     ctx.limits.max_hom_enumeration)]


def h_pullback(ctx, args, line):
    _need(args, 2, "pullback C G", line)
    c = ctx.conflation(args[0], line)
    g = ctx.get(args[1], "morphism", line)
    sq = pullback(c.deflation, g)
    r = certify(kernel(sq.first).inclusion, sq.first)
    r.subject = "pulled-back deflation"
    sq.report.info["size"] = sq.module.size
    return [sq.report, r, pullback_universal_property(c.deflation, g, sq,
                                                      _tests_for(ctx, sq.module),
                                                      ctx.limits.max_hom_enumeration)]


def h_quillen(ctx, args, line):
    if args:
        confs = [ctx.conflation(a, line) for a in args]
    else:
        confs = [ctx.conflation(name, line) for name, (k, _) in ctx.env.items()
                 if k == "conflation"]
    monos = [v for k, v in ctx.env.values() if k == "morphism" and v.is_injective()]
    return [check_quillen_instance(confs, ctx.modules(), ctx.limits.max_hom_enumeration, monos)]


def h_ideals(ctx, args, line):
    _need(args, 1, "ideals S", line)
    S = ctx.get(args[0], "semiring", line)
    r = Report(f"ideals of {args[0]}")
    r.info["ideals"] = [sorted(I.members) for I in enumerate_ideals(S, ctx.limits.max_carrier)]
    return [r]


def h_spectrum(ctx, args, line):
    _need(args, 1, "spectrum S", line)
    S = ctx.get(args[0], "semiring", line)
    primes = [sorted(I.members) for I in prime_spectrum(S, ctx.limits.max_carrier)]
    r = Report(f"prime spectrum of {args[0]}")
    r.info["spectrum"] = primes
    oracle = sorted(sorted(P) for P in naive.prime_ideals(S))
    r.record("naive scanner agrees", None if sorted(primes) == oracle else
             {"engine": primes, "naive": oracle})
    return [r]


def h_quotient(ctx, args, line):
    _need(args, 1, "quotient S MEMBERS...", line)
    S = ctx.get(args[0], "semiring", line)
    members = frozenset(int(a) for a in args[1:]) | {S.T.zero}
    ideal_report = is_gamma_ideal(S, members)
    if not ideal_report.passed:
        return [ideal_report]
    Q, hom = quotient_semiring(S, GammaIdeal(members, S))
    r = validate_gamma_semiring(Q)
    r.subject = f"{args[0]}/{sorted(members)}"
    r.info["size"] = Q.T.size
    return [ideal_report, r, validate_homomorphism(hom)]


def h_free_module(ctx, args, line):
    usage = "free-module NAME S gens=x,y depth=D [slot=J] [sum=K]"
    _need(args, 2, usage, line)
    opts, plain = _options(args, line)
    if len(plain) != 2:
        raise FormatError(f"usage: {usage}", line)
    name, sname = plain
    S = ctx.get(sname, "semiring", line)
    gens = [g for g in opts.get("gens", "").split(",") if g]
    try:
        F = free_module(gens, S, int(opts.get("slot", 2)), int(opts.get("depth", 2)),
                        int(opts["sum"]) if "sum" in opts else None)
    except ValueError:
        raise FormatError("free-module options must be integers", line) from None
    ctx.env[name] = ("free", F)
    r = validate_free_module(F)
    r.info["size"] = F.size
    r.info["generators"] = [F.insertion(g) for g in range(len(gens))]
    return [r]


def h_extend(ctx, args, line):
    _need(args, 2, "extend F M VALUES...", line)
    F = ctx.get(args[0], "free", line)
    M = ctx.get(args[1], "module", line)
    phi = [int(a) for a in args[2:]]
    values, r = extend_morphism(F, M, phi)
    r.info["values"] = values
    return [r, representability(F, M, ctx.limits.max_hom_enumeration)]


HANDLERS = {
    "check-semiring": h_check_semiring, "check-module": h_check_module,
    "check-bimodule": h_check_bimodule, "check-morphism": h_check_morphism,
    "kernel": h_kernel, "cokernel": h_cokernel, "biproduct": h_biproduct,
    "tensor": h_tensor, "multi-tensor": h_multi_tensor, "hom": h_hom,
    "adjunction": h_adjunction, "hom-left-exact": h_hom_left_exact,
    "tensor-right-exact": h_tensor_right_exact, "conflation": h_conflation,
    "pushout": h_pushout, "pullback": h_pullback, "quillen": h_quillen,
    "ideals": h_ideals, "spectrum": h_spectrum, "quotient": h_quotient,
    "free-module": h_free_module, "extend": h_extend,
}

# directives that add names to the environment; later ones may depend on them
DEFINING = {"free-module"}


def run_directive(ctx: Context, d: dict) -> Outcome:
    out = Outcome(d.get("line", 0), d["verb"], d.get("args", []))
    start = time.perf_counter()
    try:
        handler = HANDLERS.get(d["verb"])
        if handler is None:
            raise FormatError(f"unknown directive {d['verb']!r}", d.get("line"))
        out.reports = handler(ctx, out.args, out.line)
        verdicts = [v for r in out.reports for v in r.verdicts.values()]
        if FAIL in verdicts:
            out.status = "fail"
        elif UNAVAILABLE in verdicts or any(r.info.get("warnings") and "bound" in
                                           " ".join(r.info["warnings"]) for r in out.reports):
            out.status = "unavailable"
    except LimitExceeded as exc:
        out.status = "unavailable"
        out.error = f"limit: {exc}"
    except (StructureError, Obstruction) as exc:
        # an obstruction is a mathematical finding about the input, reported as a failure
        if isinstance(exc, Obstruction):
            out.status = "fail"
            out.error = f"obstruction: {exc}"
            if exc.witness is not None:
                r = Report(d["verb"])
                r.record("construction", exc.witness if isinstance(exc.witness, dict)
                         else {"witness": exc.witness})
                out.reports.append(r)
        else:
            out.status = "error"
            out.error = str(exc)
    out.seconds = time.perf_counter() - start
    return out


def run_checks(env: dict, directives, limits: Limits | None = None, threads: int = 1,
               fail_fast: bool = False) -> list[Outcome]:
    ctx = Context(dict(env), limits or Limits())
    outcomes: list[Outcome] = []
    if threads <= 1 or fail_fast:
        for d in directives:
            o = run_directive(ctx, d)
            outcomes.append(o)
            if fail_fast and o.status != "pass":
                break
        return outcomes
    # independent directives run concurrently; a defining directive is a barrier
    batch: list = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        def flush():
            outcomes.extend(pool.map(lambda d: run_directive(ctx, d), batch))
            batch.clear()
        for d in directives:
            if d["verb"] in DEFINING:
                flush()
                outcomes.append(run_directive(ctx, d))
            else:
                batch.append(d)
        flush()
    return outcomes


def exit_status(outcomes) -> int:
    statuses = {o.status for o in outcomes}
    if "error" in statuses:
        return ERROR_EXIT
    if "fail" in statuses:
        return FAIL_EXIT
    if "unavailable" in statuses:
        return UNAVAILABLE_EXIT
    return PASS_EXIT


def structured_report(outcomes, source: str, status: int, timings=False, error=None) -> dict:
    out = {"engine": "gammalab", "version": __version__, "schema": SCHEMA, "source": source,
           "exit_status": status, "directives": [o.to_dict(timings) for o in outcomes]}
    if error is not None:
        out["error"] = error
    return out


def render_text(outcomes) -> str:
    lines = []
    for o in outcomes:
        head = f"line {o.line}: {o.verb} {' '.join(o.args)}".rstrip()
        lines.append(f"{head} -> {o.status.upper()}")
        if o.error:
            lines.append(f"  {o.error}")
        for r in o.reports:
            for law, verdict in r.verdicts.items():
                text = f"  [{r.subject}] {law}: {verdict}"
                if law in r.witnesses:
                    text += "  witness " + json.dumps(r.witnesses[law], sort_keys=True)
                lines.append(text)
            for key in ("size", "hom_tensor", "hom_curried", "spectrum", "ideals", "counts"):
                if key in r.info:
                    lines.append(f"  [{r.subject}] {key} = "
                                 + json.dumps(r.info[key], sort_keys=True))
    return "\n".join(lines) + "\n"


__all__ = ["Limits", "Outcome", "run_checks", "exit_status", "structured_report",
           "render_text", "HANDLERS"]
