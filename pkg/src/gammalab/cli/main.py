"""``gammalab check | explain | formats``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .format import DIRECTIVES, FormatError, canonical_json, parse_document, resolve
from .runner import (ERROR_EXIT, Limits, exit_status, render_text, run_checks,
                     structured_report)

EXPLAIN = {
    "check-semiring": "check-semiring S\n  A1 additivity per slot, A2 zero absorption, A3 two-node "
                      "bracketings agree; A4 symmetry witness reported as info.",
    "check-module": "check-module M [SLOT]\n  M1-M4 for each action (or the named slot).",
    "check-bimodule": "check-bimodule M\n  M1-M4 for both actions plus left/right compatibility.",
    "check-morphism": "check-morphism F\n  zero, additivity and intertwining of every declared slot.",
    "kernel": "kernel F\n  preimage of zero as a submodule; universal property against every "
              "declared module with at most 4 elements.",
    "cokernel": "cokernel F\n  quotient by the congruence generated by the image; universal "
                "property as for kernel; reports whether the coset description agrees.",
    "biproduct": "biproduct M N\n  the four structure maps and the biproduct identities.",
    "tensor": "tensor M N [J K]\n  M (x) N balancing M's slot-J action against N's slot-K "
              "action (defaults: M's highest slot, N's lowest).",
    "multi-tensor": "multi-tensor M1 ... MK\n  consecutive factors balanced as in tensor.",
    "hom": "hom M P J K\n  internal Hom with its induced actions, validated.",
    "adjunction": "adjunction M N P [J K]\n  currying Hom(M (x) N, P) -> Hom(N, Hom(M, P)) is "
                  "a bijection; naturality in P against endomorphisms of P.",
    "hom-left-exact": "hom-left-exact M C\n  0 -> Hom(M,A) -> Hom(M,B) -> Hom(M,C) exact at the "
                      "first two spots.",
    "tensor-right-exact": "tensor-right-exact N C [J K]\n  A(x)N -> B(x)N -> C(x)N -> 0 exact "
                          "(cokernel comparison is an isomorphism).",
    "conflation": "conflation C\n  certify p.i = 0, i a kernel of p, p a cokernel of i.",
    "pushout": "pushout C F\n  push C's inflation along F; re-certify and check the universal "
               "property.",
    "pullback": "pullback C G\n  pull C's deflation back along G; re-certify and check the "
                "universal property.",
    "quillen": "quillen [C ...]\n  E1-E3 over the named (default: all) conflations and every "
               "declared module; non-kernel monomorphisms listed as excluded.",
    "ideals": "ideals S\n  every Gamma-ideal of S.",
    "spectrum": "spectrum S\n  prime Gamma-ideals, cross-checked by a naive scanner.",
    "quotient": "quotient S MEMBERS...\n  T/I with the induced operation, validated.",
    "free-module": "free-module NAME S gens=x,y depth=D [slot=J] [sum=K]\n  depth-bounded free "
                   "module; defines NAME for later extend directives.",
    "extend": "extend F M VALUES...\n  the morphism F -> M with the given generator images, "
              "plus the representability check.",
}

FORMATS = """\
Structure files are line oriented. '#' starts a comment.

  monoid NAME builtin boolean|z2|trivial|chain:K|cyclic:K|tropical:K
  monoid NAME            (block: zero Z / labels ... / table rows ... / end)
  semiring NAME builtin b3|b3-unit|z2|m2b|matrix:BASE:M:N|product:BASE:N
  semiring NAME          (block: builtin SPEC | T / Gamma / arity / mu ...; set ARGS | PARAMS = V; end)
  module NAME over S catalog CATALOG-NAME
  module NAME over S     (block: carrier MONOID / action SLOT regular|zero|scalar|table ... /
                          set SLOT ARGS | PARAMS = V / end)
  morphism NAME : SOURCE -> TARGET map V... [slots S...]
  conflation NAME : INFLATION DEFLATION
  <directive> ARGS...    (see 'gammalab explain')

A file whose first non-blank character is '{' is read as the canonical JSON
form; 'gammalab check FILE --emit-canonical OUT' writes it.
Exit statuses: 0 all pass, 1 a check failed, 2 a check was unavailable
(limit or bound exceeded), 3 structural error. Full reference: docs/FORMAT.md
"""


def _threads(value):
    if value is not None:
        return max(1, value)
    env = os.environ.get("GAMMALAB_MAX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def cmd_check(ns) -> int:
    limits = Limits(ns.max_carrier, ns.max_tensor_classes, ns.max_hom_enumeration)
    source = Path(ns.file).name
    try:
        text = Path(ns.file).read_text(encoding="utf-8")
        doc = parse_document(text)
        env = resolve(doc, limits.max_carrier)
    except (OSError, FormatError) as exc:
        print(f"error: {source}: {exc}", file=sys.stderr)
        if ns.emit_report:
            report = structured_report([], source, ERROR_EXIT, error=str(exc))
            _write(ns.emit_report, json.dumps(report, sort_keys=True, indent=2) + "\n")
        return ERROR_EXIT
    if ns.emit_canonical:
        _write(ns.emit_canonical, canonical_json(doc))
    outcomes = run_checks(env, doc.get("directives", []), limits, _threads(ns.threads),
                          ns.fail_fast)
    status = exit_status(outcomes)
    sys.stdout.write(render_text(outcomes))
    print(f"exit status {status}")
    if ns.emit_report:
        report = structured_report(outcomes, source, status, ns.timings)
        _write(ns.emit_report, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return status


def cmd_explain(ns) -> int:
    if ns.directive is None:
        print("\n".join(DIRECTIVES))
        return 0
    if ns.directive not in EXPLAIN:
        print(f"unknown directive {ns.directive!r}; known: {', '.join(DIRECTIVES)}",
              file=sys.stderr)
        return ERROR_EXIT
    print(EXPLAIN[ns.directive])
    return 0


def cmd_formats(ns) -> int:
    sys.stdout.write(FORMATS)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammalab",
                                description="Verify finite n-ary Gamma-semiring structures.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="parse a structure file and run its directives")
    c.add_argument("file")
    c.add_argument("--emit-report", metavar="PATH", help="write the structured JSON report")
    c.add_argument("--emit-canonical", metavar="PATH", help="write the canonical JSON document")
    c.add_argument("--fail-fast", action="store_true", help="stop at the first non-pass")
    c.add_argument("--threads", type=int, default=None,
                   help="run independent directives concurrently (env GAMMALAB_MAX_THREADS)")
    c.add_argument("--timings", action="store_true", help="include timings in the report")
    c.add_argument("--max-carrier", type=int, default=16)
    c.add_argument("--max-tensor-classes", type=int, default=4096)
    c.add_argument("--max-hom-enumeration", type=int, default=2 ** 20)
    c.set_defaults(func=cmd_check)
    e = sub.add_parser("explain", help="describe a directive")
    e.add_argument("directive", nargs="?")
    e.set_defaults(func=cmd_explain)
    f = sub.add_parser("formats", help="summarize the structure-file format")
    f.set_defaults(func=cmd_formats)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return ns.func(ns)


if __name__ == "__main__":
    raise SystemExit(main())
