"""Structure files: a line-oriented text format and its canonical JSON form.

Both parse to the same plain-data document::

    {"format": "gammalab-structure", "version": 1,
     "objects": [ {...}, ... ], "directives": [ {...}, ... ]}

``resolve`` turns a document into live objects. See docs/FORMAT.md.
"""
from __future__ import annotations

import json
import re
import shlex

import numpy as np

from .. import catalog, monoid as mon, semiring as sem
from ..errors import StructureError
from ..modules import GammaModule, ModuleMorphism, module_from_function

FORMAT = "gammalab-structure"
VERSION = 1

DIRECTIVES = (
    "check-semiring", "check-module", "check-bimodule", "check-morphism", "kernel", "cokernel",
    "biproduct", "tensor", "multi-tensor", "hom", "adjunction", "hom-left-exact",
    "tensor-right-exact", "conflation", "pushout", "pullback", "quillen", "ideals", "spectrum",
    "quotient", "free-module", "extend",
)


class FormatError(StructureError):
    def __init__(self, message, line=None, column=None):
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column


# ---- text parsing ------------------------------------------------------------------------

def _ints(tokens, line):
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise FormatError(f"expected an integer, got {t!r}", line) from None
    return out


def _split_set(tokens, line):
    """'a b c | g h = v' -> ([a,b,c], [g,h], v)."""
    text = " ".join(tokens)
    m = re.fullmatch(r"([\d\s]+)\|([\d\s]*)=\s*(\d+)", text)
    if not m:
        raise FormatError("set expects 'args | params = value'", line)
    return (_ints(m.group(1).split(), line), _ints(m.group(2).split(), line),
            int(m.group(3)))


def _tokens(raw):
    body = raw.split("#", 1)[0]
    try:
        return shlex.split(body)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_text(text: str) -> dict:
    objects, directives = [], []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        toks = _tokens(lines[i])
        i += 1
        if not toks:
            continue
        head = toks[0]
        declares = head == "conflation" and len(toks) > 2 and toks[2] == ":"
        if head in DIRECTIVES and not declares:
            directives.append({"line": lineno, "verb": head, "args": toks[1:]})
            continue
        if head not in ("monoid", "semiring", "module", "morphism", "conflation"):
            raise FormatError(f"unknown keyword {head!r}", lineno, 1)
        if len(toks) < 2:
            raise FormatError(f"{head} needs a name", lineno)
        name = toks[1]
        rest = toks[2:]
        if head == "morphism":
            objects.append(_parse_morphism(name, rest, lineno))
            continue
        if head == "conflation":
            if len(rest) != 3 or rest[0] != ":":
                raise FormatError("conflation NAME : INFLATION DEFLATION", lineno)
            objects.append({"kind": "conflation", "name": name, "line": lineno,
                            "inflation": rest[1], "deflation": rest[2]})
            continue
        one_line = _one_line(head, name, rest, lineno)
        if one_line is not None:
            objects.append(one_line)
            continue
        body = []
        while True:
            if i >= len(lines):
                raise FormatError(f"{head} {name!r} is missing 'end'", lineno)
            btoks = _tokens(lines[i])
            i += 1
            if btoks == ["end"]:
                break
            if btoks:
                body.append((i, btoks))
        if head == "monoid":
            objects.append(_parse_monoid_block(name, body, lineno))
        elif head == "semiring":
            objects.append(_parse_semiring_block(name, body, lineno))
        else:
            objects.append(_parse_module_block(name, rest, body, lineno))
    return {"format": FORMAT, "version": VERSION, "objects": objects, "directives": directives}


def _one_line(head, name, rest, line):
    if head in ("monoid", "semiring") and rest[:1] == ["builtin"]:
        if len(rest) != 2:
            raise FormatError(f"{head} NAME builtin SPEC", line)
        return {"kind": head, "name": name, "line": line, "builtin": rest[1]}
    if head == "module" and len(rest) >= 4 and rest[0] == "over" and rest[2] == "catalog":
        return {"kind": "module", "name": name, "line": line, "over": rest[1],
                "catalog": rest[3]}
    if head == "module" and (len(rest) < 2 or rest[0] != "over"):
        raise FormatError("module NAME over SEMIRING", line)
    if head in ("monoid", "semiring") and rest:
        raise FormatError(f"unexpected tokens after {head} name: {rest}", line)
    return None


def _parse_morphism(name, rest, line):
    # NAME : SRC -> DST map v v v [slots s s]
    if len(rest) < 5 or rest[0] != ":" or rest[2] != "->" or rest[4] != "map":
        raise FormatError("morphism NAME : SOURCE -> TARGET map VALUES... [slots S...]", line)
    tail = rest[5:]
    slots = None
    if "slots" in tail:
        k = tail.index("slots")
        slots = _ints(tail[k + 1:], line)
        tail = tail[:k]
    obj = {"kind": "morphism", "name": name, "line": line, "source": rest[1],
           "target": rest[3], "map": _ints(tail, line)}
    if slots is not None:
        obj["slots"] = slots
    return obj


def _parse_monoid_block(name, body, line):
    obj = {"kind": "monoid", "name": name, "line": line, "zero": 0, "table": []}
    in_table = False
    for ln, toks in body:
        if toks[0] == "zero":
            obj["zero"] = _ints(toks[1:2], ln)[0]
        elif toks[0] == "labels":
            obj["labels"] = toks[1:]
        elif toks[0] == "table":
            in_table = True
            if len(toks) > 1:
                obj["table"].append(_ints(toks[1:], ln))
        elif in_table:
            obj["table"].append(_ints(toks, ln))
        else:
            raise FormatError(f"unknown monoid field {toks[0]!r}", ln, 1)
    return obj


def _parse_semiring_block(name, body, line):
    obj = {"kind": "semiring", "name": name, "line": line, "sets": []}
    field = None
    for ln, toks in body:
        key = toks[0]
        if key in ("T", "Gamma", "builtin"):
            obj[key] = toks[1]
            field = None
        elif key == "arity":
            obj["arity"] = _ints(toks[1:2], ln)[0]
            field = None
        elif key == "mu":
            obj["mu"] = _ints(toks[1:], ln)
            field = "mu"
        elif key == "set":
            xs, gs, v = _split_set(toks[1:], ln)
            obj["sets"].append({"args": xs, "params": gs, "value": v})
            field = None
        elif field == "mu":
            obj["mu"].extend(_ints(toks, ln))
        else:
            raise FormatError(f"unknown semiring field {key!r}", ln, 1)
    for key in ("T", "Gamma", "arity", "mu"):
        if key not in obj and "builtin" not in obj:
            raise FormatError(f"semiring {name!r} is missing {key!r}", line)
    return obj


def _parse_module_block(name, rest, body, line):
    obj = {"kind": "module", "name": name, "line": line, "over": rest[1], "actions": {},
           "sets": []}
    current = None
    for ln, toks in body:
        key = toks[0]
        if key == "carrier":
            obj["carrier"] = toks[1]
            current = None
        elif key == "action":
            if len(toks) < 3:
                raise FormatError("action SLOT regular|zero|scalar|table VALUES...", ln)
            slot = str(_ints(toks[1:2], ln)[0])
            kind = toks[2]
            if kind not in ("regular", "zero", "scalar", "table"):
                raise FormatError(f"unknown action kind {kind!r}", ln, 3)
            spec = {"kind": kind}
            if kind == "table":
                spec["values"] = _ints(toks[3:], ln)
                current = spec
            else:
                current = None
            obj["actions"][slot] = spec
        elif key == "set":
            slot = _ints(toks[1:2], ln)[0]
            xs, gs, v = _split_set(toks[2:], ln)
            obj["sets"].append({"slot": slot, "args": xs, "params": gs, "value": v})
            current = None
        elif current is not None:
            current["values"].extend(_ints(toks, ln))
        else:
            raise FormatError(f"unknown module field {key!r}", ln, 1)
    if "carrier" not in obj:
        raise FormatError(f"module {name!r} is missing 'carrier'", line)
    if not obj["actions"]:
        raise FormatError(f"module {name!r} declares no action", line)
    return obj


def parse_document(text: str) -> dict:
    """Text or canonical JSON (detected by a leading '{')."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        if doc.get("format") != FORMAT or doc.get("version") != VERSION:
            raise FormatError(f"not a {FORMAT} v{VERSION} document")
        unknown = set(doc) - {"format", "version", "objects", "directives"}
        if unknown:
            raise FormatError(f"unknown top-level keys {sorted(unknown)}")
        _check_keys(doc)
        return doc
    return parse_text(text)


_KEYS = {
    "monoid": {"kind", "name", "line", "builtin", "zero", "labels", "table"},
    "semiring": {"kind", "name", "line", "builtin", "T", "Gamma", "arity", "mu", "sets"},
    "module": {"kind", "name", "line", "over", "catalog", "carrier", "actions", "sets"},
    "morphism": {"kind", "name", "line", "source", "target", "map", "slots"},
    "conflation": {"kind", "name", "line", "inflation", "deflation"},
}


def _check_keys(doc):
    # strict mode: an unknown key is an error, not silently ignored
    for obj in doc.get("objects", []):
        allowed = _KEYS.get(obj.get("kind"))
        if allowed is None:
            raise FormatError(f"unknown object kind {obj.get('kind')!r}", obj.get("line"))
        unknown = set(obj) - allowed
        if unknown:
            raise FormatError(f"unknown keys {sorted(unknown)} in {obj['kind']} "
                              f"{obj.get('name')!r}", obj.get("line"))
    for d in doc.get("directives", []):
        unknown = set(d) - {"line", "verb", "args"}
        if unknown or d.get("verb") not in DIRECTIVES:
            raise FormatError(f"bad directive {d!r}", d.get("line"))


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---- resolution -------------------------------------------------------------------------

_MONOID_BUILTINS = {
    "boolean": mon.boolean_monoid, "z2": mon.z2_monoid, "trivial": mon.trivial_monoid,
}


def _builtin_monoid(spec, line):
    if spec in _MONOID_BUILTINS:
        return _MONOID_BUILTINS[spec]()
    m = re.fullmatch(r"(chain|cyclic|tropical):(\d+)", spec)
    if m:
        k = int(m.group(2))
        return {"chain": mon.chain_monoid, "cyclic": mon.cyclic_group_monoid,
                "tropical": mon.trunc_tropical_monoid}[m.group(1)](k)
    raise FormatError(f"unknown builtin monoid {spec!r}", line)


def _builtin_semiring(spec, line, max_carrier):
    if spec == "b3":
        return sem.b3()
    if spec == "b3-unit":
        return sem.b3(gamma_unit_only=True)
    if spec == "z2":
        return sem.z2_realization(3)
    if spec == "m2b":
        return sem.m2b()
    m = re.fullmatch(r"matrix:(\w[\w-]*):(\d+):(\d+)", spec)
    if m:
        return sem.build_matrix_realization(m.group(1), int(m.group(2)), int(m.group(3)),
                                            limit=max_carrier)
    m = re.fullmatch(r"product:(\w[\w-]*):(\d+)", spec)
    if m:
        return sem.scalar_product_semiring(m.group(1), int(m.group(2)))
    raise FormatError(f"unknown builtin semiring {spec!r}", line)


def resolve(doc: dict, max_carrier: int = 16) -> dict:
    """Build every declared object in order; names must be declared before use."""
    env: dict = {}

    def get(name, kind, line):
        if name not in env:
            raise FormatError(f"undeclared name {name!r}", line)
        obj_kind, value = env[name]
        if obj_kind != kind:
            raise FormatError(f"{name!r} is a {obj_kind}, expected a {kind}", line)
        return value

    for obj in doc.get("objects", []):
        kind, name, line = obj.get("kind"), obj.get("name"), obj.get("line")
        if name in env:
            raise FormatError(f"{name!r} declared twice", line)
        try:
            value = _build(obj, get, max_carrier)
        except FormatError:
            raise
        except StructureError as exc:
            raise FormatError(f"{kind} {name!r}: {exc}", line) from None
        env[name] = (kind, value)
    return env


def _build(obj, get, max_carrier):
    kind, line = obj["kind"], obj.get("line")
    if kind == "monoid":
        if "builtin" in obj:
            return _builtin_monoid(obj["builtin"], line)
        table = obj["table"]
        size = len(table)
        bad = [k for k, row in enumerate(table) if len(row) != size]
        if bad or size == 0:
            raise FormatError(f"dimension mismatch: addition table is {size} x "
                              f"{len(table[bad[0]]) if bad else 0}", line)
        if size > max_carrier:
            raise FormatError(f"carrier size {size} exceeds --max-carrier {max_carrier}", line)
        return mon.FiniteCommMonoid(table, obj.get("zero", 0), obj.get("labels"))
    if kind == "semiring":
        if "builtin" in obj:
            S = _builtin_semiring(obj["builtin"], line, max_carrier)
        else:
            T = get(obj["T"], "monoid", line)
            G = get(obj["Gamma"], "monoid", line)
            n = int(obj["arity"])
            expected = T.size ** n * G.size ** (n - 1)
            if len(obj["mu"]) != expected:
                raise FormatError(f"dimension mismatch: mu has {len(obj['mu'])} entries, "
                                  f"expected {expected}", line)
            shape = (T.size,) * n + (G.size,) * (n - 1)
            S = sem.GammaSemiring(T, G, n, np.asarray(obj["mu"]).reshape(shape), "table")
        for cell in obj.get("sets", []):
            S = S.with_entry(cell["args"], cell["params"], cell["value"])
        S.name = obj["name"]
        return S
    if kind == "module":
        S = get(obj["over"], "semiring", line)
        if "catalog" in obj:
            if S.T == mon.boolean_monoid():
                mods = catalog.b3_modules(S)
            elif S.T == mon.z2_monoid():
                mods = catalog.z2_modules(S)
            else:
                raise FormatError("catalog modules exist over Boolean or Z2 carriers only", line)
            try:
                M = catalog.by_name(mods, obj["catalog"])
            except KeyError:
                raise FormatError(f"no catalog module {obj['catalog']!r} over {obj['over']}",
                                  line) from None
            M.name = obj["name"]
            return M
        carrier = get(obj["carrier"], "monoid", line)
        tables = {}
        for slot_s, spec in sorted(obj["actions"].items()):
            slot = int(slot_s)
            if spec["kind"] == "regular":
                if carrier != S.T:
                    raise FormatError("regular action needs the semiring's own carrier", line)
                tables[slot] = S.mu
            elif spec["kind"] == "zero":
                tables[slot] = module_from_function(
                    carrier, S, (slot,), lambda s, xs, m, gs: carrier.zero).actions[slot]
            elif spec["kind"] == "scalar":
                tables[slot] = catalog.scalar_module(carrier, S).actions[slot] \
                    if slot in catalog.SLOTS else _scalar_single(carrier, S, slot)
            else:
                tables[slot] = spec["values"]
        M = GammaModule(carrier, S, tables, obj["name"])
        for cell in obj.get("sets", []):
            args = list(cell["args"])
            M = M.with_action_entry(cell["slot"], args + list(cell["params"]), cell["value"])
        M.name = obj["name"]
        return M
    if kind == "morphism":
        src = get(obj["source"], "module", line)
        dst = get(obj["target"], "module", line)
        if len(obj["map"]) != src.size:
            raise FormatError(f"dimension mismatch: map has {len(obj['map'])} values, source "
                              f"has {src.size} elements", line)
        return ModuleMorphism(src, dst, tuple(obj["map"]), obj.get("slots"))
    if kind == "conflation":
        return (get(obj["inflation"], "morphism", line), get(obj["deflation"], "morphism", line))
    raise FormatError(f"unknown object kind {kind!r}", line)


def _scalar_single(carrier, S, slot):
    def fn(s, xs, m, gs):
        alive = all(x == 1 for x in xs) and (S.Gamma.size == 1 or all(g == 1 for g in gs))
        return m if alive else carrier.zero
    return module_from_function(carrier, S, (slot,), fn).actions[slot]


__all__ = ["DIRECTIVES", "FormatError", "parse_text", "parse_document", "canonical_json",
           "resolve"]
