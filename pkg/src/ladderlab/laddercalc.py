"""Forward-chaining calculus for recollements and ladders.

Facts are typed atoms over declared category and functor symbols::

    adjoint(F,G)                 F is left adjoint to G
    abelian_adjoint(F,G)         the same, between the underlying abelian categories
    exact_sequence(i,e)          U -i-> T -e-> V is an exact sequence
    recollement(q,i,p;l,e,r)     q -| i -| p  and  l -| e -| r  around U -i-> T -e-> V
    preserves_compacts(F)        (and the other functor / category flags)

``derive_closure`` saturates a ``FactBase`` under a fixed list of rules and
records every firing in a ``Derivation``.  ``ladder_height`` then walks the
``ladder_down`` / ``ladder_up`` links produced by the iteration rules.

A recollement atom implies its constituents (the four adjunctions, the
three fully faithful functors and the exact sequence i, e).  These implied
facts are visible to the rules and to ``FactBase.holds`` but are never
materialized as separate atoms.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

CATEGORY_FLAGS = ("compactly_generated",)
FUNCTOR_FLAGS = (
    "fully_faithful",
    "preserves_coproducts",
    "preserves_compacts",
    "exact_abelian_origin",
    "restricts_to_fd",
)
FLAGS = CATEGORY_FLAGS + FUNCTOR_FLAGS

ARITY = {
    "adjoint": 2,
    "abelian_adjoint": 2,
    "exact_sequence": 2,
    "kernel_equals_image": 2,
    "recollement": 6,
    "restricts_compact": 6,
    "restricts_fd": 6,
    "ladder_down": 12,
    "ladder_up": 12,
}

DEFAULT_BUDGET = 32
DERIVATION_SCHEMA = "ladderlab.derivation/1"
FACTS_SCHEMA = "ladderlab.facts/1"


class FactError(ValueError):
    """Raised for undeclared symbols, ill-typed atoms and contradictions."""


class ReplayError(ValueError):
    pass


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, order=True)
class Atom:
    kind: str
    args: tuple
    negated: bool = False

    def __str__(self) -> str:
        a = self.args
        if self.kind in FLAGS:
            body = a[0]
        elif len(a) == 6:
            body = _six(a)
        elif len(a) == 12:
            body = f"{_six(a[:6])} => {_six(a[6:])}"
        else:
            body = ",".join(a)
        return f"{'not ' if self.negated else ''}{self.kind}({body})"

    def __repr__(self) -> str:
        return f"Atom<{self}>"

    @property
    def symbols(self) -> tuple:
        return self.args

    def positive(self) -> "Atom":
        return Atom(self.kind, self.args)


def _six(a) -> str:
    return ",".join(a[:3]) + ";" + ",".join(a[3:])


_ATOM_RE = re.compile(r"^\s*(not\s+)?([a-z_]+)\s*\((.*)\)\s*$")


def parse_atom(text: Union[str, Atom]) -> Atom:
    if isinstance(text, Atom):
        return text
    m = _ATOM_RE.match(text)
    if not m:
        raise FactError(f"cannot parse atom {text!r}")
    negated, kind, body = bool(m.group(1)), m.group(2), m.group(3)
    args = tuple(s.strip() for s in re.split(r"=>|[;,]", body))
    if any(not s for s in args):
        raise FactError(f"empty symbol in {text!r}")
    want = 1 if kind in FLAGS else ARITY.get(kind)
    if want is None:
        raise FactError(f"unknown predicate {kind!r}")
    if len(args) != want:
        raise FactError(f"{kind} takes {want} symbols, got {len(args)}")
    if negated and kind not in FLAGS:
        raise FactError("only flags can be negated")
    return Atom(kind, args, negated)


def atom(kind: str, *args: str) -> Atom:
    return Atom(kind, tuple(args))


# ---------------------------------------------------------------------------
# fact bases


@dataclass(frozen=True)
class FactBase:
    """Immutable collection of declarations and atoms, kept in insertion order."""

    categories: tuple = ()
    functors: tuple = ()  # (name, domain, codomain)
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "_signatures", {f[0]: (f[1], f[2]) for f in self.functors})
        object.__setattr__(self, "_atom_set", frozenset(self.atoms))

    # declarations

    def declare_category(self, name: str, *flags: str) -> "FactBase":
        _check_name(name)
        if name in self._signatures:
            raise FactError(f"{name} is already a functor symbol")
        fb = self if name in self.categories else FactBase(
            self.categories + (name,), self.functors, self.atoms
        )
        for fl in flags:
            fb = fb.add(atom(fl, name))
        return fb

    def declare_functor(self, name: str, domain: str, codomain: str, *flags: str) -> "FactBase":
        _check_name(name)
        for c in (domain, codomain):
            if c not in self.categories:
                raise FactError(f"undeclared category {c}")
        if name in self.categories:
            raise FactError(f"{name} is already a category symbol")
        old = self._signatures.get(name)
        if old is not None and old != (domain, codomain):
            raise FactError(f"{name} redeclared as {domain} -> {codomain}, was {old[0]} -> {old[1]}")
        fb = self if old else FactBase(self.categories, self.functors + ((name, domain, codomain),), self.atoms)
        for fl in flags:
            fb = fb.add(atom(fl, name))
        return fb

    def signature(self, name: str) -> tuple:
        try:
            return self._signatures[name]
        except KeyError:
            raise FactError(f"undeclared functor {name}") from None

    def is_functor(self, name: str) -> bool:
        return name in self._signatures

    # atoms

    def add(self, a: Union[str, Atom]) -> "FactBase":
        a = parse_atom(a)
        if a in self._atom_set:
            return self
        _typecheck(self, a)
        other = Atom(a.kind, a.args, not a.negated)
        if other in self._atom_set:
            raise FactError(f"{a} contradicts {other}")
        return FactBase(self.categories, self.functors, self.atoms + (a,))

    def __contains__(self, a) -> bool:
        return parse_atom(a) in self._atom_set

    def __len__(self) -> int:
        return len(self.atoms)

    def holds(self, a: Union[str, Atom]) -> bool:
        """Membership up to the constituents implied by recollements and exact sequences."""
        a = parse_atom(a)
        if a in self._atom_set:
            return True
        return any(a in _implied(b) for b in self.atoms if b.kind in ("recollement", "exact_sequence"))

    def of_kind(self, kind: str) -> list:
        return [a for a in self.atoms if a.kind == kind]

    @property
    def recollements(self) -> list:
        return [a.args for a in self.atoms if a.kind == "recollement"]

    def to_json(self) -> dict:
        return {
            "schema": FACTS_SCHEMA,
            "categories": {c: {"flags": []} for c in self.categories},
            "functors": {n: {"domain": d, "codomain": c, "flags": []} for n, d, c in self.functors},
            "atoms": [str(a) for a in self.atoms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FactBase":
        fb = cls()
        try:
            cats = data.get("categories", {})
            if isinstance(cats, list):
                cats = {c: {} for c in cats}
            for name, spec in cats.items():
                fb = fb.declare_category(name, *(spec or {}).get("flags", ()))
            for name, spec in data.get("functors", {}).items():
                fb = fb.declare_functor(name, spec["domain"], spec["codomain"], *spec.get("flags", ()))
            for a in data.get("atoms", ()):
                fb = fb.add(a)
        except (KeyError, TypeError, AttributeError) as exc:
            raise FactError(f"malformed fact base: {exc}") from exc
        return fb

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def add_fact(fb: FactBase, a: Union[str, Atom]) -> FactBase:
    return fb.add(a)


def _check_name(name: str):
    if not name or re.search(r"[\s,;()=>]", name):
        raise FactError(f"bad symbol name {name!r}")


def _typecheck(fb: FactBase, a: Atom):
    if a.kind in CATEGORY_FLAGS:
        if a.args[0] not in fb.categories:
            raise FactError(f"undeclared category {a.args[0]}")
        return
    for s in a.args:
        if not fb.is_functor(s):
            raise FactError(f"undeclared functor {s}")
    if a.kind in FUNCTOR_FLAGS:
        return
    sig = fb.signature
    if a.kind in ("adjoint", "abelian_adjoint"):
        (fa, fb_), (ga, gb) = sig(a.args[0]), sig(a.args[1])
        if (fa, fb_) != (gb, ga):
            raise FactError(f"{a}: {a.args[0]} and {a.args[1]} do not point in opposite directions")
    elif a.kind in ("exact_sequence", "kernel_equals_image"):
        if sig(a.args[0])[1] != sig(a.args[1])[0]:
            raise FactError(f"{a}: functors are not composable")
    elif len(a.args) == 6:
        _typecheck_six(fb, a.args, str(a))
    else:
        _typecheck_six(fb, a.args[:6], str(a))
        _typecheck_six(fb, a.args[6:], str(a))


def _typecheck_six(fb: FactBase, six, label: str):
    q, i, p, l, e, r = (fb.signature(s) for s in six)
    u, t = i
    v = e[1]
    if e[0] != t or q != (t, u) or p != (t, u) or l != (v, t) or r != (v, t):
        raise FactError(f"{label}: functors do not fit a recollement shape")


def _implied(a: Atom) -> tuple:
    if a.kind == "exact_sequence":
        i, e = a.args
        return (atom("fully_faithful", i), atom("kernel_equals_image", i, e))
    if a.kind == "recollement":
        q, i, p, l, e, r = a.args
        return (
            atom("adjoint", q, i), atom("adjoint", i, p),
            atom("adjoint", l, e), atom("adjoint", e, r),
            atom("fully_faithful", i), atom("fully_faithful", l), atom("fully_faithful", r),
            atom("exact_sequence", i, e), atom("kernel_equals_image", i, e),
        )
    return ()


def rename(fb: FactBase, mapping: dict) -> FactBase:
    """Rename symbols; names missing from ``mapping`` are kept."""
    m = lambda s: mapping.get(s, s)  # noqa: E731
    return FactBase(
        tuple(m(c) for c in fb.categories),
        tuple((m(n), m(d), m(c)) for n, d, c in fb.functors),
        tuple(Atom(a.kind, tuple(m(s) for s in a.args), a.negated) for a in fb.atoms),
    )


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Rule:
    id: str
    citation: str


RULES = (
    Rule("R-CPS-L", "exact sequence U -> T -> V: i has a left adjoint iff e has one; the left adjoint of e is fully faithful"),
    Rule("R-CPS-R", "exact sequence U -> T -> V: i has a right adjoint iff e has one; the right adjoint of e is fully faithful"),
    Rule("R-CPS-REC", "an exact sequence with adjoints on both sides of i and of e is a recollement"),
    Rule("R-H2DOWN", "height two going downwards: i preserves compacts iff e does iff p has a right adjoint iff r has a right adjoint"),
    Rule("R-H2UP", "height two going upwards: q has a left adjoint iff l has a left adjoint"),
    Rule("R-BROWN", "Brown representability: for F -| G between compactly generated categories, G preserves coproducts iff G has a right adjoint iff F preserves compacts"),
    Rule("R-LIFT", "an adjoint pair of exact functors between abelian categories lifts to the unbounded derived categories"),
    Rule("R-ITER-DOWN", "given p -| p1 and r -| r1, the rows e, r, r1 over i, p, p1 form the next recollement of the ladder downwards"),
    Rule("R-ITER-UP", "given l1 -| l and q1 -| q, the rows l1, l, e over q1, q, i form the next recollement of the ladder upwards"),
    Rule("R-RESTRICT-C", "a ladder of height three downwards restricts to a recollement of compact objects"),
    Rule("R-RESTRICT-FD", "a right adjoint of a compact-preserving functor restricts to D_fd; if l restricts to D_fd and i preserves compacts the recollement restricts to D_fd"),
)
RULE_IDS = tuple(r.id for r in RULES)
CITATIONS = {r.id: r.citation for r in RULES}


@dataclass(frozen=True)
class Step:
    rule: str
    premises: tuple
    produced: tuple
    fresh: tuple = ()  # (name, domain, codomain)
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "rule": self.rule,
            "citation": CITATIONS.get(self.rule, ""),
            "premises": [str(a) for a in self.premises],
            "produced": [str(a) for a in self.produced],
            "fresh": [{"name": n, "domain": d, "codomain": c} for n, d, c in self.fresh],
        }
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Step":
        return cls(
            d["rule"],
            tuple(parse_atom(a) for a in d["premises"]),
            tuple(parse_atom(a) for a in d["produced"]),
            tuple((f["name"], f["domain"], f["codomain"]) for f in d.get("fresh", ())),
            d.get("note", ""),
        )


@dataclass(frozen=True)
class Derivation:
    base: FactBase
    steps: tuple = ()
    exhausted: bool = False
    blocked: tuple = ()  # (rule id, description) skipped for lack of fresh symbols
    conflicts: tuple = ()  # atoms a rule wanted to add against an explicit negation

    def producer(self, a: Atom) -> Optional[int]:
        for k, s in enumerate(self.steps):
            if a in s.produced:
                return k
        return None

    def creator(self, name: str) -> Optional[int]:
        for k, s in enumerate(self.steps):
            if any(f[0] == name for f in s.fresh):
                return k
        return None

    def to_json(self) -> dict:
        return {
            "schema": DERIVATION_SCHEMA,
            "base": self.base.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "exhausted": self.exhausted,
            "blocked": [list(b) for b in self.blocked],
            "conflicts": [str(a) for a in self.conflicts],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Derivation":
        return cls(
            FactBase.from_json(d["base"]),
            tuple(Step.from_json(s) for s in d["steps"]),
            bool(d.get("exhausted", False)),
            tuple(tuple(b) for b in d.get("blocked", ())),
            tuple(parse_atom(a) for a in d.get("conflicts", ())),
        )


class _Engine:
    """Mutable saturation state; only ``derive_closure`` touches it."""

    def __init__(self, fb: FactBase, budget: int):
        self.fb = fb
        self.budget = budget
        self.steps: list = []
        self.blocked: list = []
        self.conflicts: list = []
        self.support: dict = {}  # fact -> explicit atom that carries it
        self.right: dict = {}  # F -> [G, ...] with F -| G, in order of appearance
        self.left: dict = {}
        self.depth_down: dict = {}
        self.depth_up: dict = {}
        for a in fb.atoms:
            self._index(a)

    # bookkeeping

    def _index(self, a: Atom):
        for fact in (a,) + _implied(a):
            if fact in self.support:
                continue
            self.support[fact] = a
            if fact.kind == "adjoint" and not fact.negated:
                f, g = fact.args
                self.right.setdefault(f, []).append(g)
                self.left.setdefault(g, []).append(f)

    def has(self, a: Atom) -> Optional[Atom]:
        return self.support.get(a)

    def flag(self, name: str, sym: str) -> Optional[Atom]:
        return self.support.get(atom(name, sym))

    def right_of(self, f: str) -> Optional[str]:
        r = self.right.get(f)
        return r[0] if r else None

    def left_of(self, g: str) -> Optional[str]:
        r = self.left.get(g)
        return r[0] if r else None

    def fresh(self, base: str, side: str, domain: str, codomain: str, rule: str, what: str) -> Optional[str]:
        if self.budget <= 0:
            self.blocked.append((rule, what))
            return None
        m = re.fullmatch(r"(.+)\^([LR])(\d*)", base)
        if m and m.group(2) == side:
            root, k = m.group(1), int(m.group(3) or 1) + 1
        else:
            root, k = base, 1
        name = f"{root}^{side}" + ("" if k == 1 else str(k))
        while self.fb.is_functor(name) or name in self.fb.categories:
            k += 1
            name = f"{root}^{side}{k}"
        self.budget -= 1
        self.fb = self.fb.declare_functor(name, domain, codomain)
        return name

    def fire(self, rule: str, premises: Iterable, produced: Iterable, fresh=(), note="") -> bool:
        new = []
        for a in produced:
            if self.has(a) or a in new:
                continue
            if a.kind in FLAGS and self.has(Atom(a.kind, a.args, True)):
                self.conflicts.append(a)
                continue
            new.append(a)
        if not new:
            return False
        prem = []
        for p in premises:
            if p is not None and p not in prem:
                prem.append(p)
        for a in new:
            self.fb = self.fb.add(a)
            self._index(a)
        self.steps.append(Step(rule, tuple(prem), tuple(new), tuple(fresh), note))
        return True

    def cg(self, *cats) -> Optional[list]:
        out = [self.flag("compactly_generated", c) for c in cats]
        return None if any(x is None for x in out) else out

    def new_adjoint(self, g: str, side: str, rule: str) -> tuple:
        """Return (name, fresh-record) for an adjoint of g on ``side``; creates one if needed."""
        existing = self.right_of(g) if side == "R" else self.left_of(g)
        if existing:
            return existing, None
        dom, cod = self.fb.signature(g)
        name = self.fresh(g, side, cod, dom, rule, f"{'right' if side == 'R' else 'left'} adjoint of {g}")
        return name, ((name, cod, dom) if name else None)

    # rules

    def r_cps(self, side: str) -> bool:
        rule = "R-CPS-L" if side == "L" else "R-CPS-R"
        adj = self.left_of if side == "L" else self.right_of
        changed = False
        for es in list(self._exact_sequences()):
            i, e = es.args
            src = self.has(es)
            a_i, a_e = adj(i), adj(e)
            pair = (lambda x, y: atom("adjoint", x, y)) if side == "L" else (lambda x, y: atom("adjoint", y, x))
            if a_e and not a_i:
                name, rec = self.new_adjoint(i, side, rule)
                if name:
                    changed |= self.fire(rule, [src, self.has(pair(a_e, e))], [pair(name, i)], [rec] if rec else ())
            elif a_i and not a_e:
                name, rec = self.new_adjoint(e, side, rule)
                if name:
                    changed |= self.fire(rule, [src, self.has(pair(a_i, i))], [pair(name, e)], [rec] if rec else ())
            a_e = adj(e)
            if a_e and adj(i):
                changed |= self.fire(rule, [src, self.has(pair(a_e, e))], [atom("fully_faithful", a_e)])
        return changed

    def _exact_sequences(self):
        seen = set()
        for fact in list(self.support):
            if fact.kind == "exact_sequence" and fact not in seen:
                seen.add(fact)
                yield fact

    def r_cps_rec(self) -> bool:
        changed = False
        have = {(r[1], r[4]) for r in self.fb.recollements}
        for es in list(self._exact_sequences()):
            i, e = es.args
            if (i, e) in have:
                continue
            q, p, l, r = self.left_of(i), self.right_of(i), self.left_of(e), self.right_of(e)
            if not all((q, p, l, r)):
                continue
            prem = [self.has(es)] + [self.has(atom("adjoint", *x)) for x in ((q, i), (i, p), (l, e), (e, r))]
            changed |= self.fire("R-CPS-REC", prem, [atom("recollement", q, i, p, l, e, r)])
            have.add((i, e))
        return changed

    def r_brown(self) -> bool:
        changed = False
        for f in list(self.right):
            for g in list(self.right[f]):
                dom, cod = self.fb.signature(f)
                cg = self.cg(dom, cod)
                if cg is None:
                    continue
                pair = self.has(atom("adjoint", f, g))
                h = self.right_of(g)
                if h:
                    changed |= self.fire(
                        "R-BROWN", [pair, self.has(atom("adjoint", g, h))] + cg,
                        [atom("preserves_compacts", f), atom("preserves_coproducts", g)],
                    )
                    continue
                trigger = self.flag("preserves_compacts", f) or self.flag("preserves_coproducts", g)
                if trigger is None:
                    continue
                name, rec = self.new_adjoint(g, "R", "R-BROWN")
                if name:
                    changed |= self.fire(
                        "R-BROWN", [pair, trigger] + cg,
                        [atom("adjoint", g, name), atom("preserves_compacts", f), atom("preserves_coproducts", g)],
                        [rec],
                    )
        return changed

    def r_lift(self) -> bool:
        changed = False
        for a in list(self.fb.of_kind("abelian_adjoint")):
            f, g = a.args
            ef, eg = self.flag("exact_abelian_origin", f), self.flag("exact_abelian_origin", g)
            if ef and eg:
                changed |= self.fire("R-LIFT", [a, ef, eg], [atom("adjoint", f, g)])
        return changed

    def _recollement_categories(self, rec) -> tuple:
        i, e = rec[1], rec[4]
        u, t = self.fb.signature(i)
        return u, t, self.fb.signature(e)[1]

    def r_h2down(self) -> bool:
        changed = False
        for rec in list(self.fb.recollements):
            q, i, p, l, e, r = rec
            cg = self.cg(*self._recollement_categories(rec))
            if cg is None:
                continue
            clauses = [
                self.flag("preserves_compacts", i),
                self.flag("preserves_compacts", e),
                self.has(atom("adjoint", p, self.right_of(p))) if self.right_of(p) else None,
                self.has(atom("adjoint", r, self.right_of(r))) if self.right_of(r) else None,
            ]
            if not any(clauses):
                continue
            p1, rec_p = self.new_adjoint(p, "R", "R-H2DOWN")
            r1, rec_r = self.new_adjoint(r, "R", "R-H2DOWN")
            produced = [atom("preserves_compacts", i), atom("preserves_compacts", e)]
            produced += [atom("adjoint", p, p1)] if p1 else []
            produced += [atom("adjoint", r, r1)] if r1 else []
            fresh = [x for x in (rec_p, rec_r) if x]
            changed |= self.fire("R-H2DOWN", [self.has(atom("recollement", *rec))] + cg + clauses, produced, fresh)
        return changed

    def r_h2up(self) -> bool:
        changed = False
        for rec in list(self.fb.recollements):
            q, i, p, l, e, r = rec
            cg = self.cg(*self._recollement_categories(rec))
            if cg is None:
                continue
            clauses = [
                self.has(atom("adjoint", self.left_of(q), q)) if self.left_of(q) else None,
                self.has(atom("adjoint", self.left_of(l), l)) if self.left_of(l) else None,
            ]
            if not any(clauses):
                continue
            q1, rec_q = self.new_adjoint(q, "L", "R-H2UP")
            l1, rec_l = self.new_adjoint(l, "L", "R-H2UP")
            produced = ([atom("adjoint", q1, q)] if q1 else []) + ([atom("adjoint", l1, l)] if l1 else [])
            fresh = [x for x in (rec_q, rec_l) if x]
            changed |= self.fire("R-H2UP", [self.has(atom("recollement", *rec))] + cg + clauses, produced, fresh)
        return changed

    def _linked(self, kind: str) -> set:
        return {a.args[:6] for a in self.fb.of_kind(kind)}

    def _match(self, cand: tuple) -> Optional[tuple]:
        # a recollement is determined, up to equivalence, by either of its adjoint triples
        for rec in self.fb.recollements:
            if rec == cand or rec[:3] == cand[:3] or rec[3:] == cand[3:]:
                return rec
        return None

    def _iterate(self, down: bool) -> bool:
        kind = "ladder_down" if down else "ladder_up"
        rule = "R-ITER-DOWN" if down else "R-ITER-UP"
        depth = self.depth_down if down else self.depth_up
        recs = self.fb.recollements
        if recs:
            depth.setdefault(recs[0], 1)
        done = self._linked(kind)
        changed = False
        for rec in list(recs):
            if rec in done:
                continue
            q, i, p, l, e, r = rec
            if down:
                p1, r1 = self.right_of(p), self.right_of(r)
                if not (p1 and r1):
                    continue
                cand = (e, r, r1, i, p, p1)
                adj = [atom("adjoint", p, p1), atom("adjoint", r, r1)]
            else:
                q1, l1 = self.left_of(q), self.left_of(l)
                if not (q1 and l1):
                    continue
                cand = (l1, l, e, q1, q, i)
                adj = [atom("adjoint", q1, q), atom("adjoint", l1, l)]
            target = self._match(cand)
            prem = [self.has(atom("recollement", *rec))] + [self.has(a) for a in adj]
            produced = [] if target else [atom("recollement", *cand)]
            target = target or cand
            produced.append(Atom(kind, rec + target))
            note = ""
            if rec in depth:
                h = depth[rec] + 1
                depth.setdefault(target, h)
                if h % 2 == 0 and h >= 4:
                    note = f"height {h} by analogy: only the odd heights are stated explicitly"
            changed |= self.fire(rule, prem, produced, note=note)
        return changed

    def r_restrict_c(self) -> bool:
        nxt = {a.args[:6]: a for a in self.fb.of_kind("ladder_down")}
        changed = False
        for rec in list(self.fb.recollements):
            first = nxt.get(rec)
            second = nxt.get(first.args[6:]) if first else None
            if second:
                changed |= self.fire("R-RESTRICT-C", [first, second], [atom("restricts_compact", *rec)])
        return changed

    def r_restrict_fd(self) -> bool:
        changed = False
        for f in list(self.right):
            pc = self.flag("preserves_compacts", f)
            if pc is None:
                continue
            for g in list(self.right[f]):
                changed |= self.fire(
                    "R-RESTRICT-FD", [self.has(atom("adjoint", f, g)), pc], [atom("restricts_to_fd", g)]
                )
        for rec in list(self.fb.recollements):
            q, i, p, l, e, r = rec
            fd, pc = self.flag("restricts_to_fd", l), self.flag("preserves_compacts", i)
            if fd and pc:
                changed |= self.fire(
                    "R-RESTRICT-FD", [self.has(atom("recollement", *rec)), fd, pc], [atom("restricts_fd", *rec)]
                )
        return changed

    def run(self):
        rules = (
            lambda: self.r_cps("L"),
            lambda: self.r_cps("R"),
            self.r_cps_rec,
            self.r_h2down,
            self.r_h2up,
            self.r_brown,
            self.r_lift,
            lambda: self._iterate(True),
            lambda: self._iterate(False),
            self.r_restrict_c,
            self.r_restrict_fd,
        )
        while True:
            changed = False
            for rule in rules:
                changed |= rule()
            if not changed:
                break


def derive_closure(fb: FactBase, budget: int = DEFAULT_BUDGET) -> tuple:
    """Saturate ``fb`` under the rules; returns ``(closure, derivation)``.

    Rules run in the order of ``RULES``, each scanning atoms in insertion
    order, until a full pass adds nothing.  At most ``budget`` fresh functor
    symbols are introduced; rule instances that would need more are listed
    in ``derivation.blocked``.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    eng = _Engine(fb, budget)
    eng.run()
    deriv = Derivation(fb, tuple(eng.steps), bool(eng.blocked), tuple(eng.blocked), tuple(eng.conflicts))
    return eng.fb, deriv


def replay(base: FactBase, steps: Iterable[Step]) -> FactBase:
    """Re-apply recorded steps, checking each step's premises first."""
    fb = base
    for k, s in enumerate(steps):
        for p in s.premises:
            if p not in fb:
                raise ReplayError(f"step {k} ({s.rule}): premise {p} missing")
        for name, dom, cod in s.fresh:
            fb = fb.declare_functor(name, dom, cod)
        for a in s.produced:
            fb = fb.add(a)
    return fb


def explain(derivation: Derivation, a: Union[str, Atom]) -> list:
    """Steps needed to justify ``a``, in derivation order; empty for a seed atom."""
    a = parse_atom(a)
    if a in derivation.base:
        return []
    k = derivation.producer(a)
    if k is None:
        raise KeyError(f"{a} was not derived")
    need: set = set()
    todo = [k]
    while todo:
        k = todo.pop()
        if k in need:
            continue
        need.add(k)
        s = derivation.steps[k]
        for p in s.premises:
            j = derivation.producer(p)
            if j is not None:
                todo.append(j)
        for x in s.premises + s.produced:
            for sym in x.args:
                j = derivation.creator(sym)
                if j is not None:
                    todo.append(j)
    return [derivation.steps[k] for k in sorted(need)]


def format_trace(steps: Iterable[Step]) -> str:
    lines = []
    for s in steps:
        fresh = f"  [fresh: {', '.join(f[0] for f in s.fresh)}]" if s.fresh else ""
        lines.append(f"{s.rule}: {', '.join(map(str, s.premises))}")
        lines.append(f"    |- {', '.join(map(str, s.produced))}{fresh}")
        if s.note:
            lines.append(f"    ({s.note})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# heights and TTF sequences


@dataclass(frozen=True)
class Height:
    value: int
    infinite: bool = False
    period: Optional[int] = None
    at_least: bool = False

    def __str__(self) -> str:
        if self.infinite:
            return f"(infinite, period {self.period})"
        return f">= {self.value}" if self.at_least else str(self.value)

    def to_json(self) -> dict:
        if self.infinite:
            return {"infinite": True, "period": self.period}
        return {"value": self.value, "at_least": self.at_least}


@dataclass(frozen=True)
class TTFSequence:
    terms: tuple
    triples: tuple  # index triples into ``terms``
    wraps: bool = False

    def to_json(self) -> dict:
        return {"terms": list(self.terms), "triples": [list(t) for t in self.triples], "wraps": self.wraps}


@dataclass(frozen=True)
class LadderReport:
    root: tuple
    height_down: Height
    height_up: Height
    chain_down: tuple
    chain_up: tuple
    witness_down: tuple  # rows (U-side functor, V-side functor), top to bottom
    witness_up: tuple  # rows, bottom to top
    ttf_down: TTFSequence = field(default=None)
    ttf_up: TTFSequence = field(default=None)

    def summary(self) -> str:
        return f"height down {self.height_down}, height up {self.height_up}"

    def to_json(self) -> dict:
        return {
            "root": _six(self.root),
            "height_down": self.height_down.to_json(),
            "height_up": self.height_up.to_json(),
            "chain_down": [_six(r) for r in self.chain_down],
            "chain_up": [_six(r) for r in self.chain_up],
            "witness_down": [list(w) for w in self.witness_down],
            "witness_up": [list(w) for w in self.witness_up],
            "ttf_down": self.ttf_down.to_json() if self.ttf_down else None,
            "ttf_up": self.ttf_up.to_json() if self.ttf_up else None,
        }


def _walk(fb: FactBase, root: tuple, kind: str) -> tuple:
    links = {}
    for a in fb.of_kind(kind):
        links.setdefault(a.args[:6], a.args[6:])
    chain = [root]
    while True:
        nxt = links.get(chain[-1])
        if nxt is None:
            return chain, None
        if nxt in chain:
            return chain, len(chain) - chain.index(nxt)
        chain.append(nxt)


def ladder_height(fb: FactBase, derivation: Optional[Derivation] = None) -> LadderReport:
    """Heights of the ladder through the first recollement atom of ``fb``."""
    recs = fb.recollements
    if not recs:
        raise FactError("fact base has no recollement atom")
    root = recs[0]
    exhausted = bool(derivation and derivation.exhausted)

    def height(chain, period):
        if period is not None:
            return Height(len(chain), True, period)
        return Height(len(chain), at_least=exhausted)

    down, pd = _walk(fb, root, "ladder_down")
    up, pu = _walk(fb, root, "ladder_up")
    q, i, p, l, e, r = root
    wd = [(q, l), (i, e), (p, r)]
    for k, rec in enumerate(down[1:], start=1):
        wd.append((rec[5], rec[2]) if k % 2 else (rec[2], rec[5]))
    wu = [(p, r), (i, e), (q, l)]
    for k, rec in enumerate(up[1:], start=1):
        wu.append((rec[3], rec[0]) if k % 2 else (rec[0], rec[3]))
    report = LadderReport(root, height(down, pd), height(up, pu), tuple(down), tuple(up), tuple(wd), tuple(wu))
    return LadderReport(
        root, report.height_down, report.height_up, report.chain_down, report.chain_up,
        report.witness_down, report.witness_up,
        ttf_sequence(report, fb, "down"), ttf_sequence(report, fb, "up"),
    )


def _image(fb: FactBase, f: str) -> str:
    return f"{f}({fb.signature(f)[0]})"


def ttf_sequence(report: LadderReport, fb: FactBase, direction: str = "down") -> TTFSequence:
    """Subcategories X_1, X_2, ... of T whose consecutive triples are TTF-triples.

    Downwards this is l(V), i(U), r(V), p1(U), r2(V), ...; upwards it is
    ..., l2(V), q1(U), l(V), i(U), r(V).  A finite ladder of height h gives
    h + 2 terms; a periodic one gives one period plus the two wrapped terms.
    """
    q, i, p, l, e, r = report.root
    if direction == "down":
        chain, h = report.chain_down, report.height_down
        terms = [_image(fb, l), _image(fb, i), _image(fb, r)]
        terms += [_image(fb, rec[5]) for rec in chain[1:]]
    elif direction == "up":
        chain, h = report.chain_up, report.height_up
        terms = [_image(fb, r), _image(fb, i), _image(fb, l)]
        terms += [_image(fb, rec[3]) for rec in chain[1:]]
        terms.reverse()
    else:
        raise ValueError("direction must be 'down' or 'up'")
    triples = tuple((k, k + 1, k + 2) for k in range(len(terms) - 2))
    return TTFSequence(tuple(terms), triples, wraps=h.infinite)


# ---------------------------------------------------------------------------
# builtin fact bases


def _bare(*flags_i: str, cg: bool = False) -> FactBase:
    cat = ("compactly_generated",) if cg else ()
    fb = FactBase()
    for c in ("U", "T", "V"):
        fb = fb.declare_category(c, *cat)
    for name, d, c in (("q", "T", "U"), ("i", "U", "T"), ("p", "T", "U"),
                       ("l", "V", "T"), ("e", "T", "V"), ("r", "V", "T")):
        fb = fb.declare_functor(name, d, c)
    fb = fb.add("recollement(q,i,p;l,e,r)")
    for fl in flags_i:
        fb = fb.add(atom(fl, "i"))
    return fb


def preprojective_facts() -> FactBase:
    """Derived categories of Gamma, Pi_n(Lambda, Q) and Lambda with T1, T2, U1, U2 and i."""
    fb = FactBase()
    for c in ("DGamma", "DPi", "DLam"):
        fb = fb.declare_category(c, "compactly_generated")
    fb = fb.declare_functor("i", "DGamma", "DPi", "fully_faithful")
    for t in ("T1", "T2"):
        fb = fb.declare_functor(t, "DLam", "DPi", "exact_abelian_origin")
    for u in ("U1", "U2"):
        fb = fb.declare_functor(u, "DPi", "DLam", "exact_abelian_origin")
    for f, g in (("T1", "U1"), ("U1", "T2"), ("T2", "U2"), ("U2", "T1")):
        fb = fb.add(atom("abelian_adjoint", f, g))
    return fb.add("exact_sequence(i,U1)")


BUILTINS = {
    "preprojective": preprojective_facts,
    "bare": lambda: _bare(),
    "compact-i": lambda: _bare("preserves_compacts", cg=True),
    "compact-e": lambda: _bare(cg=True).add("preserves_compacts(e)"),
}


def builtin_facts(name: str) -> FactBase:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise FactError(f"unknown builtin fact base {name!r}; choose from {sorted(BUILTINS)}") from None
