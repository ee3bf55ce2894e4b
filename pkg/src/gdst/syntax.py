"""AST, s-expression parser/printer, sugar expansion and structural metrics.

Two-sorted term language: set terms and ordinal terms, with disjoint
variable namespaces decided by the first letter of the name (w/x/y/z =
set variable, anything else alphabetic = ordinal variable).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DialectError, ParseError

SET_VAR_INITIALS = "wxyz"


def is_set_name(name: str) -> bool:
    return name[0] in SET_VAR_INITIALS


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class SetVar:
    name: str


@dataclass(frozen=True)
class OrdVar:
    name: str


@dataclass(frozen=True)
class Sep:
    """{var in bound : pred}"""
    var: str
    bound: "Term"
    pred: "Formula"


@dataclass(frozen=True)
class LStage:
    index: "OrdTerm"


@dataclass(frozen=True)
class MinSuch:
    """min {var : pred} -- the least ordinal satisfying pred."""
    var: str
    pred: "Formula"


@dataclass(frozen=True)
class FixInfty:
    """Transfinite iteration-to-fixpoint of an inflationary set operator.

    `var` is the operator's set variable in `body`; `seed` is the start set.
    Only admitted in the inductive-definition dialect.
    """
    var: str
    body: "Term"
    seed: "Term"


# --- formulas --------------------------------------------------------------

@dataclass(frozen=True)
class Mem:
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Eq:
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Defined:
    term: "Term"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    var: str
    bound: "Term"
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    var: str
    bound: "Term"
    body: "Formula"


@dataclass(frozen=True)
class ForallOrd:
    var: str
    bound: "OrdTerm"
    body: "Formula"


@dataclass(frozen=True)
class ExistsOrd:
    var: str
    bound: "OrdTerm"
    body: "Formula"


OrdTerm = OrdVar | MinSuch
SetTerm = SetVar | Sep | LStage | FixInfty
Term = OrdTerm | SetTerm
Formula = Mem | Eq | Defined | And | Or | Not | ForallSet | ExistsSet | ForallOrd | ExistsOrd

_QUANTS = {ForallSet: "forall-set", ExistsSet: "exists-set",
           ForallOrd: "forall-ord", ExistsOrd: "exists-ord"}


def is_formula(ast) -> bool:
    return isinstance(ast, Formula)


def is_ord_term(ast) -> bool:
    return isinstance(ast, OrdTerm)


def is_set_term(ast) -> bool:
    return isinstance(ast, SetTerm)


# --- tokenizer / reader ----------------------------------------------------

def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            toks.append((c, i))
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            toks.append((text[i:j], i))
            i = j
    return toks


def _read_sexp(toks, pos):
    if pos >= len(toks):
        raise ParseError("unexpected end of input", toks[-1][1] + 1 if toks else 0)
    tok, off = toks[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(toks):
                raise ParseError("unbalanced '('", off)
            if toks[pos][0] == ")":
                return (items, off), pos + 1
            item, pos = _read_sexp(toks, pos)
            items.append(item)
    if tok == ")":
        raise ParseError("unexpected ')'", off)
    return (tok, off), pos


# --- sexp -> AST -----------------------------------------------------------

_ARITY = {"mem": 2, "eq": 2, "def": 1, "and": 2, "or": 2, "not": 1,
          "forall-set": 3, "exists-set": 3, "forall-ord": 3, "exists-ord": 3,
          "sep": 3, "L": 1, "min": 2, "fix": 3,
          "imp": 2, "iff": 2, "down": 1, "lt": 2, "succ": 1, "nat": 1}


def parse(text: str, dialect: str = "gdst", sugar: bool = False):
    """Parse one expression.  dialect 'gdst' admits min but not fix;
    dialect 'nmid' admits fix but not min."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty input", 0)
    sexp, pos = _read_sexp(toks, 0)
    if pos != len(toks):
        raise ParseError("trailing input after expression", toks[pos][1])
    ast = _build(sexp, dialect, sugar)
    return alpha_normalize(ast)


def parse_corpus(text: str, dialect: str = "gdst", sugar: bool = True):
    """Parse a newline-separated corpus; blank lines and ; comments skipped."""
    out = []
    for line in text.splitlines():
        stripped = line.split(";")[0].strip()
        if stripped:
            out.append(parse(stripped, dialect, sugar))
    return out


def desugar(text: str, dialect: str = "gdst"):
    """Parse with shorthand enabled; the result uses core constructors only."""
    return parse(text, dialect, sugar=True)


def _build(sexp, dialect, sugar):
    node, off = sexp
    if isinstance(node, str):
        if not node.replace("_", "").replace("-", "").isalnum() or node[0].isdigit():
            raise ParseError(f"bad atom {node!r}", off)
        return SetVar(node) if is_set_name(node) else OrdVar(node)
    if not node:
        raise ParseError("empty list", off)
    head_node, head_off = node[0]
    if not isinstance(head_node, str):
        raise ParseError("head must be a symbol", head_off)
    head = head_node
    args = node[1:]
    if head not in _ARITY:
        raise ParseError(f"unknown head {head!r}", head_off)
    if head in ("imp", "iff", "down", "lt", "succ", "nat") and not sugar:
        raise ParseError(f"shorthand head {head!r} not allowed here", head_off)
    if len(args) != _ARITY[head]:
        raise ParseError(f"{head} takes {_ARITY[head]} arguments", off)

    def fof(a):  # formula operand
        x = _build(a, dialect, sugar)
        if not is_formula(x):
            raise ParseError("expected a formula", a[1])
        return x

    def tof(a):  # term operand
        x = _build(a, dialect, sugar)
        if is_formula(x):
            raise ParseError("expected a term", a[1])
        return x

    def oof(a):  # ordinal term operand
        x = _build(a, dialect, sugar)
        if not is_ord_term(x):
            raise ParseError("expected an ordinal term", a[1])
        return x

    def binder(a, want_set):
        name_node, name_off = a
        if not isinstance(name_node, str):
            raise ParseError("binder variable must be a symbol", name_off)
        if is_set_name(name_node) != want_set:
            kind = "set" if want_set else "ordinal"
            raise ParseError(f"{name_node!r} is not a {kind} variable name", name_off)
        return name_node

    if head == "mem":
        return Mem(tof(args[0]), tof(args[1]))
    if head == "eq":
        return Eq(tof(args[0]), tof(args[1]))
    if head == "def":
        return Defined(tof(args[0]))
    if head == "and":
        return And(fof(args[0]), fof(args[1]))
    if head == "or":
        return Or(fof(args[0]), fof(args[1]))
    if head == "not":
        return Not(fof(args[0]))
    if head in ("forall-set", "exists-set"):
        cls = ForallSet if head == "forall-set" else ExistsSet
        return cls(binder(args[0], True), tof(args[1]), fof(args[2]))
    if head in ("forall-ord", "exists-ord"):
        cls = ForallOrd if head == "forall-ord" else ExistsOrd
        return cls(binder(args[0], False), oof(args[1]), fof(args[2]))
    if head == "sep":
        return Sep(binder(args[0], True), tof(args[1]), fof(args[2]))
    if head == "L":
        return LStage(oof(args[0]))
    if head == "min":
        if dialect == "nmid":
            raise DialectError("min is not part of the inductive-definition dialect")
        return MinSuch(binder(args[0], False), fof(args[1]))
    if head == "fix":
        if dialect != "nmid":
            raise DialectError("fix requires the inductive-definition dialect")
        return FixInfty(binder(args[0], True), tof(args[1]), tof(args[2]))
    # sugar
    if head == "imp":
        return Or(Not(fof(args[0])), fof(args[1]))
    if head == "iff":
        p, q = fof(args[0]), fof(args[1])
        return And(Or(Not(p), q), Or(Not(q), p))
    if head == "down":
        p = fof(args[0])
        return Or(p, Not(p))
    if head == "lt":
        return Mem(oof(args[0]), oof(args[1]))
    if head == "succ":
        return succ(oof(args[0]))
    if head == "nat":
        lit, lit_off = args[0]
        if not (isinstance(lit, str) and lit.isdigit()):
            raise ParseError("nat takes a numeral", lit_off)
        return numeral(int(lit))
    raise AssertionError(head)


def succ(a: OrdTerm) -> OrdTerm:
    """A + 1 as min{b : A < b}, with a capture-free bound variable."""
    used = free_vars(a)[1] | bound_names(a)
    i = 0
    while f"b{i}" in used:
        i += 1
    return MinSuch(f"b{i}", Mem(a, OrdVar(f"b{i}")))


def numeral(k: int) -> OrdTerm:
    """The finite ordinal k: k-fold successor of min{a : a = a}."""
    t: OrdTerm = MinSuch("a", Eq(OrdVar("a"), OrdVar("a")))
    for _ in range(k):
        t = succ(t)
    return t


# --- printing --------------------------------------------------------------

def render(ast) -> str:
    if isinstance(ast, SetVar) or isinstance(ast, OrdVar):
        return ast.name
    if isinstance(ast, Mem):
        return f"(mem {render(ast.lhs)} {render(ast.rhs)})"
    if isinstance(ast, Eq):
        return f"(eq {render(ast.lhs)} {render(ast.rhs)})"
    if isinstance(ast, Defined):
        return f"(def {render(ast.term)})"
    if isinstance(ast, And):
        return f"(and {render(ast.lhs)} {render(ast.rhs)})"
    if isinstance(ast, Or):
        return f"(or {render(ast.lhs)} {render(ast.rhs)})"
    if isinstance(ast, Not):
        return f"(not {render(ast.body)})"
    if type(ast) in _QUANTS:
        return f"({_QUANTS[type(ast)]} {ast.var} {render(ast.bound)} {render(ast.body)})"
    if isinstance(ast, Sep):
        return f"(sep {ast.var} {render(ast.bound)} {render(ast.pred)})"
    if isinstance(ast, LStage):
        return f"(L {render(ast.index)})"
    if isinstance(ast, MinSuch):
        return f"(min {ast.var} {render(ast.pred)})"
    if isinstance(ast, FixInfty):
        return f"(fix {ast.var} {render(ast.body)} {render(ast.seed)})"
    raise TypeError(f"cannot render {ast!r}")


# --- structural traversal --------------------------------------------------

def _children(ast):
    if isinstance(ast, (SetVar, OrdVar)):
        return ()
    if isinstance(ast, (Mem, Eq, And, Or)):
        return (ast.lhs, ast.rhs)
    if isinstance(ast, (Defined,)):
        return (ast.term,)
    if isinstance(ast, Not):
        return (ast.body,)
    if type(ast) in _QUANTS:
        return (ast.bound, ast.body)
    if isinstance(ast, Sep):
        return (ast.bound, ast.pred)
    if isinstance(ast, LStage):
        return (ast.index,)
    if isinstance(ast, MinSuch):
        return (ast.pred,)
    if isinstance(ast, FixInfty):
        return (ast.body, ast.seed)
    raise TypeError(f"not an AST node: {ast!r}")


def node_count(ast) -> int:
    return 1 + sum(node_count(c) for c in _children(ast))


def op_count(ast) -> int:
    """Constructor applications only; variable leaves are free."""
    if isinstance(ast, (SetVar, OrdVar)):
        return 0
    return 1 + sum(op_count(c) for c in _children(ast))


def depth(ast, kind: str = "min") -> int:
    """Max nesting of a constructor class along any path.

    kind 'min' counts the least-ordinal constructor, 'fix' the fixpoint
    constructor, 'nodes' gives the total node count.
    """
    if kind == "nodes":
        return node_count(ast)
    target = MinSuch if kind == "min" else FixInfty
    here = 1 if isinstance(ast, target) else 0
    kids = _children(ast)
    return here + (max(depth(c, kind) for c in kids) if kids else 0)


def bound_names(ast) -> frozenset[str]:
    names = set()

    def walk(a):
        if hasattr(a, "var"):
            names.add(a.var)
        for c in _children(a):
            walk(c)

    walk(ast)
    return frozenset(names)


def free_vars(ast) -> tuple[frozenset[str], frozenset[str]]:
    """(free set variables, free ordinal variables)."""
    if isinstance(ast, SetVar):
        return frozenset((ast.name,)), frozenset()
    if isinstance(ast, OrdVar):
        return frozenset(), frozenset((ast.name,))
    if hasattr(ast, "var"):
        binder_is_set = isinstance(ast, (ForallSet, ExistsSet, Sep, FixInfty))
        if isinstance(ast, MinSuch):
            s, o = free_vars(ast.pred)
            return s, o - {ast.var}
        if isinstance(ast, Sep):
            bs, bo = free_vars(ast.bound)
            ps, po = free_vars(ast.pred)
            return bs | (ps - {ast.var}), bo | po
        if isinstance(ast, FixInfty):
            bs, bo = free_vars(ast.body)
            ss, so = free_vars(ast.seed)
            return (bs - {ast.var}) | ss, bo | so
        # quantifiers
        bs, bo = free_vars(ast.bound)
        ps, po = free_vars(ast.body)
        if binder_is_set:
            return bs | (ps - {ast.var}), bo | po
        return bs | ps, bo | (po - {ast.var})
    sets: frozenset[str] = frozenset()
    ords: frozenset[str] = frozenset()
    for c in _children(ast):
        s, o = free_vars(c)
        sets |= s
        ords |= o
    return sets, ords


def signature(ast) -> tuple[int, int]:
    """(M, N): counts of free set and free ordinal variables."""
    s, o = free_vars(ast)
    return len(s), len(o)


# --- alpha normalization ---------------------------------------------------

def _subst_var(ast, old: str, new: str):
    """Rename one free variable occurrence set; binders for `old` shield it."""
    if isinstance(ast, SetVar):
        return SetVar(new) if ast.name == old else ast
    if isinstance(ast, OrdVar):
        return OrdVar(new) if ast.name == old else ast
    if hasattr(ast, "var") and ast.var == old:
        if isinstance(ast, MinSuch):
            return ast
        if isinstance(ast, Sep):
            return Sep(ast.var, _subst_var(ast.bound, old, new), ast.pred)
        if isinstance(ast, FixInfty):
            return FixInfty(ast.var, ast.body, _subst_var(ast.seed, old, new))
        return type(ast)(ast.var, _subst_var(ast.bound, old, new), ast.body)
    if isinstance(ast, (Mem, Eq, And, Or)):
        return type(ast)(_subst_var(ast.lhs, old, new), _subst_var(ast.rhs, old, new))
    if isinstance(ast, Defined):
        return Defined(_subst_var(ast.term, old, new))
    if isinstance(ast, Not):
        return Not(_subst_var(ast.body, old, new))
    if type(ast) in _QUANTS:
        return type(ast)(ast.var, _subst_var(ast.bound, old, new), _subst_var(ast.body, old, new))
    if isinstance(ast, Sep):
        return Sep(ast.var, _subst_var(ast.bound, old, new), _subst_var(ast.pred, old, new))
    if isinstance(ast, LStage):
        return LStage(_subst_var(ast.index, old, new))
    if isinstance(ast, MinSuch):
        return MinSuch(ast.var, _subst_var(ast.pred, old, new))
    if isinstance(ast, FixInfty):
        return FixInfty(ast.var, _subst_var(ast.body, old, new), _subst_var(ast.seed, old, new))
    raise TypeError(f"not an AST node: {ast!r}")


def subst_term(ast, var: str, replacement):
    """Capture-avoiding substitution of a term for a free variable.

    Assumes `ast` is alpha-normalized so no binder in it shadows a free
    variable of the replacement; re-normalize first if unsure.
    """
    if isinstance(ast, (SetVar, OrdVar)):
        return replacement if ast.name == var else ast
    if hasattr(ast, "var") and ast.var == var:
        if isinstance(ast, MinSuch):
            return ast
        if isinstance(ast, Sep):
            return Sep(ast.var, subst_term(ast.bound, var, replacement), ast.pred)
        if isinstance(ast, FixInfty):
            return FixInfty(ast.var, ast.body, subst_term(ast.seed, var, replacement))
        return type(ast)(ast.var, subst_term(ast.bound, var, replacement), ast.body)
    rs, ro = free_vars(replacement) if not isinstance(replacement, (SetVar, OrdVar)) \
        else free_vars(replacement)
    if hasattr(ast, "var") and ast.var in (rs | ro):
        # rename the binder away from the replacement's free variables
        used = rs | ro | bound_names(ast) | free_vars(ast)[0] | free_vars(ast)[1]
        prefix = "x" if is_set_name(ast.var) else "a"
        i = 0
        while f"{prefix}r{i}" in used:
            i += 1
        fresh = f"{prefix}r{i}"
        ast = _rename_binder(ast, fresh)
    if isinstance(ast, (Mem, Eq, And, Or)):
        return type(ast)(subst_term(ast.lhs, var, replacement), subst_term(ast.rhs, var, replacement))
    if isinstance(ast, Defined):
        return Defined(subst_term(ast.term, var, replacement))
    if isinstance(ast, Not):
        return Not(subst_term(ast.body, var, replacement))
    if type(ast) in _QUANTS:
        return type(ast)(ast.var, subst_term(ast.bound, var, replacement),
                         subst_term(ast.body, var, replacement))
    if isinstance(ast, Sep):
        return Sep(ast.var, subst_term(ast.bound, var, replacement),
                   subst_term(ast.pred, var, replacement))
    if isinstance(ast, LStage):
        return LStage(subst_term(ast.index, var, replacement))
    if isinstance(ast, MinSuch):
        return MinSuch(ast.var, subst_term(ast.pred, var, replacement))
    if isinstance(ast, FixInfty):
        return FixInfty(ast.var, subst_term(ast.body, var, replacement),
                        subst_term(ast.seed, var, replacement))
    raise TypeError(f"not an AST node: {ast!r}")


def _rename_binder(ast, fresh):
    body_attr = "pred" if isinstance(ast, (Sep, MinSuch)) else "body"
    new_body = _subst_var(getattr(ast, body_attr), ast.var, fresh)
    if isinstance(ast, MinSuch):
        return MinSuch(fresh, new_body)
    if isinstance(ast, Sep):
        return Sep(fresh, ast.bound, new_body)
    if isinstance(ast, FixInfty):
        return FixInfty(fresh, new_body, ast.seed)
    return type(ast)(fresh, ast.bound, new_body)


def alpha_normalize(ast):
    """Canonically rename bound variables (set -> x0,x1..., ord -> a0,a1...,
    in traversal order), skipping names that occur free."""
    frees = free_vars(ast)[0] | free_vars(ast)[1]
    counters = {"set": 0, "ord": 0}

    def fresh(want_set):
        key = "set" if want_set else "ord"
        prefix = "x" if want_set else "a"
        while True:
            name = f"{prefix}{counters[key]}"
            counters[key] += 1
            if name not in frees:
                return name

    def walk(a, ren):
        if isinstance(a, SetVar):
            return SetVar(ren.get(a.name, a.name))
        if isinstance(a, OrdVar):
            return OrdVar(ren.get(a.name, a.name))
        if hasattr(a, "var"):
            want_set = isinstance(a, (ForallSet, ExistsSet, Sep, FixInfty))
            new = fresh(want_set)
            inner = {**ren, a.var: new}
            if isinstance(a, MinSuch):
                return MinSuch(new, walk(a.pred, inner))
            if isinstance(a, Sep):
                return Sep(new, walk(a.bound, ren), walk(a.pred, inner))
            if isinstance(a, FixInfty):
                return FixInfty(new, walk(a.body, inner), walk(a.seed, ren))
            return type(a)(new, walk(a.bound, ren), walk(a.body, inner))
        if isinstance(a, (Mem, Eq, And, Or)):
            return type(a)(walk(a.lhs, ren), walk(a.rhs, ren))
        if isinstance(a, Defined):
            return Defined(walk(a.term, ren))
        if isinstance(a, Not):
            return Not(walk(a.body, ren))
        if isinstance(a, LStage):
            return LStage(walk(a.index, ren))
        raise TypeError(f"not an AST node: {a!r}")

    return walk(ast, {})


def alpha_eq(a, b) -> bool:
    return alpha_normalize(a) == alpha_normalize(b)


# --- shorthand builders used across modules --------------------------------

def down(p: Formula) -> Formula:
    return Or(p, Not(p))


def imp(p: Formula, q: Formula) -> Formula:
    return Or(Not(p), q)


def iff(p: Formula, q: Formula) -> Formula:
    return And(imp(p, q), imp(q, p))


# ---------------------------------------------------------------------------
# Standard set theory (one-sorted, unrestricted quantifiers allowed): the
# input language of relativization and the KP checker.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class STMem:
    lhs: str
    rhs: str


@dataclass(frozen=True)
class STEq:
    lhs: str
    rhs: str


@dataclass(frozen=True)
class STAnd:
    lhs: "STFormula"
    rhs: "STFormula"


@dataclass(frozen=True)
class STOr:
    lhs: "STFormula"
    rhs: "STFormula"


@dataclass(frozen=True)
class STNot:
    body: "STFormula"


@dataclass(frozen=True)
class STForall:
    var: str
    bound: str | None  # None = unrestricted
    body: "STFormula"


@dataclass(frozen=True)
class STExists:
    var: str
    bound: str | None
    body: "STFormula"


STFormula = STMem | STEq | STAnd | STOr | STNot | STForall | STExists


def st_free_vars(phi) -> frozenset[str]:
    if isinstance(phi, (STMem, STEq)):
        return frozenset((phi.lhs, phi.rhs))
    if isinstance(phi, STNot):
        return st_free_vars(phi.body)
    if isinstance(phi, (STAnd, STOr)):
        return st_free_vars(phi.lhs) | st_free_vars(phi.rhs)
    bound = frozenset() if phi.bound is None else frozenset((phi.bound,))
    return bound | (st_free_vars(phi.body) - {phi.var})


def st_is_delta0(phi) -> bool:
    if isinstance(phi, (STMem, STEq)):
        return True
    if isinstance(phi, STNot):
        return st_is_delta0(phi.body)
    if isinstance(phi, (STAnd, STOr)):
        return st_is_delta0(phi.lhs) and st_is_delta0(phi.rhs)
    return phi.bound is not None and st_is_delta0(phi.body)


def parse_st(text: str) -> STFormula:
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty input", 0)
    sexp, pos = _read_sexp(toks, 0)
    if pos != len(toks):
        raise ParseError("trailing input after expression", toks[pos][1])
    return _build_st(sexp)


def _build_st(sexp) -> STFormula:
    node, off = sexp
    if isinstance(node, str):
        raise ParseError("ST formulas are compound", off)
    if not node:
        raise ParseError("empty list", off)
    head, head_off = node[0]
    args = node[1:]

    def var(a):
        v, voff = a
        if not isinstance(v, str):
            raise ParseError("expected a variable", voff)
        return v

    if head in ("mem", "eq"):
        if len(args) != 2:
            raise ParseError(f"{head} takes 2 arguments", off)
        cls = STMem if head == "mem" else STEq
        return cls(var(args[0]), var(args[1]))
    if head == "not":
        return STNot(_build_st(args[0]))
    if head in ("and", "or"):
        cls = STAnd if head == "and" else STOr
        return cls(_build_st(args[0]), _build_st(args[1]))
    if head in ("forall", "exists"):
        if len(args) != 2:
            raise ParseError(f"{head} takes 2 arguments", off)
        cls = STForall if head == "forall" else STExists
        return cls(var(args[0]), None, _build_st(args[1]))
    if head in ("forall-in", "exists-in"):
        if len(args) != 3:
            raise ParseError(f"{head} takes 3 arguments", off)
        cls = STForall if head == "forall-in" else STExists
        return cls(var(args[0]), var(args[1]), _build_st(args[2]))
    raise ParseError(f"unknown ST head {head!r}", head_off)


def relativize(phi: STFormula, bound_var: str = "xM") -> Formula:
    """Bound every unrestricted quantifier of an ST formula by a fresh set
    variable, yielding a bounded-quantifier formula P'(model): P holds of a
    transitive model iff P' does with the model bound to `bound_var`."""
    if not is_set_name(bound_var):
        raise ValueError("the model bound must be a set variable name")

    def conv(p) -> Formula:
        if isinstance(p, STMem):
            return Mem(SetVar(p.lhs), SetVar(p.rhs))
        if isinstance(p, STEq):
            return Eq(SetVar(p.lhs), SetVar(p.rhs))
        if isinstance(p, STNot):
            return Not(conv(p.body))
        if isinstance(p, STAnd):
            return And(conv(p.lhs), conv(p.rhs))
        if isinstance(p, STOr):
            return Or(conv(p.lhs), conv(p.rhs))
        if isinstance(p, (STForall, STExists)):
            cls = ForallSet if isinstance(p, STForall) else ExistsSet
            bound = SetVar(bound_var if p.bound is None else p.bound)
            return cls(p.var, bound, conv(p.body))
        raise TypeError(f"not an ST formula: {p!r}")

    clash = st_free_vars(phi)
    if bound_var in clash:
        raise ValueError(f"model bound {bound_var!r} occurs free in the formula")
    return alpha_normalize(conv(phi))
