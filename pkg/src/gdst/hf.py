"""Hereditarily finite sets: the finite stages of the cumulative hierarchy.

An HFSet is identified by its Ackermann code (code(x) = sum of 2^code(y)
over y in x), which makes extensional equality, canonical ordering and the
stage bijection trivial: x has rank < n iff code(x) < |V_n|.
"""

from __future__ import annotations

import functools
import json

from .errors import BudgetError

# Full enumeration of V_n is only feasible up to here (|V_5| = 65536).
MAX_ENUM_STAGE = 5

DEFAULT_DECODE_BITS = 1 << 20


class HFSet:
    __slots__ = ("code",)

    def __init__(self, code: int):
        if code < 0:
            raise ValueError("Ackermann codes are non-negative")
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("HFSet is immutable")

    def __eq__(self, other):
        return isinstance(other, HFSet) and self.code == other.code

    def __hash__(self):
        return hash(("HFSet", self.code))

    def __lt__(self, other):
        # canonical total order = Ackermann code order
        return self.code < other.code

    @property
    def elements(self) -> tuple["HFSet", ...]:
        return tuple(HFSet(c) for c in _element_codes(self.code))

    def __contains__(self, other: "HFSet") -> bool:
        return bool(self.code >> other.code & 1) if other.code < self.code.bit_length() else False

    def __len__(self):
        return len(_element_codes(self.code))

    def __iter__(self):
        return iter(self.elements)

    def issubset(self, other: "HFSet") -> bool:
        return self.code | other.code == other.code

    @property
    def rank(self) -> int:
        return _rank(self.code)

    def is_von_neumann_ordinal(self):
        """The natural k if this set is the von Neumann ordinal k, else None."""
        k = len(self)
        return k if self.code == _vn_code(k) else None

    def to_braces(self) -> str:
        return _braces(self.code)

    def to_json(self):
        return [e.to_json() for e in self.elements]

    def __repr__(self):
        return f"HFSet({self.to_braces()})"

    @staticmethod
    def from_elements(elems) -> "HFSet":
        code = 0
        for e in elems:
            code |= 1 << e.code
        return HFSet(code)

    @staticmethod
    def von_neumann(k: int) -> "HFSet":
        return HFSet(_vn_code(k))

    @staticmethod
    def from_braces(text: str) -> "HFSet":
        s, rest = _parse_braces(text.strip(), 0)
        if rest != len(text.strip()):
            raise ValueError(f"trailing characters in HF set literal: {text!r}")
        return s

    @staticmethod
    def from_json(data) -> "HFSet":
        if not isinstance(data, list):
            raise ValueError("HF set JSON form is a nested array")
        return HFSet.from_elements(HFSet.from_json(d) for d in data)


EMPTY = HFSet(0)


@functools.lru_cache(maxsize=None)
def _element_codes(code: int) -> tuple[int, ...]:
    out = []
    i = 0
    while code:
        if code & 1:
            out.append(i)
        code >>= 1
        i += 1
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _rank(code: int) -> int:
    if code == 0:
        return 0
    return 1 + max(_rank(c) for c in _element_codes(code))


@functools.lru_cache(maxsize=None)
def _vn_code(k: int) -> int:
    if k == 0:
        return 0
    prev = _vn_code(k - 1)
    return prev | (1 << prev)


@functools.lru_cache(maxsize=None)
def _braces(code: int) -> str:
    return "{" + ",".join(_braces(c) for c in _element_codes(code)) + "}"


def _parse_braces(text: str, i: int):
    if i >= len(text) or text[i] != "{":
        raise ValueError(f"expected '{{' at position {i} in HF set literal")
    i += 1
    elems = []
    while True:
        if i >= len(text):
            raise ValueError("unterminated HF set literal")
        if text[i] == "}":
            return HFSet.from_elements(elems), i + 1
        if elems:
            if text[i] != ",":
                raise ValueError(f"expected ',' at position {i} in HF set literal")
            i += 1
        e, i = _parse_braces(text, i)
        elems.append(e)


def ackermann_code(x: HFSet) -> int:
    return x.code


def ackermann_decode(n: int, max_bits: int = DEFAULT_DECODE_BITS) -> HFSet:
    if n.bit_length() > max_bits:
        raise BudgetError(f"code needs {n.bit_length()} bits, budget is {max_bits}")
    return HFSet(n)


def stage_size(n: int) -> int:
    """|V_n|.  V_0 is empty; |V_{k+1}| = 2^|V_k|."""
    s = 0
    for _ in range(n):
        s = 1 << s
    return s


def stage_elements(n: int) -> list[HFSet]:
    """All sets of rank < n, in canonical (Ackermann code) order."""
    if n > MAX_ENUM_STAGE:
        raise BudgetError(f"stage {n} exceeds enumeration budget {MAX_ENUM_STAGE}")
    return [HFSet(c) for c in range(stage_size(n))]


def stage_set(n: int) -> HFSet:
    """V_n itself as an HFSet (rank n)."""
    if n > MAX_ENUM_STAGE:
        raise BudgetError(f"stage {n} exceeds enumeration budget {MAX_ENUM_STAGE}")
    return HFSet.from_elements(stage_elements(n))


def is_von_neumann_ordinal(x: HFSet):
    return x.is_von_neumann_ordinal()


# ---------------------------------------------------------------------------
# Bounded-quantifier formulas of plain set theory, evaluated directly over
# HF sets.  Used by the definable-subsets oracle and the KP axiom checker.
# The AST lives in syntax.py; evaluation is semantic and belongs here.
# ---------------------------------------------------------------------------

def eval_st(phi, env: dict, universe: list[HFSet] | None = None) -> bool:
    """Classical two-valued evaluation of an ST formula.

    env maps variable names to HFSet.  Unrestricted quantifiers range over
    `universe` and are rejected when it is None (i.e. Delta0-only mode).
    """
    from . import syntax as syn

    if isinstance(phi, syn.STMem):
        return env[phi.lhs] in env[phi.rhs]
    if isinstance(phi, syn.STEq):
        return env[phi.lhs] == env[phi.rhs]
    if isinstance(phi, syn.STNot):
        return not eval_st(phi.body, env, universe)
    if isinstance(phi, syn.STAnd):
        return eval_st(phi.lhs, env, universe) and eval_st(phi.rhs, env, universe)
    if isinstance(phi, syn.STOr):
        return eval_st(phi.lhs, env, universe) or eval_st(phi.rhs, env, universe)
    if isinstance(phi, syn.STForall):
        dom = _st_domain(phi, env, universe)
        return all(eval_st(phi.body, {**env, phi.var: v}, universe) for v in dom)
    if isinstance(phi, syn.STExists):
        dom = _st_domain(phi, env, universe)
        return any(eval_st(phi.body, {**env, phi.var: v}, universe) for v in dom)
    raise TypeError(f"not an ST formula: {phi!r}")


def _st_domain(phi, env, universe):
    if phi.bound is None:
        if universe is None:
            raise ValueError("unrestricted quantifier in Delta0-only evaluation")
        return universe
    return env[phi.bound].elements


def _st_tables(n: int, var_names: list[str], budget: int):
    """Bottom-up enumeration of Delta0(ST) formulas over the given variables,
    deduplicated by their truth table over all V_n assignments.

    Returns {table: smallest formula}.  `budget` caps the number of
    non-variable AST nodes.  Observational dedup is sound here because the
    formulas are only ever used for their extension over V_n.
    """
    from . import syntax as syn

    dom = stage_elements(n)
    envs = [dict(zip(var_names, vals)) for vals in _product(dom, len(var_names))]

    def table(phi):
        return tuple(eval_st(phi, e) for e in envs)

    by_size: dict[int, list] = {}
    seen: dict[tuple, object] = {}

    def add(size, phi):
        t = table(phi)
        if t not in seen:
            seen[t] = phi
            by_size.setdefault(size, []).append((phi, t))

    for a in var_names:
        for b in var_names:
            if 1 <= budget:
                add(1, syn.STMem(a, b))
                add(1, syn.STEq(a, b))
    for size in range(2, budget + 1):
        for sub, t in list(by_size.get(size - 1, [])):
            add(size, syn.STNot(sub))
        for s1 in range(1, size - 1):
            for p1, _ in list(by_size.get(s1, [])):
                for p2, _ in list(by_size.get(size - 1 - s1, [])):
                    add(size, syn.STAnd(p1, p2))
                    add(size, syn.STOr(p1, p2))
        # bounded quantifiers over an existing variable, body reuses the pool
        fresh = _fresh_name(var_names)
        for sub, _ in list(_st_tables_with_extra(n, var_names, fresh, size - 1, envs)):
            for b in var_names:
                add(size, syn.STForall(fresh, b, sub))
                add(size, syn.STExists(fresh, b, sub))
    return seen


@functools.lru_cache(maxsize=32)
def _st_quant_bodies(n: int, names: tuple, fresh: str, budget: int):
    from . import syntax as syn

    dom = stage_elements(n)
    all_names = list(names) + [fresh]
    envs = [dict(zip(all_names, vals)) for vals in _product(dom, len(all_names))]

    def table(phi):
        return tuple(eval_st(phi, e) for e in envs)

    seen = {}
    by_size = {}

    def add(size, phi):
        t = table(phi)
        if t not in seen:
            seen[t] = phi
            by_size.setdefault(size, []).append(phi)

    for a in all_names:
        for b in all_names:
            add(1, syn.STMem(a, b))
            add(1, syn.STEq(a, b))
    for size in range(2, budget + 1):
        for sub in list(by_size.get(size - 1, [])):
            add(size, syn.STNot(sub))
        for s1 in range(1, size - 1):
            for p1 in list(by_size.get(s1, [])):
                for p2 in list(by_size.get(size - 1 - s1, [])):
                    add(size, syn.STAnd(p1, p2))
                    add(size, syn.STOr(p1, p2))
    out = []
    for size, phis in sorted(by_size.items()):
        for p in phis:
            out.append((p, size))
    return tuple(out)


def _st_tables_with_extra(n, var_names, fresh, budget, _envs):
    for phi, size in _st_quant_bodies(n, tuple(var_names), fresh, budget):
        if size <= budget:
            yield phi, size


def _fresh_name(names):
    i = 0
    while f"q{i}" in names:
        i += 1
    return f"q{i}"


def _product(dom, k):
    if k == 0:
        yield ()
        return
    for rest in _product(dom, k - 1):
        for v in dom:
            yield rest + (v,)


def delta0_predicates(n: int, free_vars: list[str], budget: int):
    """Representatives of every Delta0(ST) predicate over V_n with the given
    free variables and at most `budget` operator nodes, one per extension."""
    return list(_st_tables(n, free_vars, budget).values())


def definable_subsets(n: int, budget: int) -> list[HFSet]:
    """Subsets of V_n cut out by Delta0(ST) predicates with parameters.

    Enumerates predicates P(y, z1..zk) up to the operator-node budget and all
    parameter tuples from V_n.  With parameters every subset of a finite set
    is definable once the budget admits disjunctions of equalities; this is
    the oracle justifying L_{n+1} = powerset(V_n) at finite index.
    """
    if n > 3:
        raise BudgetError("definable-subsets oracle runs at n <= 3")
    dom = stage_elements(n)
    found: set[int] = set()
    # up to 3 parameters is enough to exhaust the powerset at these scales
    for nparams in range(0, min(3, len(dom)) + 1):
        names = ["y"] + [f"z{i}" for i in range(nparams)]
        preds = delta0_predicates(n, names, budget)
        for pred in preds:
            for params in _product(dom, nparams):
                base = dict(zip(names[1:], params))
                code = 0
                for y in dom:
                    if eval_st(pred, {**base, "y": y}):
                        code |= 1 << y.code
                found.add(code)
    return [HFSet(c) for c in sorted(found)]


def powerset_codes(n: int) -> set[int]:
    return set(range(1 << stage_size(n)))


def hfset_to_jsonstr(x: HFSet) -> str:
    return json.dumps(x.to_json())
