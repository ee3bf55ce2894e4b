"""Staged three-valued evaluation: the interpretation triple (iota, j, j').

A formula/term is evaluated against an environment living inside a finite
stage n (the universe V_n).  Undefinedness (U) is a first-class value, never
an exception; exceptions are reserved for ill-formed environments and
resource budgets.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

from . import hf
from . import syntax as syn
from .errors import BudgetError, EnvError, StageOrderError


class Truth3(enum.Enum):
    TOP = "top"
    BOT = "bot"
    UNDEF = "undef"

    def __repr__(self):
        return f"Truth3.{self.name}"


TOP, BOT, UNDEF3 = Truth3.TOP, Truth3.BOT, Truth3.UNDEF


class _Undef:
    """The undefined denotation U (for terms)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "U"


class _UndefPrime:
    """The marked undefined U', produced only by meta-evaluation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "U'"


UNDEF = _Undef()
U_PRIME = _UndefPrime()


@dataclass(frozen=True)
class Environment:
    stage: int
    set_vals: dict = field(default_factory=dict)
    ord_vals: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.stage < 0:
            raise EnvError("stage must be a natural number")
        for name, v in self.set_vals.items():
            if not syn.is_set_name(name):
                raise EnvError(f"{name!r} is not a set variable name")
            if not isinstance(v, hf.HFSet):
                raise EnvError(f"set variable {name!r} bound to non-HFSet {v!r}")
            if v.rank >= self.stage:
                raise EnvError(
                    f"set variable {name!r} has rank {v.rank}, out of stage {self.stage}")
        for name, k in self.ord_vals.items():
            if syn.is_set_name(name):
                raise EnvError(f"{name!r} is not an ordinal variable name")
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise EnvError(f"ordinal variable {name!r} bound to {k!r}")
            if k >= self.stage:
                raise EnvError(
                    f"ordinal variable {name!r} = {k} out of stage {self.stage}")

    def at_stage(self, n: int) -> "Environment":
        return Environment(n, self.set_vals, self.ord_vals)

    def min_stage(self) -> int:
        """The least stage this environment fits into."""
        m = 0
        for v in self.set_vals.values():
            m = max(m, v.rank + 1)
        for k in self.ord_vals.values():
            m = max(m, k + 1)
        return m


@functools.lru_cache(maxsize=None)
def _free(node):
    s, o = syn.free_vars(node)
    return s, o


class _Eval:
    """One evaluation run at a fixed stage, with memoization.

    Memo keys restrict the environment to the node's free variables, so
    quantifier re-binding shares work across sibling instances.
    """

    def __init__(self, stage: int):
        self.stage = stage
        self.memo: dict = {}

    # -- dispatch ----------------------------------------------------------

    def formula(self, p, sv, ov) -> Truth3:
        key = self._key(p, sv, ov)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._formula(p, sv, ov)
            self.memo[key] = hit
        return hit

    def ord_term(self, a, sv, ov):
        key = self._key(a, sv, ov)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._ord_term(a, sv, ov)
            self.memo[key] = hit
        return hit

    def set_term(self, x, sv, ov):
        key = self._key(x, sv, ov)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._set_term(x, sv, ov)
            self.memo[key] = hit
        return hit

    def _key(self, node, sv, ov):
        fs, fo = _free(node)
        return (node,
                tuple(sorted((n, sv[n].code) for n in fs)),
                tuple(sorted((n, ov[n]) for n in fo)))

    # -- any term, as an HF set (ordinals via von Neumann injection) -------

    def term_as_set(self, t, sv, ov):
        if syn.is_ord_term(t):
            k = self.ord_term(t, sv, ov)
            return UNDEF if k is UNDEF else hf.HFSet.von_neumann(k)
        return self.set_term(t, sv, ov)

    # -- formulas (iota) ---------------------------------------------------

    def _formula(self, p, sv, ov) -> Truth3:
        if isinstance(p, syn.Mem):
            a = self.term_as_set(p.lhs, sv, ov)
            b = self.term_as_set(p.rhs, sv, ov)
            if a is UNDEF or b is UNDEF:
                return UNDEF3
            return TOP if a in b else BOT
        if isinstance(p, syn.Eq):
            a = self.term_as_set(p.lhs, sv, ov)
            b = self.term_as_set(p.rhs, sv, ov)
            if a is UNDEF or b is UNDEF:
                return UNDEF3
            return TOP if a == b else BOT
        if isinstance(p, syn.Defined):
            t = p.term
            if syn.is_ord_term(t):
                d = self.ord_term(t, sv, ov)
            else:
                d = self.set_term(t, sv, ov)
            # never BOT: an undefined term yields U, a defined one TOP
            return UNDEF3 if d is UNDEF else TOP
        if isinstance(p, syn.Not):
            v = self.formula(p.body, sv, ov)
            if v is TOP:
                return BOT
            if v is BOT:
                return TOP
            return UNDEF3
        if isinstance(p, syn.And):
            a = self.formula(p.lhs, sv, ov)
            if a is BOT:
                return BOT
            b = self.formula(p.rhs, sv, ov)
            if b is BOT:
                return BOT
            if a is TOP and b is TOP:
                return TOP
            return UNDEF3
        if isinstance(p, syn.Or):
            a = self.formula(p.lhs, sv, ov)
            if a is TOP:
                return TOP
            b = self.formula(p.rhs, sv, ov)
            if b is TOP:
                return TOP
            if a is BOT and b is BOT:
                return BOT
            return UNDEF3
        if isinstance(p, (syn.ForallSet, syn.ExistsSet)):
            dom = self.term_as_set(p.bound, sv, ov)
            if dom is UNDEF:
                return UNDEF3
            insts = [self.formula(p.body, {**sv, p.var: x}, ov) for x in dom]
            return self._combine_forall(insts, forall=isinstance(p, syn.ForallSet))
        if isinstance(p, (syn.ForallOrd, syn.ExistsOrd)):
            b = self.ord_term(p.bound, sv, ov)
            if b is UNDEF:
                return UNDEF3
            insts = [self.formula(p.body, sv, {**ov, p.var: k}) for k in range(b)]
            return self._combine_forall(insts, forall=isinstance(p, syn.ForallOrd))
        raise TypeError(f"not a formula: {p!r}")

    @staticmethod
    def _combine_forall(insts, forall: bool) -> Truth3:
        # forall: bot beats undef beats top; exists is the de Morgan dual
        kill, keep = (BOT, TOP) if forall else (TOP, BOT)
        if any(v is kill for v in insts):
            return kill
        if any(v is UNDEF3 for v in insts):
            return UNDEF3
        return keep

    # -- ordinal terms (j) -------------------------------------------------

    def _ord_term(self, a, sv, ov):
        if isinstance(a, syn.OrdVar):
            if a.name not in ov:
                raise EnvError(f"unbound ordinal variable {a.name!r}")
            return ov[a.name]
        if isinstance(a, syn.MinSuch):
            # alpha qualifies iff P(alpha) = top and P(beta) = bot for ALL
            # beta < alpha; U strictly above the witness is harmless, U
            # anywhere below a candidate disqualifies it.
            all_bot_below = True
            for alpha in range(self.stage):
                v = self.formula(a.pred, sv, {**ov, a.var: alpha})
                if v is TOP and all_bot_below:
                    return alpha
                if v is not BOT:
                    all_bot_below = False
            return UNDEF
        raise TypeError(f"not an ordinal term: {a!r}")

    # -- set terms (j') ----------------------------------------------------

    def _set_term(self, x, sv, ov):
        if isinstance(x, syn.SetVar):
            if x.name not in sv:
                raise EnvError(f"unbound set variable {x.name!r}")
            return sv[x.name]
        if isinstance(x, syn.Sep):
            dom = self.term_as_set(x.bound, sv, ov)
            if dom is UNDEF:
                return UNDEF
            kept = []
            undef = False
            for e in dom:
                v = self.formula(x.pred, {**sv, x.var: e}, ov)
                if v is UNDEF3:
                    undef = True  # keep going: memo still warms up
                elif v is TOP:
                    kept.append(e)
            return UNDEF if undef else hf.HFSet.from_elements(kept)
        if isinstance(x, syn.LStage):
            k = self.ord_term(x.index, sv, ov)
            if k is UNDEF:
                return UNDEF
            # V_k is an element of the stage universe iff its rank k is < n
            if k >= self.stage:
                return UNDEF
            if k > hf.MAX_ENUM_STAGE:
                raise BudgetError(f"stage term L_{k} exceeds enumeration budget")
            return hf.stage_set(k)
        if isinstance(x, syn.FixInfty):
            from . import nmid
            return nmid.eval_fix(x, Environment(self.stage, dict(sv), dict(ov)))
        raise TypeError(f"not a set term: {x!r}")


def _checked(ast, env: Environment):
    fs, fo = _free(ast)
    missing = (fs - env.set_vals.keys()) | (fo - env.ord_vals.keys())
    if missing:
        raise EnvError(f"unbound variables: {sorted(missing)}")
    return _Eval(env.stage)


def eval_formula(p, env: Environment) -> Truth3:
    return _checked(p, env).formula(p, env.set_vals, env.ord_vals)


def eval_ord(a, env: Environment):
    """j: the denoted natural (< stage), or UNDEF."""
    return _checked(a, env).ord_term(a, env.set_vals, env.ord_vals)


def eval_set(x, env: Environment):
    """j': the denoted HFSet, or UNDEF."""
    return _checked(x, env).set_term(x, env.set_vals, env.ord_vals)


def eval_term(t, env: Environment):
    return eval_ord(t, env) if syn.is_ord_term(t) else eval_set(t, env)


def eval_meta(p, env: Environment, inner_stage: int, outer_stage: int):
    """Evaluation of the inner stage as seen from a strictly larger stage.

    Total: returns a Truth3 that is never plain UNDEF; undefinedness at the
    inner stage surfaces as the marked U'.
    """
    if not inner_stage < outer_stage:
        raise StageOrderError(
            f"inner stage {inner_stage} must be below outer stage {outer_stage}")
    if env.min_stage() > inner_stage:
        raise EnvError(f"environment does not fit inside stage {inner_stage}")
    v = eval_formula(p, env.at_stage(inner_stage))
    return U_PRIME if v is UNDEF3 else v


def eval_selfmeta(p, env: Environment) -> Truth3:
    """Independent second evaluator: search for the least stage m <= n at
    which meta-evaluation stabilizes (is not U'), and return that verdict.
    Agrees with eval_formula by monotonicity of the staged semantics."""
    n = env.stage
    for m in range(env.min_stage(), n):
        v = eval_meta(p, env, m, n + 1)
        if v is not U_PRIME:
            return v
    return eval_formula(p, env)


def truth_to_json(v: Truth3) -> str:
    return v.value


def denotation_to_json(d):
    if d is UNDEF:
        return "undef"
    if isinstance(d, hf.HFSet):
        return d.to_json()
    return d
