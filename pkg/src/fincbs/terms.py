"""Terms over {0, join, difference}: parsing, normalization, decidable equality,
and free algebras.

Equality of two terms in every co-Brouwerian semilattice is decided
proof-theoretically: the order-reversed reading of a term is a formula of
the implication-conjunction-truth fragment of intuitionistic logic
(difference becomes implication with swapped arguments, join becomes
conjunction, 0 becomes truth), and s = t holds in every CBS exactly when
both implications between the two translations are provable.  Proof
search uses a terminating contraction-free sequent calculus for that
fragment, so no loop checking is needed.  A search over a catalog of
small algebras supplies explicit countermodels for inequalities when one
exists at that scale; it is a best-effort diagnostic, never the deciding
route.

Free algebras on up to two generators are built by closing the generators
under the two operations at the term level, with the prover collapsing
equal terms.  Their carriers are 1, 2 and 18 elements; three generators
already yield an algebra of order 6 * 10^14 and are out of reach.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .catalog import catalog_algebras, separating_algebras
from .cbs import FinCbs, validate_cbs
from .errors import (
    ArityTooLarge,
    FincbsError,
    IndexOutOfRange,
    ParseError,
    SizeLimitExceeded,
    UnboundVariable,
)


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Diff:
    left: "Term"
    right: "Term"


Term = Zero | Var | Join | Diff
ZERO = Zero()


def term_size(t: Term) -> int:
    if isinstance(t, (Zero, Var)):
        return 1
    return 1 + term_size(t.left) + term_size(t.right)


def term_vars(t: Term) -> set[int]:
    if isinstance(t, Zero):
        return set()
    if isinstance(t, Var):
        return {t.index}
    return term_vars(t.left) | term_vars(t.right)


# --- printing ----------------------------------------------------------------
# Grammar (CBS orientation): difference is lowest and left associative,
# join binds tighter:   term := term '-' atom | atom
#                       atom := primary ('v' primary)*
#                       primary := '0' | 'x'<digits> | '(' term ')'


def format_term(t: Term) -> str:
    return _fmt_term(t)


def _fmt_term(t: Term) -> str:
    if isinstance(t, Diff):
        return f"{_fmt_term(t.left)} - {_fmt_atom(t.right)}"
    return _fmt_atom(t)


def _fmt_atom(t: Term) -> str:
    if isinstance(t, Join):
        return f"{_fmt_atom(t.left)} v {_fmt_primary(t.right)}"
    return _fmt_primary(t)


def _fmt_primary(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Var):
        return f"x{t.index}"
    return f"({_fmt_term(t)})"


def format_term_brouwerian(t: Term) -> str:
    """Order-reversed syntax: 1 for 0, '^' for join, '->' for difference."""
    if isinstance(t, Diff):
        return f"{_fmt_bs_atom(t.right)} -> {format_term_brouwerian(t.left)}"
    return _fmt_bs_atom(t)


def _fmt_bs_atom(t: Term) -> str:
    if isinstance(t, Join):
        return f"{_fmt_bs_atom(t.left)} ^ {_fmt_bs_primary(t.right)}"
    return _fmt_bs_primary(t)


def _fmt_bs_primary(t: Term) -> str:
    if isinstance(t, Zero):
        return "1"
    if isinstance(t, Var):
        return f"x{t.index}"
    return f"({format_term_brouwerian(t)})"


# --- parsing -----------------------------------------------------------------


def _tokenize(text: str, symbols: dict[str, str]) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    n = len(text)
    keys = sorted(symbols, key=len, reverse=True)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(i, "digits after 'x'")
            toks.append(("var", text[i + 1 : j], i))
            i = j
            continue
        for key in keys:
            if text.startswith(key, i):
                toks.append((symbols[key], key, i))
                i += len(key)
                break
        else:
            raise ParseError(i, "a term symbol", c)
    return toks


_CBS_SYMBOLS = {"0": "zero", "v": "join", "-": "diff", "(": "lpar", ")": "rpar"}
_BS_SYMBOLS = {"1": "one", "^": "meet", "->": "impl", "(": "lpar", ")": "rpar"}


class _Cursor:
    def __init__(self, toks, length):
        self.toks = toks
        self.i = 0
        self.length = length

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][2] if self.i < len(self.toks) else self.length

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok


def parse_term(text: str) -> Term:
    """Parse the CBS syntax; difference left associative, join tighter."""
    cur = _Cursor(_tokenize(text, _CBS_SYMBOLS), len(text))
    t = _parse_cbs_term(cur)
    if cur.peek() is not None:
        raise ParseError(cur.pos(), "end of input", cur.take()[1])
    return t


def _parse_cbs_term(cur: _Cursor) -> Term:
    left = _parse_cbs_atom(cur)
    while cur.peek() == "diff":
        cur.take()
        left = Diff(left, _parse_cbs_atom(cur))
    return left


def _parse_cbs_atom(cur: _Cursor) -> Term:
    left = _parse_cbs_primary(cur)
    while cur.peek() == "join":
        cur.take()
        left = Join(left, _parse_cbs_primary(cur))
    return left


def _parse_cbs_primary(cur: _Cursor) -> Term:
    kind = cur.peek()
    if kind == "zero":
        cur.take()
        return ZERO
    if kind == "var":
        return Var(int(cur.take()[1]))
    if kind == "lpar":
        cur.take()
        t = _parse_cbs_term(cur)
        if cur.peek() != "rpar":
            raise ParseError(cur.pos(), "')'")
        cur.take()
        return t
    raise ParseError(cur.pos(), "a term")


def parse_term_brouwerian(text: str) -> Term:
    """Parse the order-reversed syntax and flip it into a CBS term.

    '->' is right associative and lowest; '^' binds tighter.  The flip is
    forced by order reversal: 1 -> 0, meet -> join, (a -> b) -> b - a.
    """
    cur = _Cursor(_tokenize(text, _BS_SYMBOLS), len(text))
    t = _parse_bs_term(cur)
    if cur.peek() is not None:
        raise ParseError(cur.pos(), "end of input", cur.take()[1])
    return t


def _parse_bs_term(cur: _Cursor) -> Term:
    left = _parse_bs_atom(cur)
    if cur.peek() == "impl":
        cur.take()
        rest = _parse_bs_term(cur)
        return Diff(rest, left)
    return left


def _parse_bs_atom(cur: _Cursor) -> Term:
    left = _parse_bs_primary(cur)
    while cur.peek() == "meet":
        cur.take()
        left = Join(left, _parse_bs_primary(cur))
    return left


def _parse_bs_primary(cur: _Cursor) -> Term:
    kind = cur.peek()
    if kind == "one":
        cur.take()
        return ZERO
    if kind == "var":
        return Var(int(cur.take()[1]))
    if kind == "lpar":
        cur.take()
        t = _parse_bs_term(cur)
        if cur.peek() != "rpar":
            raise ParseError(cur.pos(), "')'")
        cur.take()
        return t
    raise ParseError(cur.pos(), "a term")


# --- evaluation --------------------------------------------------------------


def eval_term(L: FinCbs, t: Term, env) -> int:
    """Evaluate against the tables of L; env maps variable index to element."""
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Var):
        try:
            v = env[t.index]
        except (KeyError, IndexError):
            raise UnboundVariable(f"variable x{t.index} has no value") from None
        L.check_index(v)
        return v
    a = eval_term(L, t.left, env)
    b = eval_term(L, t.right, env)
    return L.join[a][b] if isinstance(t, Join) else L.diff[a][b]


# --- normalization -----------------------------------------------------------


def _join_parts(t: Term) -> list[Term]:
    """Rewrite into a list of zero-free join-less parts whose join equals t.

    Uses the valid identities (a v b) - c = (a - c) v (b - c),
    c - (a v b) = (c - a) - b, c - 0 = c and 0 - c = 0.
    """
    if isinstance(t, Zero):
        return []
    if isinstance(t, Var):
        return [t]
    if isinstance(t, Join):
        return _join_parts(t.left) + _join_parts(t.right)
    minuends = _join_parts(t.left)
    subtrahends = _join_parts(t.right)
    out = []
    for x in minuends:
        for s in subtrahends:
            x = Diff(x, s)
        out.append(x)
    return out


def normalize_term(t: Term) -> Term:
    """A join of difference-and-variable terms (or 0), equal to t in every CBS."""
    parts = []
    seen = set()
    for p in _join_parts(t):
        if p not in seen:
            seen.add(p)
            parts.append(p)
    if not parts:
        return ZERO
    acc = parts[0]
    for p in parts[1:]:
        acc = Join(acc, p)
    return acc


# --- provability -------------------------------------------------------------
# Formulas of the {->, ^, T} fragment as hash-consed tuples:
#   ('top',) | ('var', k) | ('and', a, b) | ('imp', a, b)

_TOP = ("top",)


def _to_formula(t: Term):
    if isinstance(t, Zero):
        return _TOP
    if isinstance(t, Var):
        return ("var", t.index)
    if isinstance(t, Join):
        return ("and", _to_formula(t.left), _to_formula(t.right))
    return ("imp", _to_formula(t.right), _to_formula(t.left))


_PROOF_CACHE: dict = {}


def clear_proof_cache() -> None:
    _PROOF_CACHE.clear()


def _provable(gamma: frozenset, goal) -> bool:
    key = (gamma, goal)
    hit = _PROOF_CACHE.get(key)
    if hit is not None:
        return hit
    result = _prove(set(gamma), goal)
    _PROOF_CACHE[key] = result
    return result


def _prove(gamma: set, goal) -> bool:
    # saturate the invertible left rules
    changed = True
    while changed:
        changed = False
        for f in sorted(gamma):
            if f == _TOP:
                gamma.discard(f)
                changed = True
                break
            if f[0] == "and":
                gamma.discard(f)
                gamma.add(f[1])
                gamma.add(f[2])
                changed = True
                break
            if f[0] == "imp":
                a, b = f[1], f[2]
                if a == _TOP:
                    gamma.discard(f)
                    gamma.add(b)
                    changed = True
                    break
                if a[0] == "and":
                    gamma.discard(f)
                    gamma.add(("imp", a[1], ("imp", a[2], b)))
                    changed = True
                    break
                if a[0] == "var" and a in gamma:
                    gamma.discard(f)
                    gamma.add(b)
                    changed = True
                    break
    if goal == _TOP:
        return True
    frozen = frozenset(gamma)
    if goal[0] == "and":
        return _provable(frozen, goal[1]) and _provable(frozen, goal[2])
    if goal[0] == "imp":
        return _provable(frozenset(gamma | {goal[1]}), goal[2])
    if goal in gamma:
        return True
    # the only non-invertible step: pick a nested implication to attack
    for f in sorted(gamma):
        if f[0] == "imp" and f[1][0] == "imp":
            nested, c = f[1], f[2]
            rest = gamma - {f}
            if _provable(
                frozenset(rest | {("imp", nested[2], c)}), nested
            ) and _provable(frozenset(rest | {c}), goal):
                return True
    return False


def provable_leq(s: Term, t: Term) -> bool:
    """s <= t in every CBS, decided by proof search."""
    return _provable(frozenset((_to_formula(t),)), _to_formula(s))


@dataclass(frozen=True)
class Countermodel:
    algebra_name: str
    algebra: FinCbs
    assignment: tuple[int, ...]
    left_value: int
    right_value: int


@dataclass(frozen=True)
class EqualityResult:
    equal: bool
    countermodel: Countermodel | None = None

    def __bool__(self) -> bool:
        return self.equal


def _search_countermodel(s: Term, t: Term, arity: int) -> Countermodel | None:
    for name, L in catalog_algebras():
        if L.n**arity > 4096:
            continue
        for env in _assignments(L.n, arity):
            a = eval_term(L, s, env)
            b = eval_term(L, t, env)
            if a != b:
                return Countermodel(name, L, env, a, b)
    return None


def _assignments(n: int, arity: int):
    if arity == 0:
        yield ()
        return
    for rest in _assignments(n, arity - 1):
        for v in range(n):
            yield rest + (v,)


def terms_equal(s: Term, t: Term, arity: int | None = None) -> EqualityResult:
    """Decide whether s = t holds in every co-Brouwerian semilattice.

    A countermodel from the catalog is reported when the terms differ and
    one exists at small scale; equality itself is always decided by the
    sequent-calculus prover, so the absence of a countermodel never turns
    into a positive answer by itself.
    """
    used = term_vars(s) | term_vars(t)
    max_var = max(used, default=-1)
    if arity is None:
        arity = max_var + 1
    elif max_var >= arity:
        raise IndexOutOfRange(f"variable x{max_var} exceeds arity {arity}")
    if normalize_term(s) == normalize_term(t):
        return EqualityResult(True)
    cm = _search_countermodel(s, t, arity)
    if cm is not None:
        return EqualityResult(False, cm)
    if provable_leq(s, t) and provable_leq(t, s):
        return EqualityResult(True)
    return EqualityResult(False)


# --- free algebras -----------------------------------------------------------


def _rep_key(t: Term) -> tuple[int, str]:
    return (term_size(t), format_term(t))


@functools.lru_cache(maxsize=None)
def free_cbs(arity: int, class_cap: int = 256) -> tuple[FinCbs, tuple[int, ...]]:
    """The free CBS on ``arity`` generators (arity at most 2) plus generator indices.

    Closure proceeds breadth-first over join and difference applications on
    class representatives; the prover decides which results are new.
    Local finiteness guarantees termination, and ``class_cap`` guards it.
    Representatives are minimal-size, then lexicographically least, and the
    carrier is ordered zero first, then by representative.
    """
    if arity < 0:
        raise IndexOutOfRange("arity must be nonnegative")
    if arity > 2:
        raise ArityTooLarge(
            "free algebras on three or more generators are far beyond desk scale"
        )
    envs: list[tuple[FinCbs, tuple[int, ...]]] = []
    for _, L in separating_algebras():
        for env in _assignments(L.n, arity):
            envs.append((L, env))

    def fingerprint(t: Term) -> tuple[int, ...]:
        return tuple(eval_term(L, t, env) for L, env in envs)

    def prover_equal(a: Term, b: Term) -> bool:
        return provable_leq(a, b) and provable_leq(b, a)

    reps: list[Term] = [ZERO] + [Var(i) for i in range(arity)]
    by_fp: dict[tuple[int, ...], list[int]] = {}
    for i, r in enumerate(reps):
        by_fp.setdefault(fingerprint(r), []).append(i)

    def locate(t: Term, update: bool = True) -> int | None:
        for k in by_fp.get(fingerprint(t), []):
            if prover_equal(t, reps[k]):
                if update and _rep_key(t) < _rep_key(reps[k]):
                    reps[k] = t
                return k
        return None

    grown = True
    while grown:
        grown = False
        count = len(reps)
        for op in (Join, Diff):
            for i in range(count):
                for j in range(count):
                    cand = normalize_term(op(reps[i], reps[j]))
                    if locate(cand) is None:
                        fp = fingerprint(cand)
                        by_fp.setdefault(fp, []).append(len(reps))
                        reps.append(cand)
                        grown = True
                        if len(reps) > class_cap:
                            raise SizeLimitExceeded(
                                f"free algebra closure exceeded {class_cap} classes"
                            )

    order = [0] + sorted(range(1, len(reps)), key=lambda k: _rep_key(reps[k]))
    reps = [reps[k] for k in order]
    by_fp = {}
    for i, r in enumerate(reps):
        by_fp.setdefault(fingerprint(r), []).append(i)

    n = len(reps)
    join_table = []
    diff_table = []
    for i in range(n):
        jrow = []
        drow = []
        for j in range(n):
            k = locate(normalize_term(Join(reps[i], reps[j])), update=False)
            if k is None:
                raise FincbsError("closure incomplete: join escaped the classes")
            jrow.append(k)
            k = locate(normalize_term(Diff(reps[i], reps[j])), update=False)
            if k is None:
                raise FincbsError("closure incomplete: difference escaped the classes")
            drow.append(k)
        join_table.append(tuple(jrow))
        diff_table.append(tuple(drow))
    labels = tuple(format_term(r) for r in reps)
    algebra = FinCbs(tuple(join_table), tuple(diff_table), labels)
    problems = validate_cbs(algebra.join, algebra.diff)
    if problems:
        raise FincbsError(f"free algebra tables violate the laws: {problems[0]}")
    gens = []
    for i in range(arity):
        k = locate(Var(i), update=False)
        if k is None:
            raise FincbsError("generator lost during closure")
        gens.append(k)
    return algebra, tuple(gens)
