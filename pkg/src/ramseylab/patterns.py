"""Pattern schemas: finite sets of arithmetic terms over existential variables.

A pattern such as ``{x, y, x*y, x+y}`` denotes the family of value sets
obtained by substituting positive integers for the variables.  Terms are
built from variables, positive integer constants, ``+`` and ``*`` (``*`` is
always explicit).  Grammar::

    pattern := "{" term ("," term)* "}"
    term    := expr
    expr    := prod ("+" prod)*
    prod    := atom ("*" atom)*
    atom    := IDENT | NUMBER | "(" expr ")"

Canonicalization folds constant-constant nodes and sorts the operands of
each commutative node under a fixed total order; it never distributes, so
term identity stays predictable.  Evaluation is exact and errors once a
value exceeds the signed 64-bit cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .errors import BudgetExceededError, RamseyError, ValueOverflowError

#: evaluation width — values above this raise ValueOverflowError
VALUE_CAP = 2**63 - 1


class PatternError(RamseyError):
    pass


class PatternSyntaxError(PatternError):
    """Malformed pattern text.  ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnboundVariableError(PatternError):
    pass


class AssignmentError(PatternError):
    pass


# ---------------------------------------------------------------------------
# term AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


Term = Union[Var, Const, Add, Mul]


def term_key(t: Term):
    """Total order on canonical terms: Const < Var < Add < Mul, then fields."""
    if isinstance(t, Const):
        return (0, t.value)
    if isinstance(t, Var):
        return (1, t.name)
    if isinstance(t, Add):
        return (2, term_key(t.left), term_key(t.right))
    return (3, term_key(t.left), term_key(t.right))


def canonicalize(t: Term) -> Term:
    """Fold constant-constant nodes, sort commutative operands.  Idempotent."""
    if isinstance(t, (Var, Const)):
        return t
    left = canonicalize(t.left)
    right = canonicalize(t.right)
    if isinstance(left, Const) and isinstance(right, Const):
        if isinstance(t, Add):
            return Const(left.value + right.value)
        return Const(left.value * right.value)
    if term_key(right) < term_key(left):
        left, right = right, left
    return type(t)(left, right)


def term_variables(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    return term_variables(t.left) | term_variables(t.right)


def eval_term(t: Term, assignment: Mapping[str, int]) -> int:
    """Exact evaluation; raises on unbound variables and 64-bit overflow."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {t.name!r}") from None
    a = eval_term(t.left, assignment)
    b = eval_term(t.right, assignment)
    v = a + b if isinstance(t, Add) else a * b
    if v > VALUE_CAP:
        raise ValueOverflowError(f"term value {v} exceeds 64-bit cap")
    return v


def format_term(t: Term) -> str:
    """Render a term; parentheses are emitted exactly where reparsing needs them."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Add):
        ls = format_term(t.left)
        rs = format_term(t.right)
        if isinstance(t.right, Add):
            rs = f"({rs})"
        return f"{ls}+{rs}"
    ls = format_term(t.left)
    rs = format_term(t.right)
    if isinstance(t.left, Add):
        ls = f"({ls})"
    if isinstance(t.right, (Add, Mul)):
        rs = f"({rs})"
    return f"{ls}*{rs}"


# ---------------------------------------------------------------------------
# schemas


@dataclass(frozen=True)
class PatternSchema:
    """A canonicalized, duplicate-free term set plus instantiation policy."""

    terms: tuple
    variables: tuple
    distinct_vars: bool = False
    min_value: int = 1

    def __post_init__(self):
        if not self.terms:
            raise PatternError("empty term set")
        if self.min_value < 1:
            raise PatternError("min_value must be >= 1")

    @property
    def source(self) -> str:
        return format_pattern(self)


def schema_from_terms(terms, distinct_vars: bool = False, min_value: int = 1) -> PatternSchema:
    canon = []
    for t in terms:
        ct = canonicalize(t)
        if ct not in canon:
            canon.append(ct)
    names = set()
    for t in canon:
        names |= term_variables(t)
    return PatternSchema(
        terms=tuple(canon),
        variables=tuple(sorted(names)),
        distinct_vars=distinct_vars,
        min_value=min_value,
    )


def format_pattern(schema: PatternSchema) -> str:
    return "{" + ", ".join(format_term(t) for t in schema.terms) + "}"


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(r"(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<num>\d+)|(?P<sym>[{}(),+*])")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PatternSyntaxError(f"unexpected character {ch!r}", pos)
        if m.lastgroup == "ident":
            tokens.append(("ident", m.group(), pos))
        elif m.lastgroup == "num":
            value = int(m.group())
            if value == 0:
                raise PatternSyntaxError("constant 0 is not allowed", pos)
            tokens.append(("num", value, pos))
        else:
            tokens.append((m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(("eof", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise PatternSyntaxError(f"expected {kind!r}", tok[2])
        self.i += 1
        return tok

    def parse_pattern(self):
        self.take("{")
        if self.peek()[0] == "}":
            raise PatternSyntaxError("empty term set", self.peek()[2])
        terms = [self.parse_expr()]
        while self.peek()[0] == ",":
            self.take(",")
            terms.append(self.parse_expr())
        self.take("}")
        if self.peek()[0] != "eof":
            raise PatternSyntaxError("trailing input after pattern", self.peek()[2])
        return terms

    def parse_expr(self):
        t = self.parse_prod()
        while self.peek()[0] == "+":
            self.take("+")
            t = Add(t, self.parse_prod())
        return t

    def parse_prod(self):
        t = self.parse_atom()
        while self.peek()[0] == "*":
            self.take("*")
            t = Mul(t, self.parse_atom())
        return t

    def parse_atom(self):
        kind, value, pos = self.peek()
        if kind == "ident":
            self.take()
            return Var(value)
        if kind == "num":
            self.take()
            return Const(value)
        if kind == "(":
            self.take("(")
            t = self.parse_expr()
            self.take(")")
            return t
        raise PatternSyntaxError("expected a term", pos)


def parse_pattern(text: str, distinct_vars: bool = False, min_value: int = 1) -> PatternSchema:
    """Parse pattern source text into a canonicalized schema."""
    terms = _Parser(text).parse_pattern()
    return schema_from_terms(terms, distinct_vars=distinct_vars, min_value=min_value)


# ---------------------------------------------------------------------------
# assignments and instantiation


def validate_assignment(schema: PatternSchema, assignment: Mapping[str, int]) -> None:
    """Check that ``assignment`` covers exactly the schema's variables and
    respects positivity, min_value, and the distinctness flag."""
    keys = set(assignment)
    want = set(schema.variables)
    if keys != want:
        missing = sorted(want - keys)
        extra = sorted(keys - want)
        raise AssignmentError(f"assignment keys mismatch (missing={missing}, extra={extra})")
    for name, v in assignment.items():
        if not isinstance(v, int) or v < 1:
            raise AssignmentError(f"{name}={v!r} is not a positive integer")
        if v < schema.min_value:
            raise AssignmentError(f"{name}={v} below min_value={schema.min_value}")
    if schema.distinct_vars:
        vals = list(assignment.values())
        if len(set(vals)) != len(vals):
            raise AssignmentError("distinct_vars requires pairwise distinct values")


def instantiate(schema: PatternSchema, assignment: Mapping[str, int], check: bool = True) -> frozenset:
    """Value set of all terms at the assignment.  Collapses coincident values."""
    if check:
        validate_assignment(schema, assignment)
    return frozenset(eval_term(t, assignment) for t in schema.terms)


# ---------------------------------------------------------------------------
# in-box assignment enumeration (shared by the search engines and the encoder)


class TermPlan:
    """Precomputed evaluation order: which terms become fully bound as each
    variable (in schema order) receives a value.  Used to prune box scans —
    every term is monotone nondecreasing in every variable, so a bound term
    exceeding N kills all larger values of the innermost variable."""

    def __init__(self, schema: PatternSchema):
        self.schema = schema
        self.variables = schema.variables
        index = {name: i for i, name in enumerate(self.variables)}
        ready = [[] for _ in self.variables]
        self.constant_terms = []
        for t in schema.terms:
            tv = term_variables(t)
            if not tv:
                self.constant_terms.append(t)
            else:
                ready[max(index[name] for name in tv)].append(t)
        self.ready = [tuple(r) for r in ready]


def iter_box_assignments(schema: PatternSchema, N: int,
                         max_assignments: Optional[int] = None) -> Iterator[dict]:
    """Yield assignments (lexicographic in schema variable order) whose term
    values all land in [1..N].  ``max_assignments`` bounds the number of
    *enumerated leaves* and raises once exceeded."""
    plan = TermPlan(schema)
    for t in plan.constant_terms:
        if eval_term(t, {}) > N:
            return
    k = len(plan.variables)
    lo = schema.min_value
    if lo > N:
        return
    asg: dict = {}
    count = 0

    def rec(level: int) -> Iterator[dict]:
        nonlocal count
        if level == k:
            count += 1
            if max_assignments is not None and count > max_assignments:
                raise BudgetExceededError("assignment enumeration budget exceeded")
            yield dict(asg)
            return
        name = plan.variables[level]
        for v in range(lo, N + 1):
            if schema.distinct_vars and v in asg.values():
                continue
            asg[name] = v
            overflow = False
            for t in plan.ready[level]:
                if eval_term(t, asg) > N:
                    overflow = True
                    break
            if overflow:
                del asg[name]
                break  # terms are monotone in this variable
            yield from rec(level + 1)
            del asg[name]

    yield from rec(0)


def instance_value_sets(schema: PatternSchema, N: int,
                        max_assignments: Optional[int] = None) -> list:
    """Deduplicated in-box instance value sets, as sorted tuples, sorted."""
    seen = set()
    for asg in iter_box_assignments(schema, N, max_assignments=max_assignments):
        seen.add(tuple(sorted(instantiate(schema, asg, check=False))))
    return sorted(seen)
