"""Monochromatic-instance search, avoidance search, and threshold scans.

Three engines answer "does some c-coloring of [1..N] avoid the pattern?":

* ``backtracking`` — assigns colors to 1..N in increasing order, forbidding
  any color that would complete a monochromatic instance.  Only canonical
  colorings (new colors in first-use order) are explored; the first solution
  found is the lexicographically least avoiding coloring overall.
* ``sat`` — the CNF encoding from :mod:`ramseylab.sat`.
* ``exhaustive`` — enumeration over canonical colorings; the test oracle.

Searches always run as an ordered list of chunks (split on the leading
witness coordinate, or on a fixed-depth color prefix), whatever the worker
count, so reported witnesses *and node counts* are identical for any
``workers`` value.  Every returned avoiding coloring is re-validated with
``find_instance`` before it leaves this module.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import sat as satmod
from ._parallel import NodeBudget, ordered_first_hit
from .colorings import Coloring, enumerate_colorings
from .errors import BudgetExceededError, RamseyError
from .patterns import PatternSchema, TermPlan, eval_term, instance_value_sets

ENGINES = ("backtracking", "sat", "exhaustive")

SPLIT_DEPTH = 8  # backtracking splits its tree at this prefix depth


@dataclass(frozen=True)
class InstanceQuery:
    schema: PatternSchema
    coloring: Coloring

    def __post_init__(self):
        if self.coloring.d != 1:
            raise RamseyError("instance search needs a 1-dimensional coloring")


@dataclass
class SearchStats:
    nodes: int = 0
    time_ms: float = 0.0
    engine: str = ""


@dataclass
class AvoidanceResult:
    verdict: str  # "sat" | "unsat" | "unknown"
    coloring: Optional[Coloring]
    stats: SearchStats


@dataclass
class ThresholdResult:
    pattern: str
    colors: int
    threshold: Optional[int]
    certificate: Optional[Coloring]
    rows: list = field(default_factory=list)  # (N, verdict, nodes, time_ms)
    status: str = "found"  # "found" | "unknown"


# ---------------------------------------------------------------------------
# instance search


def _scan_instances(plan: TermPlan, coloring: Coloring, first_lo: int,
                    first_hi: int, budget: Optional[NodeBudget],
                    collect: Optional[list] = None, limit: Optional[int] = None):
    """Lexicographic scan over in-box assignments with the first variable
    restricted to [first_lo..first_hi].  Returns (least monochromatic
    (assignment, color) or None, leaves visited); with ``collect`` set,
    appends every hit (up to ``limit``) instead."""
    schema = plan.schema
    N = coloring.N
    for t in plan.constant_terms:
        if eval_term(t, {}) > N:
            return None, 0
    cells = coloring.cells
    color_at = (lambda v: cells[v - 1]) if cells is not None else \
        (lambda v: coloring.fn(v - 1))
    variables = plan.variables
    k = len(variables)
    lo = schema.min_value
    distinct = schema.distinct_vars
    terms = schema.terms
    asg: dict = {}
    local_nodes = 0

    def leaf_check():
        values = set()
        for t in terms:
            values.add(eval_term(t, asg))
        it = iter(values)
        color = color_at(next(it))
        for v in it:
            if color_at(v) != color:
                return None
        return color

    def rec(level: int):
        nonlocal local_nodes
        if level == k:
            local_nodes += 1
            if budget is not None and local_nodes % 512 == 0:
                budget.spend(512)
            color = leaf_check()
            if color is None:
                return None
            hit = (dict(asg), color)
            if collect is not None:
                collect.append(hit)
                if limit is not None and len(collect) >= limit:
                    return hit  # stop signal
                return None
            return hit
        vlo = lo if level > 0 else max(lo, first_lo)
        vhi = N if level > 0 else min(N, first_hi)
        name = variables[level]
        for v in range(vlo, vhi + 1):
            if distinct and v in asg.values():
                continue
            asg[name] = v
            dead = False
            for t in plan.ready[level]:
                if eval_term(t, asg) > N:
                    dead = True
                    break
            if dead:
                del asg[name]
                break  # terms are monotone in this variable
            hit = rec(level + 1)
            del asg[name]
            if hit is not None:
                return hit
        return None

    if k == 0:
        color = leaf_check()
        hit = (dict(), color) if color is not None else None
        if collect is not None and hit is not None:
            collect.append(hit)
            hit = None
        return hit, 1
    if first_lo > first_hi:
        return None, 0
    hit = rec(0)
    if budget is not None and local_nodes % 512:
        budget.spend(local_nodes % 512)
    return hit, local_nodes


def find_instance_detailed(query: InstanceQuery, workers: int = 1,
                           max_nodes: Optional[int] = None):
    """As :func:`find_instance`, also returning the leaf count."""
    schema, coloring = query.schema, query.coloring
    budget = NodeBudget(max_nodes) if max_nodes is not None else None
    plan = TermPlan(schema)
    lo, N = schema.min_value, coloring.N
    if not schema.variables:
        return _scan_instances(plan, coloring, lo, N, budget)
    tasks = [
        (lambda v0=v0: _scan_instances(plan, coloring, v0, v0, budget))
        for v0 in range(lo, N + 1)
    ]
    return ordered_first_hit(tasks, workers=workers)


def find_instance(query: InstanceQuery, workers: int = 1,
                  max_nodes: Optional[int] = None):
    """Lexicographically least monochromatic instance, as (assignment dict,
    color), or None.  Assignments are ordered by the schema's sorted
    variable list."""
    hit, _ = find_instance_detailed(query, workers=workers, max_nodes=max_nodes)
    return hit


def find_all_instances(query: InstanceQuery, limit: int = 1000):
    """Flagged enumeration mode: every monochromatic instance in
    lexicographic order, capped at ``limit``."""
    out: list = []
    plan = TermPlan(query.schema)
    _scan_instances(plan, query.coloring, query.schema.min_value,
                    query.coloring.N, None, collect=out, limit=limit)
    return out


def has_monochromatic_instance(schema: PatternSchema, coloring: Coloring) -> bool:
    return find_instance(InstanceQuery(schema=schema, coloring=coloring)) is not None


# ---------------------------------------------------------------------------
# avoidance search


def _index_by_max(value_sets):
    """For each n, the instances whose largest value is n, as 'other values'
    tuples.  An empty 'others' means the instance is a singleton {n}: every
    color completes it, so n becomes uncolorable."""
    by_max: dict = {}
    for vs in value_sets:
        by_max.setdefault(vs[-1], []).append(vs[:-1])
    return by_max


def _backtrack_chunk(N, c, by_max, prefix, budget: Optional[NodeBudget]):
    """Continue the canonical-coloring DFS from a fixed color prefix;
    returns (lexicographically least avoiding completion or None, nodes)."""
    colors = list(prefix) + [0] * (N - len(prefix))
    local_nodes = 0

    def allowed(n: int, color: int) -> bool:
        for others in by_max.get(n, ()):
            ok = True
            for v in others:
                if colors[v - 1] != color:
                    ok = False
                    break
            if ok:
                return False
        return True

    def rec(n: int, used: int):
        nonlocal local_nodes
        if n > N:
            return tuple(colors)
        for color in range(min(used + 1, c)):
            local_nodes += 1
            if budget is not None and local_nodes % 1024 == 0:
                budget.spend(1024)
            if allowed(n, color):
                colors[n - 1] = color
                hit = rec(n + 1, max(used, color + 1))
                if hit is not None:
                    return hit
        return None

    hit = rec(len(prefix) + 1, len(set(prefix)))
    if budget is not None and local_nodes % 1024:
        budget.spend(local_nodes % 1024)
    return hit, local_nodes


def _backtrack_prefixes(N, c, by_max, depth):
    """Consistent canonical color prefixes of the given depth, in
    lexicographic order: the split frontier.  Instances with max value
    <= depth are fully assigned within the prefix, so the same forbidden-
    color rule applies."""
    prefixes = []
    colors = [0] * depth

    def allowed(n, color):
        for others in by_max.get(n, ()):
            if all(colors[v - 1] == color for v in others):
                return False
        return True

    def rec(n, used):
        if n > depth:
            prefixes.append(tuple(colors))
            return
        for color in range(min(used + 1, c)):
            if allowed(n, color):
                colors[n - 1] = color
                rec(n + 1, max(used, color + 1))
                colors[n - 1] = 0

    rec(1, 0)
    return prefixes


def find_avoiding_coloring(schema: PatternSchema, N: int, c: int,
                           engine: str = "backtracking",
                           symmetry_break: bool = True,
                           max_nodes: Optional[int] = None,
                           workers: int = 1,
                           validate: bool = True) -> AvoidanceResult:
    """Search for a c-coloring of [1..N] with no monochromatic instance."""
    if engine not in ENGINES:
        raise RamseyError(f"unknown engine {engine!r} (choose from {ENGINES})")
    t0 = time.perf_counter()
    stats = SearchStats(engine=engine)
    verdict = "unsat"
    found: Optional[Coloring] = None

    if engine == "sat":
        formula, vmap = satmod.encode_avoidance(schema, N, c,
                                                symmetry_break=symmetry_break)
        sv = satmod.solve(formula, max_conflicts=max_nodes)
        stats.nodes = sv.conflicts + sv.decisions
        if sv.status == satmod.SAT:
            verdict, found = "sat", vmap.decode(sv.model)
        elif sv.status == satmod.UNKNOWN:
            verdict = "unknown"
    elif engine == "exhaustive":
        try:
            value_sets = instance_value_sets(schema, N)
            nodes = 0
            for col in enumerate_colorings(1, N, c, symmetry_break=True):
                nodes += 1
                if max_nodes is not None and nodes > max_nodes:
                    raise BudgetExceededError("exhaustive scan budget exceeded")
                cells = col.cells
                if not any(all(cells[v - 1] == cells[vs[0] - 1] for v in vs[1:])
                           for vs in value_sets):
                    verdict, found = "sat", col
                    break
            stats.nodes = nodes
        except BudgetExceededError:
            verdict = "unknown"
    else:
        value_sets = instance_value_sets(schema, N)
        by_max = _index_by_max(value_sets)
        budget = NodeBudget(max_nodes) if max_nodes is not None else None
        try:
            depth = min(SPLIT_DEPTH, N)
            if N <= depth:
                cells, nodes = _backtrack_chunk(N, c, by_max, (), budget)
            else:
                prefixes = _backtrack_prefixes(N, c, by_max, depth)
                tasks = [
                    (lambda p=p: _backtrack_chunk(N, c, by_max, p, budget))
                    for p in prefixes
                ]
                cells, nodes = ordered_first_hit(tasks, workers=workers)
            stats.nodes = nodes
            if cells is not None:
                verdict, found = "sat", Coloring(d=1, N=N, c=c, cells=cells)
        except BudgetExceededError:
            verdict = "unknown"

    stats.time_ms = (time.perf_counter() - t0) * 1000.0
    if found is not None and validate:
        leftover = find_instance(InstanceQuery(schema=schema, coloring=found))
        if leftover is not None:
            raise RamseyError(f"engine {engine} returned an invalid certificate "
                              f"(monochromatic at {leftover})")
    return AvoidanceResult(verdict=verdict, coloring=found, stats=stats)


# ---------------------------------------------------------------------------
# thresholds


def threshold_number(schema: PatternSchema, c: int, n_max: int,
                     engine: str = "backtracking",
                     max_nodes: Optional[int] = None,
                     workers: int = 1) -> ThresholdResult:
    """Least N <= n_max such that every c-coloring of [1..N] contains a
    monochromatic instance; scans N upward so the certificate at N*-1 comes
    for free.  Forcing is monotone in N (instances only accumulate), so the
    first unsat N is the threshold."""
    from .patterns import format_pattern

    result = ThresholdResult(pattern=format_pattern(schema), colors=c,
                             threshold=None, certificate=None)
    last_cert: Optional[Coloring] = None
    for N in range(1, n_max + 1):
        res = find_avoiding_coloring(schema, N, c, engine=engine,
                                     max_nodes=max_nodes, workers=workers)
        result.rows.append((N, res.verdict, res.stats.nodes, res.stats.time_ms))
        if res.verdict == "sat":
            last_cert = res.coloring
        elif res.verdict == "unsat":
            result.threshold = N
            result.certificate = last_cert
            result.status = "found"
            return result
        else:
            result.status = "unknown"
            result.certificate = last_cert
            return result
    result.status = "unknown"
    result.certificate = last_cert
    return result
