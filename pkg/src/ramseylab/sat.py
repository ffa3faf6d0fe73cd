"""CNF encoding of avoidance problems and a small deterministic CDCL solver.

Variable map: integer n taking color j is the variable (n-1)*c + j + 1, a
pure function of (N, c).  The avoidance encoding emits, in this frozen
order: an optional symmetry unit fixing integer 1 to color 0, then per-n
exactly-one blocks (at-least-one clause followed by pairwise at-most-one
clauses), then one clause per (instance value set, color) forbidding that
set from being monochromatic in that color.  Value sets are deduplicated
and emitted in sorted order, so the encoding is stable byte-for-byte.

The solver is a first-UIP CDCL with two-watched-literal propagation.  In
its single (deterministic) mode it branches on the lowest-index unassigned
variable, trying true first, so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .colorings import Coloring
from .errors import MalformedInputError, RamseyError
from .patterns import PatternSchema, instance_value_sets

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass
class CnfFormula:
    var_count: int
    clauses: list

    def __post_init__(self):
        if self.var_count < 0:
            raise MalformedInputError("negative variable count")
        for cl in self.clauses:
            if not cl:
                raise MalformedInputError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.var_count:
                    raise MalformedInputError(f"literal {lit} out of range")


@dataclass
class SatVerdict:
    status: str
    model: Optional[list] = None  # signed literals, sorted by variable
    conflicts: int = 0
    decisions: int = 0


# ---------------------------------------------------------------------------
# avoidance encoding


@dataclass(frozen=True)
class ColorVarMap:
    """n in [1..N] gets color j in [0..c-1]  <=>  variable (n-1)*c + j + 1."""

    N: int
    c: int

    @property
    def var_count(self) -> int:
        return self.N * self.c

    def var(self, n: int, j: int) -> int:
        if not (1 <= n <= self.N and 0 <= j < self.c):
            raise MalformedInputError(f"no variable for n={n}, j={j}")
        return (n - 1) * self.c + j + 1

    def decode(self, model) -> Coloring:
        """Read a coloring off a model; exactly one color per value required."""
        truth = {}
        for lit in model:
            truth[abs(lit)] = lit > 0
        cells = []
        for n in range(1, self.N + 1):
            chosen = [j for j in range(self.c) if truth.get(self.var(n, j), False)]
            if len(chosen) != 1:
                raise MalformedInputError(f"model assigns {len(chosen)} colors to {n}")
            cells.append(chosen[0])
        return Coloring(d=1, N=self.N, c=self.c, cells=tuple(cells))


def encode_avoidance(schema: PatternSchema, N: int, c: int,
                     symmetry_break: bool = False,
                     max_assignments: Optional[int] = None):
    """CNF satisfiable iff some c-coloring of [1..N] has no monochromatic
    instance of the schema.  Returns (formula, var_map).

    Singleton value sets (an instance collapsing to one value) are
    monochromatic under every coloring, so they emit width-1 clauses for
    every color, making the formula unsatisfiable — in agreement with the
    other engines.
    """
    if N < 1 or c < 1:
        raise MalformedInputError("encode_avoidance needs N >= 1 and c >= 1")
    vmap = ColorVarMap(N=N, c=c)
    clauses = []
    if symmetry_break and c >= 1:
        clauses.append([vmap.var(1, 0)])
    for n in range(1, N + 1):
        clauses.append([vmap.var(n, j) for j in range(c)])
        for j1 in range(c):
            for j2 in range(j1 + 1, c):
                clauses.append([-vmap.var(n, j1), -vmap.var(n, j2)])
    for values in instance_value_sets(schema, N, max_assignments=max_assignments):
        for j in range(c):
            clauses.append([-vmap.var(v, j) for v in values])
    return CnfFormula(var_count=vmap.var_count, clauses=clauses), vmap


# ---------------------------------------------------------------------------
# solver


class _Solver:
    def __init__(self, formula: CnfFormula):
        self.nvars = formula.var_count
        self.assign = [0] * (self.nvars + 1)  # 0 free, +1 true, -1 false
        self.level = [0] * (self.nvars + 1)
        self.reason = [None] * (self.nvars + 1)
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.watches = {}  # literal -> list of clauses watching it
        self.conflicts = 0
        self.decisions = 0
        self.root_conflict = False
        for cl in formula.clauses:
            self._add_clause(list(cl))

    # -- plumbing

    def _value(self, lit: int) -> int:
        v = self.assign[abs(lit)]
        return v if lit > 0 else -v

    def _current_level(self) -> int:
        return len(self.trail_lim)

    def _watch(self, lit: int, clause) -> None:
        self.watches.setdefault(lit, []).append(clause)

    def _add_clause(self, lits) -> None:
        seen = set()
        out = []
        for lit in lits:
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        if len(out) == 1:
            if not self._enqueue(out[0], None):
                self.root_conflict = True
            return
        self._watch(out[0], out)
        self._watch(out[1], out)

    def _enqueue(self, lit: int, reason) -> bool:
        val = self._value(lit)
        if val == 1:
            return True
        if val == -1:
            return False
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = self._current_level()
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _propagate(self):
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches.get(-p)
            if not ws:
                continue
            i = j = 0
            n = len(ws)
            while i < n:
                cl = ws[i]
                i += 1
                if cl[0] == -p:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                if self._value(first) == 1:
                    ws[j] = cl
                    j += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if self._value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        self._watch(cl[1], cl)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = cl
                j += 1
                if self._value(first) == -1:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(self.trail)
                    return cl
                self._enqueue(first, cl)
            del ws[j:]
        return None

    def _analyze(self, confl):
        """First-UIP conflict analysis; returns (learnt clause, backjump level)."""
        learnt = []
        seen = set()
        counter = 0
        p = None
        idx = len(self.trail) - 1
        btlevel = 0
        cur = self._current_level()
        while True:
            start = 1 if p is not None else 0
            for q in confl[start:]:
                v = abs(q)
                lv = self.level[v]
                if v not in seen and lv > 0:
                    seen.add(v)
                    if lv == cur:
                        counter += 1
                    else:
                        learnt.append(q)
                        btlevel = max(btlevel, lv)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            seen.discard(abs(p))
            counter -= 1
            idx -= 1
            if counter == 0:
                break
            confl = self.reason[abs(p)]
        return [-p] + learnt, btlevel

    def _cancel_until(self, level: int) -> None:
        while self._current_level() > level:
            mark = self.trail_lim.pop()
            for lit in self.trail[mark:]:
                v = abs(lit)
                self.assign[v] = 0
                self.reason[v] = None
            del self.trail[mark:]
        self.qhead = len(self.trail)

    def _record(self, learnt) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
            return
        # watch the asserting literal and a literal from the backjump level
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        self._watch(learnt[0], learnt)
        self._watch(learnt[1], learnt)
        self._enqueue(learnt[0], learnt)

    def solve(self, max_conflicts: Optional[int] = None) -> SatVerdict:
        if self.root_conflict:
            return SatVerdict(status=UNSAT)
        branch_from = 1
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if self._current_level() == 0:
                    return SatVerdict(status=UNSAT, conflicts=self.conflicts,
                                      decisions=self.decisions)
                if max_conflicts is not None and self.conflicts > max_conflicts:
                    return SatVerdict(status=UNKNOWN, conflicts=self.conflicts,
                                      decisions=self.decisions)
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                self._record(learnt)
                branch_from = 1
                continue
            v = branch_from
            while v <= self.nvars and self.assign[v] != 0:
                v += 1
            if v > self.nvars:
                model = [w if self.assign[w] > 0 else -w
                         for w in range(1, self.nvars + 1)]
                return SatVerdict(status=SAT, model=model,
                                  conflicts=self.conflicts, decisions=self.decisions)
            branch_from = v
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(v, None)  # deterministic: lowest index, true first


def check_model(formula: CnfFormula, model) -> bool:
    truth = {abs(lit): lit > 0 for lit in model}
    for cl in formula.clauses:
        if not any(truth.get(abs(lit), False) == (lit > 0) for lit in cl):
            return False
    return True


def solve(formula: CnfFormula, max_conflicts: Optional[int] = None,
          recheck: bool = True) -> SatVerdict:
    """Solve a CNF formula.  SAT models are re-validated before returning."""
    verdict = _Solver(formula).solve(max_conflicts=max_conflicts)
    if verdict.status == SAT and recheck and not check_model(formula, verdict.model):
        raise RamseyError("solver returned a model that fails re-validation")
    return verdict


# ---------------------------------------------------------------------------
# DIMACS and solver-output formats


def export_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.var_count} {len(formula.clauses)}\n"]
    for cl in formula.clauses:
        lines.append(" ".join(map(str, cl)) + " 0\n")
    return "".join(lines)


def parse_dimacs(text: str) -> CnfFormula:
    var_count = None
    declared = None
    clauses = []
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedInputError(f"bad problem line: {line!r}")
            var_count, declared = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if current:
                    clauses.append(current)
                    current = []
            else:
                current.append(lit)
    if current:
        raise MalformedInputError("last clause is not 0-terminated")
    if var_count is None:
        raise MalformedInputError("missing 'p cnf' header")
    if declared is not None and declared != len(clauses):
        raise MalformedInputError(
            f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(var_count=var_count, clauses=clauses)


def parse_solver_output(text: str) -> SatVerdict:
    """Read competition-style solver output: an 's' verdict line plus
    'v' model lines with literals terminated by 0."""
    status = None
    model = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            tag = line[2:].strip()
            if tag == "SATISFIABLE":
                status = SAT
            elif tag == "UNSATISFIABLE":
                status = UNSAT
            else:
                status = UNKNOWN
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit != 0:
                    model.append(lit)
    if status is None:
        raise MalformedInputError("no 's' verdict line in solver output")
    return SatVerdict(status=status, model=model if status == SAT else None)


def format_solver_output(verdict: SatVerdict) -> str:
    if verdict.status == SAT:
        lits = " ".join(map(str, verdict.model))
        return f"s SATISFIABLE\nv {lits} 0\n"
    if verdict.status == UNSAT:
        return "s UNSATISFIABLE\n"
    return "s UNKNOWN\n"
