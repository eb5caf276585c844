"""Exhaustive differential checking of compiled problems.

Two independent enumerations are compared:

* the source model, evaluated with direct builtin semantics over the
  declared variable domains (``eval_builtin``), and
* the compiled problem, enumerated over the free variables with every
  computable auxiliary substituted, feasibility checked by the numeric
  kernel, and solutions projected back onto the source variables.

Both are fully exhaustive, so agreement of the projected solution sets
is a proof of equivalence over the given domains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapExceeded
from .frontend import Arr, FzModel, Lit, Ref, SetVal
from .model import QipProblem

DEFAULT_CAP = 2_000_000
_CHUNK = 1 << 16


def truncdiv(n: int, d: int) -> int:
    """Integer division truncating toward zero."""
    q = abs(n) // abs(d)
    return q if (n >= 0) == (d >= 0) else -q


# ----------------------------------------------------------------------
# direct builtin semantics


def _av(arg, asg):
    if isinstance(arg, Lit):
        return arg.value
    if isinstance(arg, Ref):
        return asg[arg.name]
    if isinstance(arg, Arr):
        return [_av(a, asg) for a in arg.items]
    if isinstance(arg, SetVal):
        return arg.values
    raise TypeError(f"cannot evaluate {arg!r}")


def eval_builtin(name: str, args: tuple, asg: dict[str, int]) -> bool:
    """Truth value of one builtin constraint under a full assignment."""
    v = [_av(a, asg) for a in args]
    if name in ("int_eq", "bool_eq", "bool2int"):
        return v[0] == v[1]
    if name == "int_ne":
        return v[0] != v[1]
    if name in ("int_le", "bool_le"):
        return v[0] <= v[1]
    if name in ("int_lt", "bool_lt"):
        return v[0] < v[1]
    if name == "int_plus":
        return v[0] + v[1] == v[2]
    if name == "int_times":
        return v[0] * v[1] == v[2]
    if name == "int_div":
        return v[1] != 0 and truncdiv(v[0], v[1]) == v[2]
    if name == "int_mod":
        return v[1] != 0 and v[0] - truncdiv(v[0], v[1]) * v[1] == v[2]
    if name == "int_abs":
        return abs(v[0]) == v[1]
    if name == "int_min":
        return min(v[0], v[1]) == v[2]
    if name == "int_max":
        return max(v[0], v[1]) == v[2]
    if name == "int_pow":
        return v[1] >= 0 and v[0] ** v[1] == v[2]
    if name == "int_eq_reif":
        return (v[0] == v[1]) == bool(v[2])
    if name == "int_ne_reif":
        return (v[0] != v[1]) == bool(v[2])
    if name == "int_le_reif":
        return (v[0] <= v[1]) == bool(v[2])
    if name == "int_lt_reif":
        return (v[0] < v[1]) == bool(v[2])
    if name in ("int_lin_eq", "bool_lin_eq"):
        return sum(c * x for c, x in zip(v[0], v[1])) == v[2]
    if name in ("int_lin_le", "bool_lin_le"):
        return sum(c * x for c, x in zip(v[0], v[1])) <= v[2]
    if name == "int_lin_ne":
        return sum(c * x for c, x in zip(v[0], v[1])) != v[2]
    if name == "int_lin_eq_reif":
        return (sum(c * x for c, x in zip(v[0], v[1])) == v[2]) == bool(v[3])
    if name == "int_lin_le_reif":
        return (sum(c * x for c, x in zip(v[0], v[1])) <= v[2]) == bool(v[3])
    if name == "int_lin_ne_reif":
        return (sum(c * x for c, x in zip(v[0], v[1])) != v[2]) == bool(v[3])
    if name == "bool_not":
        return v[0] != v[1]
    if name == "bool_and":
        return (v[0] and v[1]) == v[2]
    if name == "bool_or":
        return (v[0] or v[1]) == v[2]
    if name == "bool_xor":
        if len(v) == 2:
            return v[0] != v[1]
        return (v[0] != v[1]) == bool(v[2])
    if name == "bool_eq_reif":
        return (v[0] == v[1]) == bool(v[2])
    if name == "bool_le_reif":
        return (v[0] <= v[1]) == bool(v[2])
    if name == "bool_lt_reif":
        return (v[0] < v[1]) == bool(v[2])
    if name == "bool_clause":
        return any(v[0]) or any(x == 0 for x in v[1])
    if name == "array_bool_and":
        return all(v[0]) == bool(v[1])
    if name == "array_bool_xor":
        # "exactly one" semantics, matching the linear encoding
        return sum(v[0]) == 1
    if name in ("array_int_element", "array_bool_element",
                "array_var_int_element", "array_var_bool_element"):
        i, arr, c = v
        return 1 <= i <= len(arr) and arr[i - 1] == c
    if name == "array_int_maximum":
        return v[0] == max(v[1])
    if name == "array_int_minimum":
        return v[0] == min(v[1])
    if name == "set_in":
        return v[0] in v[1]
    if name == "set_in_reif":
        return (v[0] in v[1]) == bool(v[2])
    raise AssertionError(f"unknown builtin {name}")


# ----------------------------------------------------------------------
# source-model enumeration


def enumerate_fzn(model: FzModel, cap: int = DEFAULT_CAP) -> tuple[list[str], set]:
    """All satisfying assignments of the model, as (names, set of tuples)."""
    names = list(model.vars)
    size = 1
    for decl in model.vars.values():
        size *= len(decl.domain)
    if size > cap:
        raise CapExceeded(size, cap)
    domains = [decl.domain.values() for decl in model.vars.values()]
    solutions = set()
    for combo in itertools.product(*domains):
        asg = dict(zip(names, combo))
        if all(eval_builtin(c.name, c.args, asg) for c in model.constraints):
            solutions.add(combo)
    return names, solutions


# ----------------------------------------------------------------------
# compiled-problem enumeration


@dataclass
class _Step:
    """One substitution computing a variable from earlier columns."""

    kind: str  # "product" | "equality"
    target: int
    inputs: list[int]
    coefs: list[int] = field(default_factory=list)  # equality only
    constant: int = 0
    sign: int = 1  # coefficient of the target in the equality (+-1)


def _build_substitution(problem: QipProblem) -> list[_Step]:
    """Greedy plan of variables computable from the remaining ones.

    A product always determines its result; an equality determines its
    single not-yet-determined variable when that variable's coefficient
    is +-1.  A rule is skipped if using it would make the computation
    cyclic (some input already depends on the target).
    """
    index = {name: i for i, name in enumerate(problem.vars)}
    defs: dict[int, _Step] = {}

    def depends_on(v: int, t: int, seen: set[int]) -> bool:
        if v == t:
            return True
        if v in seen:
            return False
        seen.add(v)
        step = defs.get(v)
        if step is None:
            return False
        return any(depends_on(i, t, seen) for i in step.inputs)

    changed = True
    while changed:
        changed = False
        for expr in problem.equalities:
            undet = [(index[n], c) for n, c in expr.terms.items()
                     if index[n] not in defs]
            if len(undet) != 1 or abs(undet[0][1]) != 1:
                continue
            t, coef = undet[0]
            inputs = [index[n] for n in expr.terms if index[n] != t]
            if any(depends_on(i, t, set()) for i in inputs):
                continue
            coefs = [expr.terms[n] for n in expr.terms if index[n] != t]
            defs[t] = _Step("equality", t, inputs, coefs, expr.constant, coef)
            changed = True
        for pc in problem.products:
            t = index[pc.result]
            if t in defs:
                continue
            inputs = [index[pc.left], index[pc.right]]
            if any(depends_on(i, t, set()) for i in inputs):
                continue
            defs[t] = _Step("product", t, inputs)
            changed = True

    # topological order: inputs before targets
    ordered: list[_Step] = []
    visited: set[int] = set()

    def visit(t: int) -> None:
        if t in visited:
            return
        visited.add(t)
        step = defs.get(t)
        if step is None:
            return
        for i in step.inputs:
            visit(i)
        ordered.append(step)

    for t in defs:
        visit(t)
    return ordered


@dataclass
class QipEnumeration:
    names: list[str]  # all problem variables, declaration order
    model_names: list[str]
    solutions: set  # tuples over model_names
    free_names: list[str]
    space_size: int
    best_value: int | None = None  # minimal internal objective value
    best_assignment: dict[str, int] | None = None
    full_solutions: set | None = None  # tuples over names, if requested


def enumerate_qip(
    problem: QipProblem, cap: int = DEFAULT_CAP, keep_full: bool = False
) -> QipEnumeration:
    """Exhaustively enumerate the compiled problem.

    Only variables with no substitution rule are enumerated; the cap
    applies to the product of their domain sizes.  Every constraint and
    every domain is still checked on the fully reconstructed rows.
    """
    names = list(problem.vars)
    index = {name: i for i, name in enumerate(names)}
    model_cols = [i for i, n in enumerate(names) if problem.vars[n].is_model]
    steps = _build_substitution(problem)
    determined = {s.target for s in steps}
    free = [i for i in range(len(names)) if i not in determined]

    size = 1
    for i in free:
        size *= len(problem.vars[names[i]].domain)
    if size > cap:
        raise CapExceeded(size, cap)

    n_vars = len(names)
    lows = np.array([problem.vars[n].domain.lo for n in names], dtype=np.int64)
    highs = np.array([problem.vars[n].domain.hi for n in names], dtype=np.int64)

    def dense(exprs):
        coef = np.zeros((len(exprs), n_vars), dtype=np.int64)
        const = np.zeros(len(exprs), dtype=np.int64)
        for i, e in enumerate(exprs):
            for n, c in e.terms.items():
                coef[i, index[n]] = c
            const[i] = e.constant
        return coef, const

    eq_coef, eq_const = dense(problem.equalities)
    ineq_coef, ineq_const = dense(problem.inequalities)
    prod_idx = np.array(
        [[index[p.result], index[p.left], index[p.right]] for p in problem.products],
        dtype=np.int64,
    ).reshape(-1, 3)

    # mixed-radix layout of the free variables (last one fastest)
    sizes = [len(problem.vars[names[i]].domain) for i in free]
    strides = [0] * len(free)
    acc = 1
    for k in range(len(free) - 1, -1, -1):
        strides[k] = acc
        acc *= sizes[k]

    det_cols = sorted(determined)
    obj_vec = np.zeros(n_vars, dtype=np.int64)
    for n, c in problem.objective.terms.items():
        obj_vec[index[n]] = c
    has_obj = bool(problem.objective.terms) or problem.objective_sense == "min"

    result = QipEnumeration(
        names=names,
        model_names=[names[i] for i in model_cols],
        solutions=set(),
        free_names=[names[i] for i in free],
        space_size=size,
        full_solutions=set() if keep_full else None,
    )

    for start in range(0, size, _CHUNK):
        stop = min(start + _CHUNK, size)
        idx = np.arange(start, stop, dtype=np.int64)
        values = np.zeros((stop - start, n_vars), dtype=np.int64)
        for k, col in enumerate(free):
            values[:, col] = idx // strides[k] % sizes[k] + lows[col]
        for step in steps:
            if step.kind == "product":
                values[:, step.target] = (
                    values[:, step.inputs[0]] * values[:, step.inputs[1]]
                )
            else:
                acc_col = np.full(stop - start, step.constant, dtype=np.int64)
                for i, c in zip(step.inputs, step.coefs):
                    acc_col += c * values[:, i]
                values[:, step.target] = -step.sign * acc_col
        mask = kernels.feasible_mask(
            values, eq_coef, eq_const, ineq_coef, ineq_const, prod_idx
        )
        for col in det_cols:
            mask &= (values[:, col] >= lows[col]) & (values[:, col] <= highs[col])
        feas = values[mask]
        if feas.shape[0] == 0:
            continue
        result.solutions.update(map(tuple, feas[:, model_cols].tolist()))
        if keep_full:
            result.full_solutions.update(map(tuple, feas.tolist()))
        if has_obj:
            objs = feas @ obj_vec + problem.objective.constant
            k = int(np.argmin(objs))
            if result.best_value is None or objs[k] < result.best_value:
                result.best_value = int(objs[k])
                result.best_assignment = dict(zip(names, feas[k].tolist()))
    return result


# ----------------------------------------------------------------------
# differential comparison


@dataclass
class EquivalenceResult:
    equal: bool
    fzn_count: int
    qip_count: int
    direction: str = ""  # "fzn-only" | "qip-only"
    witness: dict[str, int] | None = None

    def describe(self) -> str:
        if self.equal:
            return f"Equal ({self.fzn_count} solutions)"
        side = "source model only" if self.direction == "fzn-only" else (
            "compiled problem only"
        )
        w = " ".join(f"{k}={v}" for k, v in sorted(self.witness.items()))
        return (
            f"Counterexample ({side}): {w} "
            f"[{self.fzn_count} vs {self.qip_count} solutions]"
        )


def check_equivalence(
    model: FzModel, problem: QipProblem, cap: int = DEFAULT_CAP
) -> EquivalenceResult:
    """Compare the full solution sets of a model and its compilation."""
    fzn_names, fzn_sols = enumerate_fzn(model, cap)
    qe = enumerate_qip(problem, cap)
    # align the projections on the source variable order
    order = [qe.model_names.index(n) for n in fzn_names]
    qip_sols = {tuple(t[i] for i in order) for t in qe.solutions}
    if fzn_sols == qip_sols:
        return EquivalenceResult(True, len(fzn_sols), len(qip_sols))
    only_fzn = fzn_sols - qip_sols
    if only_fzn:
        combo = min(only_fzn)
        return EquivalenceResult(
            False, len(fzn_sols), len(qip_sols), "fzn-only",
            dict(zip(fzn_names, combo)),
        )
    combo = min(qip_sols - fzn_sols)
    return EquivalenceResult(
        False, len(fzn_sols), len(qip_sols), "qip-only",
        dict(zip(fzn_names, combo)),
    )


@dataclass
class OptimumResult:
    fzn_status: str  # "optimal" | "unsat"
    fzn_value: int | None
    qip_status: str
    qip_value: int | None

    @property
    def agrees(self) -> bool:
        return (self.fzn_status, self.fzn_value) == (self.qip_status, self.qip_value)


def solve_optimum(
    model: FzModel, problem: QipProblem, cap: int = DEFAULT_CAP
) -> OptimumResult:
    """Optimal objective value on both sides (requires an objective)."""
    fzn_names, fzn_sols = enumerate_fzn(model, cap)
    obj_i = fzn_names.index(model.solve.var)
    pick = min if model.solve.kind == "minimize" else max
    fzn_value = pick(t[obj_i] for t in fzn_sols) if fzn_sols else None
    fzn_status = "optimal" if fzn_sols else "unsat"

    qe = enumerate_qip(problem, cap)
    if qe.best_value is None:
        return OptimumResult(fzn_status, fzn_value, "unsat", None)
    value = -qe.best_value if problem.objective_negated else qe.best_value
    return OptimumResult(fzn_status, fzn_value, "optimal", value)
