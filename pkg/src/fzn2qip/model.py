"""The quadratic integer program normal form.

A problem is a linear objective plus three kinds of constraints over
bounded integer variables:

* equalities, each stored as a linear form that must equal 0,
* inequalities, each stored as a linear form that must be <= 0,
* products ``result = left * right`` where both operands are declared
  strictly before the result (acyclicity).

Integer variables may additionally own a one-hot bit group: a set of
binary indicator variables, one per value, tied to the variable by the
equality pair ``sum(bits) = 1`` and ``var = sum(value * bit)``.  Exactly
one group per variable exists; requests for different value sets extend
the existing group to the union and re-derive the pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    EmptyDomain,
    SchemaError,
    ValueOutOfDomain,
    checked_int,
)


@dataclass(frozen=True)
class Domain:
    """Nonempty closed integer interval [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise EmptyDomain(f"empty domain [{self.lo}, {self.hi}]")
        checked_int(self.lo)
        checked_int(self.hi)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def values(self) -> range:
        return range(self.lo, self.hi + 1)

    def intersect(self, other: "Domain") -> "Domain":
        return Domain(max(self.lo, other.lo), min(self.hi, other.hi))


BINARY = Domain(0, 1)


@dataclass
class AuxOrigin:
    builtin: str
    ordinal: int
    role: str


@dataclass
class QipVar:
    """A problem variable; ``declared`` keeps the pre-restriction domain."""

    name: str
    domain: Domain
    origin: AuxOrigin | None = None  # None means a model variable
    declared: Domain = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.declared is None:
            self.declared = self.domain

    @property
    def is_model(self) -> bool:
        return self.origin is None


class LinExpr:
    """Integer-coefficient linear form ``sum(coef * var) + constant``.

    Zero coefficients are never stored; term order is canonicalized (by
    variable name) only at serialization time.
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms: dict[str, int] | None = None, constant: int = 0):
        self.terms: dict[str, int] = {}
        if terms:
            for var, coef in terms.items():
                self.add_term(var, coef)
        self.constant = checked_int(constant)

    def add_term(self, var: str, coef: int) -> "LinExpr":
        if coef:
            new = checked_int(self.terms.get(var, 0) + coef)
            if new:
                self.terms[var] = new
            else:
                self.terms.pop(var, None)
        return self

    def add_const(self, value: int) -> "LinExpr":
        self.constant = checked_int(self.constant + value)
        return self

    def sorted_terms(self) -> list[tuple[str, int]]:
        return sorted(self.terms.items())

    def evaluate(self, assignment: dict[str, int]) -> int:
        return sum(c * assignment[v] for v, c in self.terms.items()) + self.constant

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinExpr)
            and self.terms == other.terms
            and self.constant == other.constant
        )

    def __repr__(self) -> str:
        parts = [f"{c:+d}*{v}" for v, c in self.sorted_terms()]
        parts.append(f"{self.constant:+d}")
        return " ".join(parts)


@dataclass
class ProductConstraint:
    """result = left * right."""

    result: str
    left: str
    right: str


@dataclass
class OneHotGroup:
    """Binding of an integer variable to its indicator bits."""

    int_var: str
    bits: list[tuple[str, int]] = field(default_factory=list)

    def bit_for(self, value: int) -> str:
        for name, v in self.bits:
            if v == value:
                return name
        raise KeyError(value)

    def values(self) -> set[int]:
        return {v for _, v in self.bits}


class QipProblem:
    """A problem under construction or a finished, validated problem."""

    def __init__(self):
        self.vars: dict[str, QipVar] = {}
        self.objective_sense: str = "satisfy"  # "satisfy" | "min"
        self.objective_negated: bool = False
        self.objective: LinExpr = LinExpr()
        self.equalities: list[LinExpr] = []
        self.inequalities: list[LinExpr] = []
        self.products: list[ProductConstraint] = []
        self.onehot_groups: list[OneHotGroup] = []
        # provenance strings, aligned with the three constraint lists
        self.equality_sources: list[str] = []
        self.inequality_sources: list[str] = []
        self.product_sources: list[str] = []
        self._fresh_counters: dict[tuple[str, str], int] = {}
        # one-hot registry: int var -> (group, index of the two pair equalities)
        self._onehot_index: dict[str, tuple[OneHotGroup, int, int]] = {}

    # ------------------------------------------------------------------
    # construction

    def add_var(self, var: QipVar) -> QipVar:
        if var.name in self.vars:
            raise ValueError(f"duplicate variable '{var.name}'")
        self.vars[var.name] = var
        return var

    def fresh_var(self, builtin: str, role: str, domain: Domain) -> QipVar:
        """Create a deterministically named auxiliary variable.

        The name is ``__<builtin>_<k>_<role>`` where k counts prior
        fresh variables with the same builtin and role.
        """
        key = (builtin, role)
        k = self._fresh_counters.get(key, 0) + 1
        self._fresh_counters[key] = k
        name = f"__{builtin}_{k}_{role}"
        return self.add_var(QipVar(name, domain, AuxOrigin(builtin, k, role)))

    def restrict_domain(self, name: str, new: Domain) -> None:
        var = self.vars[name]
        var.domain = var.domain.intersect(new)

    def add_equality(self, expr: LinExpr, source: str = "") -> None:
        self.equalities.append(expr)
        self.equality_sources.append(source)

    def add_inequality(self, expr: LinExpr, source: str = "") -> None:
        self.inequalities.append(expr)
        self.inequality_sources.append(source)

    def add_product(self, result: str, left: str, right: str, source: str = "") -> None:
        self.products.append(ProductConstraint(result, left, right))
        self.product_sources.append(source)

    # ------------------------------------------------------------------
    # one-hot registry

    def onehot_get_or_create(self, int_var: str, values: set[int]) -> OneHotGroup:
        """Return the variable's one-hot group covering ``values``.

        The first request creates the group and emits the defining
        equality pair.  A request for a subset of the stored values is a
        cache hit; a request introducing new values extends the group to
        the union and rewrites the pair in place, so exactly one
        encoding per variable ever exists.
        """
        if not values:
            raise ValueOutOfDomain("one-hot over an empty value set")
        var = self.vars[int_var]
        out = [v for v in values if v not in var.declared]
        if out:
            raise ValueOutOfDomain(
                f"values {sorted(out)} outside declared domain of '{int_var}'"
            )
        cached = self._onehot_index.get(int_var)
        if cached is None:
            group = OneHotGroup(int_var)
            for v in sorted(values):
                bit = self.fresh_var("onehot", f"{int_var}_{_vtag(v)}", BINARY)
                group.bits.append((bit.name, v))
            self.onehot_groups.append(group)
            i_sum = len(self.equalities)
            self.add_equality(self._onehot_sum(group), f"onehot:{int_var}")
            i_val = len(self.equalities)
            self.add_equality(self._onehot_value(group), f"onehot:{int_var}")
            self._onehot_index[int_var] = (group, i_sum, i_val)
            return group
        group, i_sum, i_val = cached
        new = sorted(values - group.values())
        if new:
            for v in new:
                bit = self.fresh_var("onehot", f"{int_var}_{_vtag(v)}", BINARY)
                group.bits.append((bit.name, v))
            group.bits.sort(key=lambda bv: bv[1])
            self.equalities[i_sum] = self._onehot_sum(group)
            self.equalities[i_val] = self._onehot_value(group)
        return group

    @staticmethod
    def _onehot_sum(group: OneHotGroup) -> LinExpr:
        expr = LinExpr(constant=-1)
        for bit, _ in group.bits:
            expr.add_term(bit, 1)
        return expr

    @staticmethod
    def _onehot_value(group: OneHotGroup) -> LinExpr:
        expr = LinExpr({group.int_var: -1})
        for bit, v in group.bits:
            expr.add_term(bit, v)
        return expr

    # ------------------------------------------------------------------
    # validation

    def validate(self) -> list[str]:
        """Return descriptions of every broken invariant (empty if ok)."""
        violations: list[str] = []
        order = {name: i for i, name in enumerate(self.vars)}

        def check_expr(expr: LinExpr, where: str) -> None:
            for v, c in expr.terms.items():
                if v not in order:
                    violations.append(f"{where}: undeclared variable '{v}'")
                if c == 0:
                    violations.append(f"{where}: non-canonical expr (zero coefficient)")

        for i, e in enumerate(self.equalities):
            check_expr(e, f"equality[{i}]")
        for i, e in enumerate(self.inequalities):
            check_expr(e, f"inequality[{i}]")
        check_expr(self.objective, "objective")
        for i, p in enumerate(self.products):
            for v in (p.result, p.left, p.right):
                if v not in order:
                    violations.append(f"product[{i}]: undeclared variable '{v}'")
            if p.result in order and p.left in order and p.right in order:
                if order[p.left] >= order[p.result] or order[p.right] >= order[p.result]:
                    violations.append(
                        f"product[{i}]: product-order ({p.result} = {p.left}*{p.right})"
                    )
        owners = set()
        for g in self.onehot_groups:
            if g.int_var in owners:
                violations.append(f"one-hot: variable '{g.int_var}' owns two groups")
            owners.add(g.int_var)
            seen_values = set()
            for bit, v in g.bits:
                if bit not in order:
                    violations.append(f"one-hot({g.int_var}): undeclared bit '{bit}'")
                elif self.vars[bit].domain != BINARY:
                    violations.append(f"one-hot({g.int_var}): bit '{bit}' not binary")
                if v in seen_values:
                    violations.append(f"one-hot({g.int_var}): duplicate value {v}")
                seen_values.add(v)
                if g.int_var in order and v not in self.vars[g.int_var].declared:
                    violations.append(
                        f"one-hot({g.int_var}): value {v} outside declared domain"
                    )
        return violations

    # ------------------------------------------------------------------
    # serialization

    def to_json_obj(self) -> dict:
        def expr_obj(e: LinExpr) -> dict:
            return {
                "terms": [{"var": v, "coef": c} for v, c in e.sorted_terms()],
                "constant": e.constant,
            }

        variables = []
        for v in self.vars.values():
            origin = (
                "model"
                if v.origin is None
                else {
                    "builtin": v.origin.builtin,
                    "ordinal": v.origin.ordinal,
                    "role": v.origin.role,
                }
            )
            variables.append(
                {
                    "name": v.name,
                    "lo": v.domain.lo,
                    "hi": v.domain.hi,
                    "declared_lo": v.declared.lo,
                    "declared_hi": v.declared.hi,
                    "origin": origin,
                }
            )
        return {
            "variables": variables,
            "objective": {
                "sense": self.objective_sense,
                "negated": self.objective_negated,
                "terms": expr_obj(self.objective)["terms"],
                "constant": self.objective.constant,
            },
            "equalities": [expr_obj(e) for e in self.equalities],
            "inequalities": [expr_obj(e) for e in self.inequalities],
            "products": [
                {"result": p.result, "left": p.left, "right": p.right}
                for p in self.products
            ],
            "onehot_groups": [
                {
                    "int_var": g.int_var,
                    "bits": [{"var": b, "value": v} for b, v in g.bits],
                }
                for g in self.onehot_groups
            ],
            "meta": {
                "equality_sources": self.equality_sources,
                "inequality_sources": self.inequality_sources,
                "product_sources": self.product_sources,
            },
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1) + "\n"


def deserialize(text: str) -> QipProblem:
    """Parse serialized problem text; raises SchemaError on bad input."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    for key in ("variables", "objective", "equalities", "inequalities",
                "products", "onehot_groups", "meta"):
        if key not in obj:
            raise SchemaError(f"missing top-level key '{key}'")

    prob = QipProblem()

    def read_expr(e, where: str) -> LinExpr:
        try:
            expr = LinExpr(constant=int(e["constant"]))
            for t in e["terms"]:
                expr.add_term(str(t["var"]), int(t["coef"]))
            return expr
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed {where}: {exc}") from exc

    try:
        for v in obj["variables"]:
            origin = v["origin"]
            aux = (
                None
                if origin == "model"
                else AuxOrigin(str(origin["builtin"]), int(origin["ordinal"]),
                               str(origin["role"]))
            )
            var = QipVar(str(v["name"]), Domain(int(v["lo"]), int(v["hi"])), aux)
            var.declared = Domain(int(v["declared_lo"]), int(v["declared_hi"]))
            prob.add_var(var)
        objective = obj["objective"]
        prob.objective_sense = str(objective["sense"])
        if prob.objective_sense not in ("satisfy", "min"):
            raise SchemaError(f"bad objective sense '{prob.objective_sense}'")
        prob.objective_negated = bool(objective["negated"])
        prob.objective = read_expr(objective, "objective")
        for e in obj["equalities"]:
            prob.equalities.append(read_expr(e, "equality"))
        for e in obj["inequalities"]:
            prob.inequalities.append(read_expr(e, "inequality"))
        for p in obj["products"]:
            prob.products.append(
                ProductConstraint(str(p["result"]), str(p["left"]), str(p["right"]))
            )
        for g in obj["onehot_groups"]:
            group = OneHotGroup(str(g["int_var"]))
            for b in g["bits"]:
                group.bits.append((str(b["var"]), int(b["value"])))
            prob.onehot_groups.append(group)
        meta = obj["meta"]
        prob.equality_sources = [str(s) for s in meta.get("equality_sources", [])]
        prob.inequality_sources = [str(s) for s in meta.get("inequality_sources", [])]
        prob.product_sources = [str(s) for s in meta.get("product_sources", [])]
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, EmptyDomain) as exc:
        raise SchemaError(f"malformed document: {exc}") from exc
    prob.equality_sources += [""] * (len(prob.equalities) - len(prob.equality_sources))
    prob.inequality_sources += [""] * (
        len(prob.inequalities) - len(prob.inequality_sources)
    )
    prob.product_sources += [""] * (len(prob.products) - len(prob.product_sources))
    return prob


def _vtag(value: int) -> str:
    # negative values in names use an 'm' prefix ('-' would be unreadable)
    return str(value) if value >= 0 else f"m{-value}"
