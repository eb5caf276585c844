"""Translation of FlatZinc builtins into the quadratic normal form.

Each supported builtin becomes a conjunction of linear equalities
(``expr = 0``), linear inequalities (``expr <= 0``) and binary variable
products, with auxiliary variables bounded via the interval formulas in
``bounds``.  Domain restrictions happen in a single pass in model order;
an empty restricted domain proves the model unsatisfiable and aborts
compilation.

Strict inequalities are integer-tightened (``a < b`` becomes
``a - b + 1 <= 0``).  Products of a variable with a constant are always
folded into linear coefficients.  Product constraints are only ever
emitted with a fresh auxiliary result, so operand-before-result
acyclicity holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bounds
from .errors import (
    CompileUnsat,
    EmptyDomain,
    UnsupportedExponent,
)
from .frontend import Arr, ConstraintItem, FzModel, Lit, Ref, SetVal
from .model import BINARY, Domain, LinExpr, QipProblem, QipVar


@dataclass
class RewriteOptions:
    prefer_products: bool = False
    # emit the division system without the zero-numerator indicator
    verbatim_div: bool = False
    # negative-control knobs for the differential-testing suite
    corrupt_div_big_m: bool = False
    corrupt_bool_and: bool = False


def _min0max0(d: Domain) -> Domain:
    """Domain for a product of a binary selector with a variable in d."""
    return Domain(min(0, d.lo), max(0, d.hi))


class RewriteContext:
    """Mutable state threaded through the per-constraint rewrites."""

    def __init__(self, problem: QipProblem, options: RewriteOptions):
        self.problem = problem
        self.options = options
        self.source = ""  # provenance of the constraint being rewritten
        self._const_cache: dict[int, str] = {}

    # -- helpers --------------------------------------------------------

    def var(self, arg) -> str:
        """Variable name for an argument; literals get singleton vars."""
        if isinstance(arg, Ref):
            return arg.name
        if isinstance(arg, Lit):
            v = arg.value
            cached = self._const_cache.get(v)
            if cached is None:
                tag = str(v) if v >= 0 else f"m{-v}"
                cached = self.problem.fresh_var("const", tag, Domain(v, v)).name
                self._const_cache[v] = cached
            return cached
        raise TypeError(f"not a scalar argument: {arg!r}")

    def dom(self, name: str) -> Domain:
        return self.problem.vars[name].domain

    def fresh(self, builtin: str, role: str, domain: Domain) -> str:
        return self.problem.fresh_var(builtin, role, domain).name

    def eq0(self, expr: LinExpr) -> None:
        self.problem.add_equality(expr, self.source)

    def le0(self, expr: LinExpr) -> None:
        self.problem.add_inequality(expr, self.source)

    def product(self, result: str, left: str, right: str) -> None:
        self.problem.add_product(result, left, right, self.source)

    def restrict(self, name: str, d: Domain) -> None:
        self.problem.restrict_domain(name, d)


def _linexpr(terms: list[tuple[str, int]], constant: int = 0) -> LinExpr:
    expr = LinExpr(constant=constant)
    for var, coef in terms:
        expr.add_term(var, coef)
    return expr


def _linear_sum(ctx: RewriteContext, coeffs, args) -> tuple[LinExpr, list[Domain]]:
    """LinExpr of sum(coef*arg) and the per-term domains (literals folded)."""
    expr = LinExpr()
    doms = []
    for coef, arg in zip(coeffs, args):
        if isinstance(arg, Lit):
            expr.add_const(coef.value * arg.value)
            doms.append(Domain(arg.value, arg.value))
        else:
            expr.add_term(arg.name, coef.value)
            doms.append(ctx.dom(arg.name))
    return expr, doms


# ----------------------------------------------------------------------
# shared pieces


def _emit_abs(ctx: RewriteContext, builtin: str, w: str, u_dom: Domain,
              role: str = "u") -> str:
    """Emit ``u = |w|`` (selector product + linear equation); returns u."""
    dw = ctx.dom(w)
    u = ctx.fresh(builtin, role, u_dom)
    sel = ctx.fresh(builtin, role + "c", BINARY)
    pv = ctx.fresh(builtin, role + "p", _min0max0(dw))
    ctx.product(pv, sel, w)
    ctx.eq0(_linexpr([(u, 1), (w, -1), (pv, 2)]))
    return u


def _emit_div(ctx: RewriteContext, builtin: str, n: str, d: str, q: str) -> str:
    """Emit the linearized truncating-division system; returns the
    auxiliary product variable p = d*q."""
    dd = ctx.dom(d)
    if dd.lo == 0 and dd.hi == 0:
        raise EmptyDomain(f"divisor '{d}' is fixed to zero")
    lo = 1 if dd.lo == 0 else dd.lo
    hi = -1 if dd.hi == 0 else dd.hi
    ctx.restrict(d, Domain(lo, hi))
    dd = ctx.dom(d)
    nd = ctx.dom(n)
    qd = ctx.dom(q)
    p_dom = bounds.product_bounds(dd, qd)
    m = bounds.compute_big_m(nd, dd, qd, p_dom)
    if ctx.options.corrupt_div_big_m:
        m -= 1

    p = ctx.fresh(builtin, "p", p_dom)
    alpha = ctx.fresh(builtin, "a", BINARY)
    beta = ctx.fresh(builtin, "b", BINARY)
    gamma = ctx.fresh(builtin, "g", BINARY)
    ctx.product(p, d, q)
    ctx.product(gamma, alpha, beta)

    zeta_active = (0 in nd) and not ctx.options.verbatim_div
    relax = max(m, 1)
    zeta = ctx.fresh(builtin, "z", BINARY) if zeta_active else None

    def ineq(terms: list[tuple[str, int]], constant: int, relaxed: bool) -> None:
        if relaxed and zeta is not None:
            terms = terms + [(zeta, -relax)]
        ctx.le0(_linexpr(terms, constant))

    # numerator and divisor sign selectors
    ineq([(n, -1), (alpha, -(nd.lo - 1))], nd.lo, True)
    ineq([(n, 1), (alpha, -(nd.hi + 1))], 1, True)
    ineq([(d, -1), (beta, -(dd.lo - 1))], dd.lo, False)
    ineq([(d, 1), (beta, -(dd.hi + 1))], 1, False)
    # magnitude cap: d*q between n and n depending on the numerator sign
    ineq([(p, 1), (n, -1), (alpha, m)], -m, False)
    ineq([(n, 1), (p, -1), (alpha, -m)], 0, False)
    # the four quotient cases, switched by the sign selectors
    ineq([(n, 1), (d, -1), (p, -1), (gamma, m)], -m + 1, True)
    ineq([(p, 1), (n, -1), (d, 1), (alpha, -m), (beta, -m), (gamma, m)], 1, True)
    ineq([(n, 1), (d, 1), (p, -1), (alpha, m), (gamma, -m)], -m + 1, True)
    ineq([(p, 1), (n, -1), (d, -1), (beta, m), (gamma, -m)], -m + 1, True)

    if zeta is not None:
        # zero numerator: force q = 0 and deactivate the sign selectors
        mn = max(abs(nd.lo), abs(nd.hi))
        mq = max(abs(qd.lo), abs(qd.hi))
        ctx.le0(_linexpr([(n, 1), (zeta, mn)], -mn))
        ctx.le0(_linexpr([(n, -1), (zeta, mn)], -mn))
        ctx.le0(_linexpr([(q, 1), (zeta, mq)], -mq))
        ctx.le0(_linexpr([(q, -1), (zeta, mq)], -mq))
    return p


# ----------------------------------------------------------------------
# per-builtin rewrites


def _rw_element_const(ctx, item):
    i = ctx.var(item.args[0])
    values = [lit.value for lit in item.args[1].items]
    if not values:
        raise EmptyDomain("element over an empty array")
    i_dom, c_dom = bounds.element_domain_restrict(
        ctx.dom(i), [Domain(v, v) for v in values]
    )
    ctx.restrict(i, i_dom)
    c = ctx.var(item.args[2])
    ctx.restrict(c, c_dom)
    reachable = values[i_dom.lo - 1 : i_dom.hi]
    if item.name == "array_bool_element":
        if all(v == 1 for v in reachable):
            ctx.eq0(_linexpr([(c, 1)], -1))
            return
        if all(v == 0 for v in reachable):
            ctx.eq0(_linexpr([(c, 1)]))
            return
    group = ctx.problem.onehot_get_or_create(i, set(i_dom.values()))
    expr = _linexpr([(c, -1)])
    for j in i_dom.values():
        expr.add_term(group.bit_for(j), values[j - 1])
    ctx.eq0(expr)


def _rw_element_var(ctx, item):
    i = ctx.var(item.args[0])
    elems = [ctx.var(a) for a in item.args[1].items]
    if not elems:
        raise EmptyDomain("element over an empty array")
    i_dom, c_dom = bounds.element_domain_restrict(
        ctx.dom(i), [ctx.dom(e) for e in elems]
    )
    ctx.restrict(i, i_dom)
    c = ctx.var(item.args[2])
    ctx.restrict(c, c_dom)
    group = ctx.problem.onehot_get_or_create(i, set(i_dom.values()))
    expr = _linexpr([(c, -1)])
    for j in i_dom.values():
        elem = elems[j - 1]
        z = ctx.fresh(item.name, f"z{j}", _min0max0(ctx.dom(elem)))
        ctx.product(z, elem, group.bit_for(j))
        expr.add_term(z, 1)
    ctx.eq0(expr)


def _rw_array_minmax(ctx, item):
    mode = "max" if item.name == "array_int_maximum" else "min"
    m = ctx.var(item.args[0])
    xs = [ctx.var(a) for a in item.args[1].items]
    if not xs:
        raise EmptyDomain("extremum of an empty array")
    m_dom, xs_doms = bounds.minmax_domain_restrict(
        ctx.dom(m), [ctx.dom(x) for x in xs], mode
    )
    ctx.restrict(m, m_dom)
    for x, d in zip(xs, xs_doms):
        ctx.restrict(x, d)
    sel_sum = LinExpr(constant=-1)
    m_sum = _linexpr([(m, -1)])
    for j, x in enumerate(xs, start=1):
        b = ctx.fresh(item.name, f"b{j}", BINARY)
        z = ctx.fresh(item.name, f"z{j}", _min0max0(ctx.dom(x)))
        ctx.product(z, x, b)
        sel_sum.add_term(b, 1)
        m_sum.add_term(z, 1)
        if mode == "max":
            ctx.le0(_linexpr([(x, 1), (m, -1)]))
        else:
            ctx.le0(_linexpr([(m, 1), (x, -1)]))
    ctx.eq0(sel_sum)
    ctx.eq0(m_sum)


def _rw_abs(ctx, item):
    x = ctx.var(item.args[0])
    y = ctx.var(item.args[1])
    ctx.restrict(y, bounds.abs_bounds(ctx.dom(x)))
    b = ctx.fresh("int_abs", "b", BINARY)
    z = ctx.fresh("int_abs", "z", _min0max0(ctx.dom(x)))
    ctx.product(z, b, x)
    ctx.eq0(_linexpr([(y, 1), (x, -1), (z, 2)]))


def _rw_div(ctx, item):
    n, d, q = (ctx.var(a) for a in item.args)
    _emit_div(ctx, "int_div", n, d, q)


def _rw_mod(ctx, item):
    n, d, r = (ctx.var(a) for a in item.args)
    nd = ctx.dom(n)
    u = max(abs(nd.lo), abs(nd.hi))
    q = ctx.fresh("int_mod", "q", Domain(-u, u))
    p = _emit_div(ctx, "int_mod", n, d, q)
    ctx.eq0(_linexpr([(p, 1), (r, 1), (n, -1)]))
    dd = ctx.dom(d)  # after endpoint-zero pruning
    ud = max(abs(dd.lo), abs(dd.hi))
    r_lo, r_hi = -(ud - 1), ud - 1
    if nd.lo >= 0:
        r_lo = 0
    if nd.hi <= 0:
        r_hi = 0
    ctx.restrict(r, Domain(r_lo, r_hi))


def _rw_int_eq(ctx, item):
    a, b = (ctx.var(x) for x in item.args[:2])
    ctx.eq0(_linexpr([(a, 1), (b, -1)]))


def _rw_int_le(ctx, item):
    a, b = (ctx.var(x) for x in item.args[:2])
    ctx.le0(_linexpr([(a, 1), (b, -1)]))


def _rw_int_lt(ctx, item):
    a, b = (ctx.var(x) for x in item.args[:2])
    ctx.le0(_linexpr([(a, 1), (b, -1)], 1))


def _rw_int_plus(ctx, item):
    a, b, c = (ctx.var(x) for x in item.args)
    ctx.eq0(_linexpr([(a, 1), (b, 1), (c, -1)]))


def _rw_int_times(ctx, item):
    a, b, c = (ctx.var(x) for x in item.args)
    y = ctx.fresh("int_times", "p", bounds.product_bounds(ctx.dom(a), ctx.dom(b)))
    ctx.product(y, a, b)
    ctx.eq0(_linexpr([(c, 1), (y, -1)]))


def _rw_int_ne(ctx, item):
    a, b = (ctx.var(x) for x in item.args[:2])
    da, db = ctx.dom(a), ctx.dom(b)
    r = ctx.fresh("int_ne", "r", BINARY)
    k1 = da.hi - db.lo + 1
    k2 = db.hi - da.lo + 1
    ctx.le0(_linexpr([(a, 1), (b, -1), (r, -k1)], 1))
    ctx.le0(_linexpr([(b, 1), (a, -1), (r, k2)], 1 - k2))


def _rw_int_le_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    da, db = ctx.dom(a), ctx.dom(b)
    k1 = da.hi - db.lo
    k2 = db.hi - da.lo + 1
    ctx.le0(_linexpr([(a, 1), (b, -1), (r, k1)], -k1))
    ctx.le0(_linexpr([(b, 1), (a, -1), (r, -k2)], 1))


def _rw_int_lt_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    da, db = ctx.dom(a), ctx.dom(b)
    k1 = da.hi - db.lo + 1
    k2 = db.hi - da.lo
    ctx.le0(_linexpr([(a, 1), (b, -1), (r, k1)], 1 - k1))
    ctx.le0(_linexpr([(b, 1), (a, -1), (r, -k2)]))


def _rw_int_eq_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    da, db = ctx.dom(a), ctx.dom(b)
    x = ctx.fresh("int_eq_reif", "x", _min0max0(da))
    y = ctx.fresh("int_eq_reif", "y", _min0max0(db))
    ctx.product(x, r, a)
    ctx.product(y, r, b)
    ctx.eq0(_linexpr([(x, 1), (y, -1)]))
    # difference channel: r = 0 forces |a - b| >= 1
    w = ctx.fresh("int_eq_reif", "w", Domain(da.lo - db.hi, da.hi - db.lo))
    ctx.eq0(_linexpr([(w, 1), (a, -1), (b, 1)]))
    u = _emit_abs(ctx, "int_eq_reif", w, bounds.abs_bounds(ctx.dom(w)))
    s = ctx.fresh("int_eq_reif", "s", _min0max0(ctx.dom(u)))
    ctx.product(s, r, u)
    ctx.le0(_linexpr([(s, 1), (u, -1), (r, -1)], 1))


def _rw_int_ne_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    da, db = ctx.dom(a), ctx.dom(b)
    z_dom = Domain(da.lo - db.hi, da.hi - db.lo)
    z = ctx.fresh("int_ne_reif", "z", z_dom)
    ctx.eq0(_linexpr([(z, 1), (a, -1), (b, 1)]))
    y = ctx.fresh("int_ne_reif", "y", _min0max0(z_dom))
    ctx.product(y, r, z)
    ctx.eq0(_linexpr([(z, 1), (y, -1)]))
    u_dom = Domain(0 if z_dom.lo <= 0 else z_dom.lo,
                   max(abs(z_dom.lo), abs(z_dom.hi)))
    u = _emit_abs(ctx, "int_ne_reif", z, u_dom)
    w = ctx.fresh("int_ne_reif", "w", _min0max0(u_dom))
    ctx.product(w, r, u)
    ctx.le0(_linexpr([(r, 1), (w, -1)]))


def _rw_int_linear(ctx, item):
    expr, _doms = _linear_sum(ctx, item.args[0].items, item.args[1].items)
    expr.add_const(-item.args[2].value)
    if item.name == "int_lin_eq":
        ctx.eq0(expr)
    else:
        ctx.le0(expr)


def _rw_bool_lin_eq(ctx, item):
    expr, _doms = _linear_sum(ctx, item.args[0].items, item.args[1].items)
    expr.add_term(ctx.var(item.args[2]), -1)
    ctx.eq0(expr)


def _rw_int_lin_ne(ctx, item):
    coeffs = [c.value for c in item.args[0].items]
    expr, doms = _linear_sum(ctx, item.args[0].items, item.args[1].items)
    c = item.args[2].value
    expr.add_const(-c)
    x_dom = bounds.lin_bounds(coeffs, doms, c)
    x = ctx.fresh("int_lin_ne", "x", x_dom)
    expr.add_term(x, -1)
    ctx.eq0(expr)
    au = bounds.abs_bounds(x_dom)
    u_dom = Domain(max(1, au.lo), au.hi)  # lower bound 1 encodes "is nonzero"
    _emit_abs(ctx, "int_lin_ne", x, u_dom)


def _lin_aux(ctx, item, builtin: str) -> tuple[str, Domain]:
    """Auxiliary x = sum(as*bs) - c with its exact bounds."""
    coeffs = [c.value for c in item.args[0].items]
    expr, doms = _linear_sum(ctx, item.args[0].items, item.args[1].items)
    c = item.args[2].value
    expr.add_const(-c)
    x_dom = bounds.lin_bounds(coeffs, doms, c)
    x = ctx.fresh(builtin, "x", x_dom)
    expr.add_term(x, -1)
    ctx.eq0(expr)
    return x, x_dom


def _rw_int_lin_eq_reif(ctx, item):
    r = ctx.var(item.args[3])
    x, x_dom = _lin_aux(ctx, item, "int_lin_eq_reif")
    u = _emit_abs(ctx, "int_lin_eq_reif", x, bounds.abs_bounds(x_dom))
    k = max(abs(x_dom.lo), abs(x_dom.hi))
    ctx.le0(_linexpr([(u, 1), (r, k)], -k))
    ctx.le0(_linexpr([(r, -1), (u, -1)], 1))


def _rw_int_lin_le_reif(ctx, item):
    r = ctx.var(item.args[3])
    x, x_dom = _lin_aux(ctx, item, "int_lin_le_reif")
    ctx.le0(_linexpr([(x, 1), (r, x_dom.hi)], -x_dom.hi))
    ctx.le0(_linexpr([(x, -1), (r, x_dom.lo - 1)], 1))


def _rw_int_lin_ne_reif(ctx, item):
    r = ctx.var(item.args[3])
    x, x_dom = _lin_aux(ctx, item, "int_lin_ne_reif")
    y = ctx.fresh("int_lin_ne_reif", "y", _min0max0(x_dom))
    ctx.product(y, r, x)
    ctx.eq0(_linexpr([(x, 1), (y, -1)]))
    u_dom = Domain(0 if x_dom.lo <= 0 else x_dom.lo,
                   max(abs(x_dom.lo), abs(x_dom.hi)))
    u = _emit_abs(ctx, "int_lin_ne_reif", x, u_dom)
    z = ctx.fresh("int_lin_ne_reif", "z", _min0max0(u_dom))
    ctx.product(z, r, u)
    ctx.le0(_linexpr([(r, 1), (z, -1)]))


def _rw_int_minmax(ctx, item):
    a, b, c = (ctx.var(x) for x in item.args)
    da, db, dc = ctx.dom(a), ctx.dom(b), ctx.dom(c)
    r = ctx.fresh(item.name, "r", BINARY)
    if item.name == "int_max":
        ctx.le0(_linexpr([(a, 1), (c, -1)]))
        ctx.le0(_linexpr([(b, 1), (c, -1)]))
        k1 = dc.hi - da.lo
        k2 = dc.hi - db.lo
        ctx.le0(_linexpr([(c, 1), (a, -1), (r, -k1)]))
        ctx.le0(_linexpr([(c, 1), (b, -1), (r, k2)], -k2))
    else:
        ctx.le0(_linexpr([(c, 1), (a, -1)]))
        ctx.le0(_linexpr([(c, 1), (b, -1)]))
        k1 = da.hi - dc.lo
        k2 = db.hi - dc.lo
        ctx.le0(_linexpr([(a, 1), (c, -1), (r, -k1)]))
        ctx.le0(_linexpr([(b, 1), (c, -1), (r, k2)], -k2))


def _rw_int_pow(ctx, item):
    x = ctx.var(item.args[0])
    y = item.args[1]
    z = ctx.var(item.args[2])
    if isinstance(y, Lit):
        n = y.value
    else:
        yd = ctx.dom(y.name)
        if yd.lo != yd.hi:
            raise UnsupportedExponent("exponent must be a fixed value")
        n = yd.lo
    if n < 0:
        raise UnsupportedExponent(f"negative exponent {n}")
    if n == 0:
        ctx.eq0(_linexpr([(z, 1)], -1))
        return

    def power(k: int) -> str:
        if k == 1:
            return x
        if k % 2 == 0:
            u = power(k // 2)
            du = ctx.dom(u)
            res = ctx.fresh("int_pow", f"e{k}", bounds.product_bounds(du, du))
            ctx.product(res, u, u)
        else:
            u = power(k // 2)
            du = ctx.dom(u)
            v = ctx.fresh("int_pow", f"e{k - 1}", bounds.product_bounds(du, du))
            ctx.product(v, u, u)
            res = ctx.fresh(
                "int_pow", f"e{k}", bounds.product_bounds(ctx.dom(x), ctx.dom(v))
            )
            ctx.product(res, x, v)
        return res

    w = power(n)
    ctx.eq0(_linexpr([(z, 1), (w, -1)]))


def _rw_bool2int(ctx, item):
    a, b = (ctx.var(x) for x in item.args)
    ctx.eq0(_linexpr([(a, 1), (b, -1)]))


def _rw_bool_lt(ctx, item):
    a, b = (ctx.var(x) for x in item.args)
    ctx.eq0(_linexpr([(a, 1)]))
    ctx.eq0(_linexpr([(b, 1)], -1))


def _rw_bool_not(ctx, item):
    a, b = (ctx.var(x) for x in item.args)
    ctx.eq0(_linexpr([(a, 1), (b, 1)], -1))


def _rw_array_bool_and(ctx, item):
    elems = [ctx.var(a) for a in item.args[0].items]
    r = ctx.var(item.args[1])
    if not elems:
        ctx.eq0(_linexpr([(r, 1)], -1))  # empty conjunction is true
        return
    for e in elems:
        ctx.le0(_linexpr([(r, 1), (e, -1)]))
    if not ctx.options.corrupt_bool_and:
        lower = _linexpr([(r, -1)], 1 - len(elems))
        for e in elems:
            lower.add_term(e, 1)
        ctx.le0(lower)


def _rw_array_bool_xor(ctx, item):
    expr = LinExpr(constant=-1)
    for a in item.args[0].items:
        if isinstance(a, Lit):
            expr.add_const(a.value)
        else:
            expr.add_term(a.name, 1)
    ctx.eq0(expr)


def _rw_bool_and(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    if ctx.options.prefer_products:
        y = ctx.fresh("bool_and", "p", BINARY)
        ctx.product(y, a, b)
        ctx.eq0(_linexpr([(r, 1), (y, -1)]))
        return
    ctx.le0(_linexpr([(r, 1), (a, -1)]))
    ctx.le0(_linexpr([(r, 1), (b, -1)]))
    ctx.le0(_linexpr([(a, 1), (b, 1), (r, -1)], -1))


def _rw_bool_clause(ctx, item):
    pos = [ctx.var(a) for a in item.args[0].items]
    neg = [ctx.var(a) for a in item.args[1].items]
    expr = LinExpr(constant=1 - len(neg))
    for v in pos:
        expr.add_term(v, -1)
    for v in neg:
        expr.add_term(v, 1)
    ctx.le0(expr)


def _rw_bool_or(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    ctx.le0(_linexpr([(r, 1), (a, -1), (b, -1)]))
    ctx.le0(_linexpr([(a, 1), (b, 1), (r, -2)]))


def _rw_bool_xor(ctx, item):
    if len(item.args) == 2:
        a, b = (ctx.var(x) for x in item.args)
        ctx.eq0(_linexpr([(a, 1), (b, 1)], -1))
        return
    a, b, r = (ctx.var(x) for x in item.args)
    x = ctx.fresh("bool_xor", "x", BINARY)
    y = ctx.fresh("bool_xor", "y", BINARY)
    ctx.product(x, r, a)
    ctx.product(y, r, b)
    ctx.eq0(_linexpr([(a, 1), (x, -1), (b, -1), (y, 1)]))
    ctx.eq0(_linexpr([(x, 1), (y, 1), (r, -1)]))


def _rw_bool_eq_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    x = ctx.fresh("bool_eq_reif", "x", BINARY)
    y = ctx.fresh("bool_eq_reif", "y", BINARY)
    ctx.product(x, r, a)
    ctx.product(y, r, b)
    ctx.eq0(_linexpr([(x, 1), (y, -1)]))
    # (1 - r) = (1 - r)(a + b), expanded over the products above
    ctx.eq0(_linexpr([(a, 1), (b, 1), (x, -1), (y, -1), (r, 1)], -1))


def _rw_bool_le_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    ctx.le0(_linexpr([(a, 1), (b, -1), (r, 1)], -1))
    ctx.le0(_linexpr([(b, 1), (a, -1), (r, -2)], 1))


def _rw_bool_lt_reif(ctx, item):
    a, b, r = (ctx.var(x) for x in item.args)
    if ctx.options.prefer_products:
        t = ctx.fresh("bool_lt_reif", "t", BINARY)
        ctx.product(t, a, b)
        ctx.eq0(_linexpr([(r, 1), (b, -1), (t, 1)]))
        return
    ctx.le0(_linexpr([(a, 1), (b, -1), (r, 2)], -1))
    ctx.le0(_linexpr([(b, 1), (a, -1), (r, -1)]))


def _rw_set_in(ctx, item):
    x = ctx.var(item.args[0])
    values = set(item.args[1].values) & set(ctx.dom(x).values())
    if not values:
        raise EmptyDomain(f"'{x}' cannot take any value of the set")
    group = ctx.problem.onehot_get_or_create(x, values)
    # membership equality of our own, robust to later group extension
    expr = LinExpr(constant=-1)
    for v in sorted(values):
        expr.add_term(group.bit_for(v), 1)
    ctx.eq0(expr)


def _rw_set_in_reif(ctx, item):
    x = ctx.var(item.args[0])
    r = ctx.var(item.args[2])
    d = ctx.dom(x)
    group = ctx.problem.onehot_get_or_create(x, set(d.values()))
    expr = _linexpr([(r, 1)])
    for v in sorted(set(item.args[1].values) & set(d.values())):
        expr.add_term(group.bit_for(v), -1)
    ctx.eq0(expr)


_DISPATCH = {
    "array_bool_and": _rw_array_bool_and,
    "array_bool_element": _rw_element_const,
    "array_bool_xor": _rw_array_bool_xor,
    "array_int_element": _rw_element_const,
    "array_int_maximum": _rw_array_minmax,
    "array_int_minimum": _rw_array_minmax,
    "array_var_bool_element": _rw_element_var,
    "array_var_int_element": _rw_element_var,
    "bool2int": _rw_bool2int,
    "bool_and": _rw_bool_and,
    "bool_clause": _rw_bool_clause,
    "bool_eq": _rw_int_eq,
    "bool_eq_reif": _rw_bool_eq_reif,
    "bool_le": _rw_int_le,
    "bool_le_reif": _rw_bool_le_reif,
    "bool_lin_eq": _rw_bool_lin_eq,
    "bool_lin_le": _rw_int_linear,
    "bool_lt": _rw_bool_lt,
    "bool_lt_reif": _rw_bool_lt_reif,
    "bool_not": _rw_bool_not,
    "bool_or": _rw_bool_or,
    "bool_xor": _rw_bool_xor,
    "int_abs": _rw_abs,
    "int_div": _rw_div,
    "int_eq": _rw_int_eq,
    "int_eq_reif": _rw_int_eq_reif,
    "int_le": _rw_int_le,
    "int_le_reif": _rw_int_le_reif,
    "int_lin_eq": _rw_int_linear,
    "int_lin_eq_reif": _rw_int_lin_eq_reif,
    "int_lin_le": _rw_int_linear,
    "int_lin_le_reif": _rw_int_lin_le_reif,
    "int_lin_ne": _rw_int_lin_ne,
    "int_lin_ne_reif": _rw_int_lin_ne_reif,
    "int_lt": _rw_int_lt,
    "int_lt_reif": _rw_int_lt_reif,
    "int_max": _rw_int_minmax,
    "int_min": _rw_int_minmax,
    "int_mod": _rw_mod,
    "int_ne": _rw_int_ne,
    "int_ne_reif": _rw_int_ne_reif,
    "int_plus": _rw_int_plus,
    "int_pow": _rw_int_pow,
    "int_times": _rw_int_times,
    "set_in": _rw_set_in,
    "set_in_reif": _rw_set_in_reif,
}


def compile_model(model: FzModel, options: RewriteOptions | None = None) -> QipProblem:
    """Compile a checked model into a validated problem.

    Raises CompileUnsat when a domain restriction proves infeasibility.
    """
    options = options or RewriteOptions()
    prob = QipProblem()
    for decl in model.vars.values():
        prob.add_var(QipVar(decl.name, decl.domain))
    ctx = RewriteContext(prob, options)
    for idx, item in enumerate(model.constraints):
        ctx.source = f"{item.name}#{idx}"
        try:
            _DISPATCH[item.name](ctx, item)
        except EmptyDomain as exc:
            raise CompileUnsat(
                f"constraint {ctx.source} is unsatisfiable: {exc.message}",
                ctx.source,
            ) from exc
    if model.solve.kind == "minimize":
        prob.objective_sense = "min"
        prob.objective = _linexpr([(model.solve.var, 1)])
    elif model.solve.kind == "maximize":
        prob.objective_sense = "min"
        prob.objective_negated = True
        prob.objective = _linexpr([(model.solve.var, -1)])
    violations = prob.validate()
    if violations:
        raise AssertionError(f"internal error, invalid output: {violations}")
    return prob
