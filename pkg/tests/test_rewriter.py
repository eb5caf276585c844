"""Per-builtin rewrite behavior on pinned reference instances.

Feasible sets below were derived independently by brute-force
enumeration of the builtin's direct semantics and are asserted as
frozen values; structural expectations (counts of products, bits)
follow from the documented encodings.
"""

import pytest

from fzn2qip.errors import CompileUnsat, UnsupportedExponent
from fzn2qip.frontend import parse_model, typecheck
from fzn2qip.model import Domain
from fzn2qip.oracle import enumerate_qip
from fzn2qip.rewrite import RewriteOptions, compile_model


def compile_src(src, **kw):
    model = typecheck(parse_model(src))
    return model, compile_model(model, RewriteOptions(**kw))


def solutions(problem, *names):
    enum = enumerate_qip(problem)
    idx = [enum.model_names.index(n) for n in names]
    return {tuple(t[i] for i in idx) for t in enum.solutions}


def test_int_ne_reference():
    _, p = compile_src("""
        var 1..3: a;
        var 1..3: b;
        constraint int_ne(a, b);
        solve satisfy;
    """)
    got = solutions(p, "a", "b")
    assert got == {(a, b) for a in (1, 2, 3) for b in (1, 2, 3) if a != b}
    assert len(got) == 6


def test_int_le_reif_truth_table():
    _, p = compile_src("""
        var 0..2: a;
        var 0..2: b;
        var bool: r;
        constraint int_le_reif(a, b, r);
        solve satisfy;
    """)
    got = solutions(p, "a", "b", "r")
    assert got == {(a, b, int(a <= b)) for a in range(3) for b in range(3)}


def test_int_eq_reif_four_points():
    _, p = compile_src("""
        var 0..1: a;
        var 0..1: b;
        var bool: r;
        constraint int_eq_reif(a, b, r);
        solve satisfy;
    """)
    got = solutions(p, "a", "b", "r")
    assert got == {(a, b, int(a == b)) for a in (0, 1) for b in (0, 1)}


def test_int_lin_ne_mixed_sign_feasible_set():
    _, p = compile_src("""
        var 0..4: x;
        constraint int_lin_ne([1], [x], 2);
        solve satisfy;
    """)
    assert solutions(p, "x") == {(0,), (1,), (3,), (4,)}


def test_int_lin_le_reif_truth_table():
    _, p = compile_src("""
        var 0..3: x;
        var bool: r;
        constraint int_lin_le_reif([1], [x], 1, r);
        solve satisfy;
    """)
    assert solutions(p, "x", "r") == {(x, int(x <= 1)) for x in range(4)}


def test_int_lin_eq_reif_truth_table():
    _, p = compile_src("""
        var -1..1: x;
        var bool: r;
        constraint int_lin_eq_reif([1], [x], 0, r);
        solve satisfy;
    """)
    assert solutions(p, "x", "r") == {(x, int(x == 0)) for x in (-1, 0, 1)}


def test_int_lin_ne_reif_truth_table():
    _, p = compile_src("""
        var 0..2: x;
        var 0..2: y;
        var bool: r;
        constraint int_lin_ne_reif([1, 1], [x, y], 2, r);
        solve satisfy;
    """)
    assert solutions(p, "x", "y", "r") == {
        (x, y, int(x + y != 2)) for x in range(3) for y in range(3)
    }


def test_int_abs_restricts_result_domain():
    _, p = compile_src("""
        var -2..3: x;
        var -5..5: y;
        constraint int_abs(x, y);
        solve satisfy;
    """)
    assert p.vars["y"].domain == Domain(0, 3)
    assert solutions(p, "x", "y") == {(x, abs(x)) for x in range(-2, 4)}


def test_int_div_positive_and_negative():
    _, p = compile_src("""
        var 1..3: n;
        var 1..2: d;
        var 0..3: q;
        constraint int_div(n, d, q);
        solve satisfy;
    """)
    assert (3, 2, 1) in solutions(p, "n", "d", "q")
    _, p = compile_src("""
        var -3..-1: n;
        var 1..2: d;
        var -3..3: q;
        constraint int_div(n, d, q);
        solve satisfy;
    """)
    assert (-3, 2, -1) in solutions(p, "n", "d", "q")


def test_int_div_divisor_fixed_zero_is_unsat():
    with pytest.raises(CompileUnsat):
        compile_src("""
            var 0..3: n;
            var 0..0: d;
            var 0..3: q;
            constraint int_div(n, d, q);
            solve satisfy;
        """)


def test_int_div_endpoint_zero_pruned():
    _, p = compile_src("""
        var 1..3: n;
        var 0..2: d;
        var 0..3: q;
        constraint int_div(n, d, q);
        solve satisfy;
    """)
    assert p.vars["d"].domain == Domain(1, 2)


def test_int_mod_restricts_remainder():
    _, p = compile_src("""
        var 0..5: n;
        var 2..2: d;
        var -9..9: r;
        constraint int_mod(n, d, r);
        solve satisfy;
    """)
    assert p.vars["r"].domain == Domain(0, 1)
    assert (5, 2, 1) in solutions(p, "n", "d", "r")
    _, p = compile_src("""
        var -3..0: n;
        var 2..2: d;
        var -9..9: r;
        constraint int_mod(n, d, r);
        solve satisfy;
    """)
    assert p.vars["r"].domain == Domain(-1, 0)
    assert (-3, 2, -1) in solutions(p, "n", "d", "r")


def test_int_pow_structure():
    _, p5 = compile_src("""
        var -2..2: x;
        var -32..32: z;
        constraint int_pow(x, 5, z);
        solve satisfy;
    """)
    assert len(p5.products) == 3
    assert solutions(p5, "x", "z") == {(x, x ** 5) for x in range(-2, 3)}
    _, p8 = compile_src("""
        var -2..2: x;
        var 0..256: z;
        constraint int_pow(x, 8, z);
        solve satisfy;
    """)
    assert len(p8.products) == 3
    assert solutions(p8, "x", "z") == {(x, x ** 8) for x in range(-2, 3)}


def test_int_pow_exponent_zero_and_negative():
    _, p = compile_src("""
        var -2..2: x;
        var 0..2: z;
        constraint int_pow(x, 0, z);
        solve satisfy;
    """)
    assert solutions(p, "x", "z") == {(x, 1) for x in range(-2, 3)}
    with pytest.raises(UnsupportedExponent):
        compile_src("""
            var 1..2: x;
            var 0..2: z;
            constraint int_pow(x, -1, z);
            solve satisfy;
        """)


def test_array_int_element_structure_and_semantics():
    _, p = compile_src("""
        var 1..3: i;
        var 0..9: c;
        constraint array_int_element(i, [4, 7, 1], c);
        solve satisfy;
    """)
    assert len(p.onehot_groups) == 1
    assert [v for _, v in p.onehot_groups[0].bits] == [1, 2, 3]
    assert solutions(p, "i", "c") == {(1, 4), (2, 7), (3, 1)}


def test_array_var_int_element():
    _, p = compile_src("""
        var 1..2: i;
        var -1..1: a1;
        var 0..2: a2;
        var -9..9: c;
        constraint array_var_int_element(i, [a1, a2], c);
        solve satisfy;
    """)
    assert len(p.products) == 2
    got = solutions(p, "i", "a1", "a2", "c")
    want = {
        (i, a1, a2, [a1, a2][i - 1])
        for i in (1, 2) for a1 in (-1, 0, 1) for a2 in (0, 1, 2)
    }
    assert got == want


def test_array_int_maximum():
    _, p = compile_src("""
        var -10..10: m;
        var 0..3: x1;
        var 1..2: x2;
        constraint array_int_maximum(m, [x1, x2]);
        solve satisfy;
    """)
    assert p.vars["m"].domain == Domain(1, 3)
    got = solutions(p, "m", "x1", "x2")
    assert got == {(max(a, b), a, b) for a in range(4) for b in (1, 2)}
    assert (2, 0, 2) in got


def test_array_bool_and_structure():
    _, p = compile_src("""
        var bool: a;
        var bool: b;
        var bool: c;
        var bool: r;
        constraint array_bool_and([a, b, c], r);
        solve satisfy;
    """)
    assert len(p.inequalities) == 4
    got = solutions(p, "a", "b", "c", "r")
    want = {(a, b, c, int(a and b and c))
            for a in (0, 1) for b in (0, 1) for c in (0, 1)}
    assert got == want


def test_bool_clause_single_literals():
    _, p = compile_src("""
        var bool: a;
        var bool: b;
        constraint bool_clause([a], [b]);
        solve satisfy;
    """)
    assert solutions(p, "a", "b") == {(0, 0), (1, 0), (1, 1)}


def test_bool_xor_ternary_truth_table():
    _, p = compile_src("""
        var bool: a;
        var bool: b;
        var bool: r;
        constraint bool_xor(a, b, r);
        solve satisfy;
    """)
    assert solutions(p, "a", "b", "r") == {
        (a, b, a ^ b) for a in (0, 1) for b in (0, 1)
    }


def test_bool_lt_reif_truth_table_both_encodings():
    src = """
        var bool: a;
        var bool: b;
        var bool: r;
        constraint bool_lt_reif(a, b, r);
        solve satisfy;
    """
    want = {(a, b, int(a < b)) for a in (0, 1) for b in (0, 1)}
    for products in (False, True):
        _, p = compile_src(src, prefer_products=products)
        assert solutions(p, "a", "b", "r") == want


def test_prefer_products_bool_and():
    src = """
        var bool: a;
        var bool: b;
        var bool: r;
        constraint bool_and(a, b, r);
        solve satisfy;
    """
    _, default = compile_src(src)
    assert len(default.products) == 0 and len(default.inequalities) == 3
    _, flagged = compile_src(src, prefer_products=True)
    assert len(flagged.products) == 1
    want = {(a, b, a & b) for a in (0, 1) for b in (0, 1)}
    assert solutions(default, "a", "b", "r") == want
    assert solutions(flagged, "a", "b", "r") == want


def test_set_in_and_reif():
    _, p = compile_src("""
        var 1..6: x;
        constraint set_in(x, {2, 4, 9});
        solve satisfy;
    """)
    assert [v for _, v in p.onehot_groups[0].bits] == [2, 4]
    assert solutions(p, "x") == {(2,), (4,)}
    _, p = compile_src("""
        var 1..3: x;
        var bool: r;
        constraint set_in_reif(x, {2}, r);
        solve satisfy;
    """)
    assert len(p.onehot_groups[0].bits) == 3
    assert solutions(p, "x", "r") == {(1, 0), (2, 1), (3, 0)}


def test_set_in_empty_intersection_unsat():
    with pytest.raises(CompileUnsat):
        compile_src("""
            var 1..3: x;
            constraint set_in(x, {7, 8});
            solve satisfy;
        """)


def test_onehot_shared_between_constraints():
    _, p = compile_src("""
        var 1..3: i;
        var 0..9: c;
        constraint array_int_element(i, [4, 7, 1], c);
        constraint set_in(i, {1, 3});
        solve satisfy;
    """)
    assert len(p.onehot_groups) == 1  # one encoding per variable
    assert solutions(p, "i", "c") == {(1, 4), (3, 1)}


def test_objective_sense_mapping():
    _, p = compile_src("var 1..3: x;\nsolve minimize x;\n")
    assert p.objective_sense == "min" and not p.objective_negated
    assert p.objective.terms == {"x": 1}
    _, p = compile_src("var 1..3: x;\nsolve maximize x;\n")
    assert p.objective_negated and p.objective.terms == {"x": -1}


def test_compiled_problems_always_validate():
    sources = [
        "var -3..3: n;\nvar -2..2: d;\nvar -3..3: q;\n"
        "constraint int_div(n, d, q);\nsolve satisfy;\n",
        "var 0..2: a;\nvar 0..2: b;\nvar 0..4: c;\n"
        "constraint int_times(a, b, c);\nsolve satisfy;\n",
    ]
    for src in sources:
        _, p = compile_src(src)
        assert p.validate() == []
