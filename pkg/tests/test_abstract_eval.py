import pytest

from co4.abstract_eval import BOTTOM_VALUE, evaluate_main
from co4.domain import numeric, unknown_variables
from co4.errors import CompilationLimitExceeded
from co4.formula import FALSE, TRUE
from co4.values import BOTTOM, Value, parse_value

from helpers import Setup, all_assignments, agreement_check, load


def partial(setup, a):
    """Make every node of ``a`` possibly undefined via a fresh variable."""
    st, c = setup.store, setup.circuit
    args = [partial(setup, x) for x in a.args]
    (d,) = c.fresh(1)
    return st.make(a.flags, args, c.mk_and([a.defined, d]))


def assert_agrees(setup, fname, args):
    n, bad = agreement_check(setup, fname, args)
    assert n > 1
    assert bad == [], bad[:3]


def test_not_exhaustive():
    s = Setup(load("and2.co4"))
    x = s.store.complete_allocator("Bool")
    r = s.evaluator.call("not", [x])
    assert r.flags == (-x.flags[0],)
    assert r.defined == TRUE
    assert_agrees(s, "not", [x])


def test_and2_exhaustive():
    s = Setup(load("and2.co4"))
    a, b = s.store.complete_allocator("Bool"), s.store.complete_allocator("Bool")
    r = s.evaluator.call("and2", [a, b])
    for sigma in all_assignments(unknown_variables(s.circuit, r) | {a.flags[0], b.flags[0]}):
        assert s.circuit.evaluate(r.flags[0], sigma) == (sigma[a.flags[0]] and sigma[b.flags[0]])
    assert_agrees(s, "and2", [a, b])


def test_and2_with_undefined_inputs():
    s = Setup(load("and2.co4"))
    a, b = s.store.complete_allocator("Bool"), s.store.complete_allocator("Bool")
    assert_agrees(s, "and2", [partial(s, a), partial(s, b)])
    # strict: a constant bottom argument makes the call bottom
    assert s.evaluator.call("and2", [s.store.encode("Bool", Value("False")), BOTTOM_VALUE]) is BOTTOM_VALUE


def test_maybe_function():
    s = Setup(load("and2.co4"))
    p, q = (s.store.complete_allocator("Maybe_Bool") for _ in range(2))
    assert_agrees(s, "f", [p, q])
    assert_agrees(s, "f", [partial(s, p), partial(s, q)])


@pytest.mark.parametrize("d", range(4))
def test_double(d):
    s = Setup(load("double.co4"))
    u = s.store.bounded_allocator("N", d)
    assert_agrees(s, "double", [u])


def test_double_partial_input():
    # S ⊥ style inputs: the inner node may be undefined
    s = Setup(load("double.co4"))
    assert_agrees(s, "double", [partial(s, s.store.bounded_allocator("N", 2))])


def test_eq_naturals():
    s = Setup(load("double.co4"))
    a, b = s.store.bounded_allocator("N", 3), s.store.bounded_allocator("N", 3)
    assert_agrees(s, "eqN", [a, b])
    k = s.store.encode("N", parse_value("S (S Z)"))
    assert_agrees(s, "main", [k, s.store.bounded_allocator("N", 2)])


@pytest.mark.parametrize("fname,depths", [
    ("append_Bool", (2, 2)), ("reverse_Bool", (3,)), ("eqList_Bool_eqBool", (2, 2)),
    ("isPrefix", (2, 2)), ("main", (1, 3)),
])
def test_lists(fname, depths):
    s = Setup(load("lists.co4"))
    args = [s.store.bounded_allocator("List_Bool", d) for d in depths]
    assert_agrees(s, fname, args)


def test_lists_partial():
    s = Setup(load("lists.co4"))
    a = partial(s, s.store.bounded_allocator("List_Bool", 1))
    b = partial(s, s.store.bounded_allocator("List_Bool", 1))
    assert_agrees(s, "append_Bool", [a, b])


def test_subword():
    s = Setup(load("subword.co4"))
    a, b = s.store.bounded_allocator("List_E", 2), s.store.bounded_allocator("List_E", 3)
    assert_agrees(s, "subword_E_eqE", [a, b])
    u = s.store.bounded_allocator("Pair_List_E_List_E", 2)
    for k in ("False", "True"):
        assert_agrees(s, "main", [s.store.encode("Bool", Value(k)), u])


def test_equal_term():
    s = Setup(load("equal_term.co4"))
    u = s.store.bounded_allocator("Term", 1)
    for text in ["A", "V Y", "F A (V X) C"]:
        assert_agrees(s, "equalTerm", [s.store.encode("Term", parse_value(text)), u])


def test_merge_two_constants():
    s = Setup(load("and2.co4"))
    st, c = s.store, s.circuit
    (x,) = c.fresh(1)
    t, f = st.encode("Bool", Value("True")), st.encode("Bool", Value("False"))
    m = s.evaluator.merge([x], TRUE, 2, [t, f])
    assert m.defined == TRUE
    for sigma in all_assignments([x]):
        assert s.decode("Bool", m, sigma) == Value("False" if sigma[x] else "True")


def test_merge_identical_branches():
    s = Setup(load("and2.co4"))
    st, c = s.store, s.circuit
    (x,) = c.fresh(1)
    a = st.complete_allocator("Maybe_Bool")
    m = s.evaluator.merge([x], TRUE, 2, [a, a])
    assert m is a


ORD_SRC = """
data Ordering = LT | EQ | GT
main :: Bool -> Ordering -> Bool
main k u = k
"""


def test_merge_three_way_uneven_flags():
    from co4.frontend import compile_program

    s = Setup(compile_program(ORD_SRC))
    st, c = s.store, s.circuit
    sel = c.fresh(2)
    y = c.fresh(5)
    # one flag only decodes to GT, so that branch is defined exactly when y0 holds
    b1 = st.make([y[0]], [], y[0])
    b2 = st.make([y[1], y[2]], [], TRUE)
    b3 = st.make([y[3], y[4]], [], TRUE)
    m = s.evaluator.merge(sel, TRUE, 3, [b1, b2, b3])
    assert len(m.flags) == 2
    for sigma in all_assignments(list(sel) + list(y)):
        k = numeric(3, [sigma[v] for v in sel])
        expected = s.decode("Ordering", [b1, b2, b3][k - 1], sigma)
        assert s.decode("Ordering", m, sigma) == expected


def test_merge_undefined_selector_and_missing_branch():
    s = Setup(load("and2.co4"))
    st, c = s.store, s.circuit
    x, d = c.fresh(2)
    t = st.encode("Bool", Value("True"))
    m = s.evaluator.merge([x], d, 2, [t, None])
    for sigma in all_assignments([x, d]):
        want = Value("True") if sigma[d] and not sigma[x] else BOTTOM
        assert s.decode("Bool", m, sigma) == want
    assert s.evaluator.merge([TRUE], TRUE, 2, [t, None]) is BOTTOM_VALUE


def test_memo_hits_on_identical_arguments():
    s = Setup(load("double.co4"))
    u = s.store.bounded_allocator("N", 3)
    ev = s.evaluator
    r1 = ev.call("double", [u])
    misses = ev.stats.memo_misses
    r2 = ev.call("double", [u])
    assert r1 is r2
    assert ev.stats.memo_hits >= 1 and ev.stats.memo_misses == misses


def test_memo_misses_on_distinct_allocators():
    s = Setup(load("double.co4"))
    ev = s.evaluator
    ev.call("double", [s.store.bounded_allocator("N", 1)])
    hits, misses = ev.stats.memo_hits, ev.stats.memo_misses
    r = ev.call("double", [s.store.bounded_allocator("N", 1)])
    assert ev.stats.memo_hits == hits and ev.stats.memo_misses > misses
    assert r.flags


def test_interned_constants_share_memo():
    s = Setup(load("double.co4"))
    v = parse_value("S (S Z)")
    assert s.store.encode("N", v) is s.store.encode("N", v)


def test_memo_does_not_change_semantics():
    core = load("subword.co4")
    on, off = Setup(core, memo=True), Setup(core, memo=False)
    k = Value("True")
    outs = []
    for s in (on, off):
        u = s.store.bounded_allocator("Pair_List_E_List_E", 2)
        r = s.evaluator.call("main", [s.store.encode("Bool", k), u])
        outs.append((s, u, r))
    (s1, u1, r1), (s2, u2, r2) = outs
    assert on.evaluator.stats.memo_hits > 0 and off.evaluator.stats.memo_hits == 0
    v1, v2 = sorted(unknown_variables(s1.circuit, u1)), sorted(unknown_variables(s2.circuit, u2))
    assert len(v1) == len(v2)
    for sigma1 in all_assignments(v1):
        sigma2 = {b: sigma1[a] for a, b in zip(v1, v2)}
        from co4.formula import Assignment
        sigma2 = Assignment(sigma2)
        assert s1.decode("Bool", r1, sigma1) == s2.decode("Bool", r2, sigma2)


def test_node_limit():
    core = load("subword.co4")
    s = Setup(core)
    u = s.store.bounded_allocator("Pair_List_E_List_E", 6)
    with pytest.raises(CompilationLimitExceeded):
        evaluate_main(core, s.store, s.store.encode("Bool", Value("True")), u, node_limit=50)


def test_evaluate_main_result_is_bool():
    core = load("double.co4")
    s = Setup(core)
    r, ev = evaluate_main(core, s.store, s.store.encode("N", parse_value("S (S Z)")),
                          s.store.bounded_allocator("N", 2))
    assert len(r.flags) == 1 and r.flags[0] not in (TRUE, FALSE)
    assert ev.stats.calls > 0
