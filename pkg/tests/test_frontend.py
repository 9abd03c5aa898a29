import pytest

from co4.concrete_eval import Interpreter
from co4.errors import InstantiationError, ParseError, PatternError, ScopeError, TypeCheckError
from co4.frontend import compile_program, desugar, instantiate, parse, typecheck
from co4.frontend.syntax import Call, Case, Con, Let, Match, Var

from helpers import Setup, all_assignments, load, program_text
from co4.domain import unknown_variables

AND2 = """
and2 :: Bool -> Bool -> Bool
and2 x y = case x of
  False -> False
  True -> y

main :: Bool -> Bool -> Bool
main k u = and2 k u
"""


def test_parse_and2():
    p = parse(AND2)
    f = p.functions["and2"]
    assert f.params == ["x", "y"]
    assert isinstance(f.body, Match)
    assert [pat.con for pat, _ in f.body.alts] == ["False", "True"]
    assert [c.name for c in p.datas["Bool"].constructors] == ["False", "True"]


def test_parse_nested_case_with_braces():
    src = """
data Maybe a = Nothing | Just a
f :: Maybe Bool -> Maybe Bool -> Maybe Bool
f p q = case p of { Nothing -> Nothing ; Just x -> case q of { Nothing -> Nothing ; Just y -> Just y } }
main :: Bool -> Bool -> Bool
main k u = k
"""
    body = parse(src).functions["f"].body
    inner = body.alts[1][1]
    assert isinstance(inner, Match) and isinstance(inner.scrut, Var) and inner.scrut.name == "q"


def test_parse_let_block():
    src = """
main :: Bool -> Bool -> Bool
main k u = let a = k
               b = u
           in b
"""
    body = parse(src).functions["main"].body
    assert isinstance(body, Let) and isinstance(body.body, Let)
    assert (body.name, body.body.name) == ("a", "b")


def test_empty_file_has_no_main():
    with pytest.raises(ParseError, match="no main"):
        parse("")


def test_syntax_error_location():
    with pytest.raises(ParseError) as info:
        parse("main :: Bool -> Bool -> Bool\nmain k u = case k of\n  True -> ->\n", "bad.co4")
    assert str(info.value).startswith("bad.co4:3:")


def test_duplicate_definitions():
    with pytest.raises(ParseError, match="duplicate"):
        parse("data T = A\ndata T = B\nmain :: Bool -> Bool -> Bool\nmain k u = k\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse("data T = A\ndata U = A\nmain :: Bool -> Bool -> Bool\nmain k u = k\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse("main :: Bool -> Bool -> Bool\nmain k u = k\nmain k u = u\n")


def test_unbound_variable():
    with pytest.raises(ScopeError, match="unbound variable z"):
        parse("main :: Bool -> Bool -> Bool\nmain k u = z\n")


def test_comments_are_ignored():
    src = "-- line\n{- block {- nested -} -}\nmain :: Bool -> Bool -> Bool\nmain k u = k -- trailing\n"
    assert "main" in parse(src).functions


# desugaring ------------------------------------------------------------------

SEL = """
data Maybe a = Nothing | Just a
data ABC = A | B | C
sel :: Maybe Bool -> ABC
sel m = case m of { Just True -> A ; Just False -> B ; Nothing -> C }
main :: Bool -> Bool -> Bool
main k u = k
"""


def test_desugar_nested_patterns():
    body = desugar(parse(SEL)).functions["sel"].body
    assert isinstance(body, Case)
    assert [b.con for b in body.branches] == ["Nothing", "Just"]
    inner = body.branches[1].body
    assert isinstance(inner, Case) and [b.con for b in inner.branches] == ["False", "True"]
    assert [b.body.con for b in inner.branches] == ["B", "A"]


def test_desugar_missing_constructor():
    src = "data ABC = A | B | C\nf :: Bool -> ABC\nf b = case b of { True -> A }\nmain :: Bool -> Bool -> Bool\nmain k u = k\n"
    with pytest.raises(PatternError, match="False"):
        desugar(parse(src))


def test_desugar_wildcard_expands():
    src = "data ABC = A | B | C\nf :: Bool -> ABC\nf p = case p of { _ -> A }\nmain :: Bool -> Bool -> Bool\nmain k u = k\n"
    body = desugar(parse(src)).functions["f"].body
    # an irrefutable match still forces its scrutinee
    assert isinstance(body, Let)
    src2 = "data ABC = A | B | C\nf :: ABC -> Bool\nf p = case p of { B -> True ; _ -> False }\nmain :: Bool -> ABC -> Bool\nmain k u = f u\n"
    body = compile_program(src2).functions["f"].body
    assert [b.con for b in body.branches] == ["A", "B", "C"]
    assert [b.body.con for b in body.branches] == ["False", "True", "False"]


def test_desugar_overlap():
    src = "f :: Bool -> Bool\nf b = case b of { True -> b ; True -> b ; False -> b }\nmain :: Bool -> Bool -> Bool\nmain k u = k\n"
    with pytest.raises(PatternError, match="redundant"):
        desugar(parse(src))


def test_desugar_wrong_type_in_pattern():
    src = "data ABC = A | B | C\nf :: Bool -> Bool\nf b = case b of { True -> b ; A -> b }\nmain :: Bool -> Bool -> Bool\nmain k u = k\n"
    with pytest.raises(PatternError):
        desugar(parse(src))


# instantiation -----------------------------------------------------------------

MAP = """
data List a = Nil | Cons a (List a)
map :: (a -> b) -> List a -> List b
map f xs = case xs of
  Nil -> Nil
  Cons x rest -> Cons (f x) (map f rest)
not :: Bool -> Bool
not b = case b of { False -> True ; True -> False }
main :: List Bool -> List Bool -> Bool
main k u = case map not u of
  Nil -> True
  Cons x _ -> x
"""


def test_instantiate_map_not():
    core = compile_program(MAP)
    assert "map_Bool_Bool_not" in core.functions
    f = core.functions["map_Bool_Bool_not"]
    assert f.params == ["xs"]
    assert f.param_types == ["List_Bool"] and f.result_type == "List_Bool"
    assert "map" not in core.functions
    assert set(core.types) == {"Bool", "List_Bool"}


def test_instantiate_identity_on_monomorphic():
    core = compile_program(AND2)
    assert set(core.functions) == {"main", "and2"}
    assert core.functions["and2"].param_types == ["Bool", "Bool"]


def test_distinct_list_instances():
    src = """
data List a = Nil | Cons a (List a)
data Name = X | Y
len :: List a -> Bool
len xs = case xs of { Nil -> False ; Cons _ _ -> True }
main :: List Bool -> List Name -> Bool
main k u = len u
"""
    core = compile_program(src)
    assert {"List_Bool", "List_Name"} <= set(core.types)
    assert "len_Name" in core.functions and "len_Bool" not in core.functions


def test_functional_field_rejected():
    src = "data T = T (Bool -> Bool)\nmain :: Bool -> Bool -> Bool\nmain k u = k\n"
    with pytest.raises(InstantiationError, match="functional field"):
        compile_program(src)


def test_partial_application_rejected():
    src = MAP.replace("case map not u of", "case map (and2 k) u of") + \
        "and2 :: Bool -> Bool -> Bool\nand2 x y = case x of { False -> False ; True -> y }\n"
    with pytest.raises(InstantiationError):
        compile_program(src)


def test_function_result_rejected():
    src = """
pick :: Bool -> Bool -> Bool
pick b x = b
choose :: Bool -> (Bool -> Bool -> Bool)
choose b = pick
main :: Bool -> Bool -> Bool
main k u = k
"""
    with pytest.raises(InstantiationError):
        compile_program(src)


def test_polymorphic_recursion_bound():
    src = """
data List a = Nil | Cons a (List a)
data Pair a b = Pair a b
grow :: a -> Bool
grow x = grow (Pair x x)
main :: Bool -> Bool -> Bool
main k u = grow k
"""
    with pytest.raises(InstantiationError, match="instantiation bound"):
        compile_program(src, max_specializations=10)


def test_main_shape_checked():
    with pytest.raises(TypeCheckError, match="two parameters"):
        compile_program("main :: Bool -> Bool\nmain k = k\n")
    with pytest.raises(TypeCheckError, match="Bool"):
        compile_program("data T = T\nmain :: Bool -> Bool -> T\nmain k u = T\n")


def test_missing_signature():
    with pytest.raises(TypeCheckError, match="signature"):
        compile_program("f x = x\nmain :: Bool -> Bool -> Bool\nmain k u = f k\n")


def test_no_type_variables_or_functions_remain():
    core = load("toyama.co4")
    for f in core.functions.values():
        assert all("_" not in t or t in core.types for t in f.param_types)
        assert all(t in core.types for t in f.param_types + [f.result_type])

        def walk(e):
            if isinstance(e, Call):
                assert e.func in core.functions
            if isinstance(e, (Con, Case)):
                assert e.type in core.types
            for x in getattr(e, "args", []) or []:
                walk(x)
            if isinstance(e, Let):
                walk(e.bound)
                walk(e.body)
            if isinstance(e, Case):
                walk(e.scrut)
                for b in e.branches:
                    walk(b.body)

        walk(f.body)


# type checking --------------------------------------------------------------------

def test_typecheck_table():
    core = compile_program(AND2)
    table = typecheck(core)
    body = core.functions["main"].body
    assert table[id(body)] == "Bool"


def test_constructor_arity_error():
    src = "data Maybe a = Nothing | Just a\nmain :: Bool -> Bool -> Bool\nmain k u = case Just k u of { Nothing -> k ; Just x -> x }\n"
    with pytest.raises(TypeCheckError, match="argument"):
        compile_program(src)


def test_case_type_mismatch():
    src = "data Maybe a = Nothing | Just a\nmain :: Bool -> Bool -> Bool\nmain k u = case k of { Nothing -> k ; Just x -> x }\n"
    with pytest.raises((TypeCheckError, PatternError)):
        compile_program(src)


def test_type_mismatch_location():
    src = "data N = Z | S N\nmain :: Bool -> Bool -> Bool\nmain k u = S k\n"
    with pytest.raises(TypeCheckError) as info:
        compile_program(src, "t.co4")
    assert "t.co4:3:" in str(info.value)


# semantics preservation --------------------------------------------------------------

CORPUS = [
    ("and2.co4", {"default": 0}),
    ("double.co4", {"default": 3}),
    ("lists.co4", {"default": 2}),
    ("equal_term.co4", {"default": 1}),
    ("subword.co4", {"default": 2}),
]


@pytest.mark.parametrize("name,bounds", CORPUS)
def test_passes_preserve_concrete_semantics(name, bounds):
    text = program_text(name)
    surface = parse(text, name)
    core = compile_program(text, name)
    setup = Setup(core)
    kt, ut = core.main_function.param_types
    k = setup.store.bounded_allocator(kt, bounds)
    u = setup.store.bounded_allocator(ut, bounds)
    vs = unknown_variables(setup.circuit, k) | unknown_variables(setup.circuit, u)
    vs = sorted(vs)[:14]
    s_int = Interpreter(surface.functions)
    c_int = Interpreter(core.functions)
    from co4.formula import Assignment

    seen = 0
    for sigma in all_assignments(vs):
        sigma = Assignment(dict(sigma), default=False)
        kv, uv = setup.decode(kt, k, sigma), setup.decode(ut, u, sigma)
        assert s_int.apply("main", [kv, uv]) == c_int.apply("main", [kv, uv])
        seen += 1
    assert seen > 0
