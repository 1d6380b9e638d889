"""Lexer, parser, and pretty-printer behavior on surface syntax."""

import pytest
from hypothesis import given, settings, strategies as st

from qunic.errors import LexError, ParseError
from qunic.lexer import TokKind, tokenize
from qunic.parser import (
    parse_expr_string,
    parse_file,
    parse_prog_string,
    parse_real_string,
    parse_type_string,
)
from qunic.preprocess import default_prelude_text
from qunic.reals import BCmp, RBinary, RConst, RName, RPi
from qunic.surface import (
    Arm,
    ECtrl,
    EIf,
    ELet,
    EMatch,
    EName,
    EPair,
    ETry,
    EUnit,
    EVar,
    EApp,
    PGphase,
    PIf,
    PLambda,
    PName,
    PPmatch,
    PRphase,
    PU3,
    ProgDef,
    TIf,
    TName,
    TProd,
    TUnit,
    TVar,
    TVoid,
    TypeAliasDef,
    VariantDef,
    expr_to_str,
    file_to_str,
    prog_to_str,
    type_to_str,
)


class TestLexer:
    def test_sigils_and_kinds(self):
        toks = tokenize("&plus @had #n 'a x Bit 42")
        kinds = [t.kind for t in toks[:-1]]
        assert kinds == [
            TokKind.ENAME,
            TokKind.FNAME,
            TokKind.RNAME,
            TokKind.TYVAR,
            TokKind.QVAR,
            TokKind.TNAME,
            TokKind.NUMBER,
        ]
        assert toks[0].text == "plus"
        assert toks[-1].kind is TokKind.EOF

    def test_primes_inside_identifiers(self):
        toks = tokenize("y0' 'a")
        assert (toks[0].kind, toks[0].text) == (TokKind.QVAR, "y0'")
        assert (toks[1].kind, toks[1].text) == (TokKind.TYVAR, "a")

    def test_longest_match_punctuation(self):
        toks = tokenize("|> || | := : -> !=")
        assert [t.text for t in toks[:-1]] == ["|>", "||", "|", ":=", ":", "->", "!="]

    def test_comments_skipped(self):
        toks = tokenize("x /* anything |> &here */ y")
        assert [t.text for t in toks[:-1]] == ["x", "y"]

    def test_unterminated_comment(self):
        with pytest.raises(LexError):
            tokenize("x /* oops")

    def test_dangling_sigil(self):
        with pytest.raises(LexError):
            tokenize("& ")

    def test_keywords_not_identifiers(self):
        toks = tokenize("ctrl ctrlx")
        assert toks[0].kind is TokKind.KW
        assert toks[1].kind is TokKind.QVAR


class TestParser:
    def test_pipe_desugars_to_application(self):
        e = parse_expr_string("x |> @f |> @g")
        assert e == EApp(PName("g"), EApp(PName("f"), EVar("x")))

    def test_application_parens_double_as_pair(self):
        assert parse_expr_string("@f(a, b)") == parse_expr_string("@f((a, b))")

    def test_unit_argument(self):
        assert parse_expr_string("@f(())") == EApp(PName("f"), EUnit())

    def test_ctrl_with_else_and_trailing_semicolon(self):
        e = parse_expr_string("ctrl (a, b) [(&1, &1) -> ((a, b), @not(c)); else -> ((a, b), c);]")
        assert isinstance(e, ECtrl)
        assert len(e.arms) == 1
        assert e.else_body is not None

    def test_match_arms(self):
        e = parse_expr_string("match x [(&1, &1) -> &1; else -> &0;]")
        assert isinstance(e, EMatch)
        assert e.arms[0].pattern == EPair(EName("1"), EName("1"))

    def test_lambda_body_extends_through_pipes(self):
        f = parse_prog_string("lambda x -> x |> @f |> @g")
        assert isinstance(f, PLambda)
        assert f.body == EApp(PName("g"), EApp(PName("f"), EVar("x")))

    def test_parenthesized_lambda_application(self):
        e = parse_expr_string("(lambda x -> x)(&0)")
        assert isinstance(e, EApp) and isinstance(e.fn, PLambda)

    def test_let_binding(self):
        e = parse_expr_string("let (x, y) = p in (y, x)")
        assert isinstance(e, ELet)
        assert e.pattern == EPair(EVar("x"), EVar("y"))

    def test_try_catch(self):
        e = parse_expr_string("try @f(x) catch &0")
        assert isinstance(e, ETry)

    def test_type_product_left_associative(self):
        t = parse_type_string("Bit * Bit * Bit")
        assert t == TProd(TProd(TName("Bit"), TName("Bit")), TName("Bit"))

    def test_tuple_pattern_matches_left_associated_product(self):
        # ((a, b), c) is the pattern shape for Bit * Bit * Bit
        e = parse_expr_string("((a, b), c)")
        assert e == EPair(EPair(EVar("a"), EVar("b")), EVar("c"))

    def test_type_conditional(self):
        t = parse_type_string("if #n <= 0 then Unit else 'a * Array{#n - 1, 'a} endif")
        assert isinstance(t, TIf)
        assert isinstance(t.els, TProd)

    def test_rphase_shape(self):
        f = parse_prog_string("rphase{(&1, &1), 2 * pi / 2 ^ #k, 0}")
        assert isinstance(f, PRphase)
        assert f.pattern == EPair(EName("1"), EName("1"))
        assert f.off_phase == RConst(0)

    def test_expression_if(self):
        e = parse_expr_string("if #a % 2 = 1 then &1 else &0 endif")
        assert isinstance(e, EIf)

    def test_generic_args_mixed_classes(self):
        e = parse_expr_string("&repeated{5, Bit, &plus}")
        assert isinstance(e, EName)
        assert e.args == (RConst(5), TName("Bit"), EName("plus"))

    def test_generic_arg_parenthesized_real(self):
        e = parse_expr_string("&f{(#a - 1) / 2}")
        (arg,) = e.args
        assert arg == RBinary("/", RBinary("-", RName("a"), RConst(1)), RConst(2))

    def test_negative_literal_only_on_constants(self):
        assert parse_real_string("1 - -2") == RBinary("-", RConst(1), RConst(-2))
        with pytest.raises(ParseError):
            parse_real_string("-pi")

    def test_unexpected_token_reports_position(self):
        with pytest.raises(ParseError) as exc:
            parse_expr_string("ctrl x [&0 -> ]")
        assert exc.value.line == 1

    def test_variant_def_leading_bar_optional(self):
        with_bar = parse_file("type T := | &    A | @B of Unit end x")
        without = parse_file("type T := &A | @B of Unit end x")
        assert with_bar.defs == without.defs

    def test_def_forms(self):
        qf = parse_file(
            """
            type Pair2{'a} := 'a * 'a end
            def &zz : Pair2{Bit} := (&0, &0) end
            def @w{#n, @f : Bit -> Bit} : Bit -> Bit := @f end
            def #half{#x} := #x / 2 end
            """
        )
        kinds = [type(d).__name__ for d in qf.defs]
        assert kinds == ["TypeAliasDef", "ExprDef", "ProgDef", "RealDef"]
        assert qf.main is None

    def test_file_requires_defs_then_main(self):
        qf = parse_file("def &one : Bit := &1 end &one")
        assert qf.main == EName("one")

    def test_prog_if(self):
        f = parse_prog_string("if #n = 0 then @id{Unit} else @f endif")
        assert isinstance(f, PIf)


class TestPrettyPrinter:
    def test_prelude_round_trips(self):
        qf = parse_file(default_prelude_text())
        assert parse_file(file_to_str(qf)) == qf

    def test_product_needs_parens_on_right(self):
        t = TProd(TName("Bit"), TProd(TName("Bit"), TName("Bit")))
        assert type_to_str(t) == "Bit * (Bit * Bit)"
        assert parse_type_string(type_to_str(t)) == t

    def test_applied_lambda_is_parenthesized(self):
        e = EApp(PLambda(EVar("x"), EVar("x")), EName("0"))
        assert expr_to_str(e) == "(lambda x -> x)(&0)"


# ---------------------------------------------------------------------------
# Random-AST round trips

_qvars = st.sampled_from(["x", "y", "z", "acc", "x'", "out0"])
_enames = st.sampled_from(["0", "1", "plus", "answer"])
_fnames = st.sampled_from(["f", "g", "had", "Just"])
_tnames = st.sampled_from(["Bit", "Num", "T0"])
_tyvars = st.sampled_from(["a", "b"])
_rnames = st.sampled_from(["n", "k"])


def _reals(depth: int):
    base = st.one_of(
        st.integers(-20, 20).map(RConst),
        st.just(RPi()),
        _rnames.map(lambda n: RName(n, ())),
    )
    if depth == 0:
        return base
    sub = _reals(depth - 1)
    from qunic.reals import RUnary

    return st.one_of(
        base,
        st.builds(RUnary, st.sampled_from(["sqrt", "cos"]), sub),
        st.builds(RBinary, st.sampled_from(["+", "-", "*", "/", "^", "%"]), sub, sub),
    )


def _bools(depth: int):
    cmp = st.builds(BCmp, st.sampled_from(["=", "!=", "<", "<=", ">", ">="]), _reals(1), _reals(1))
    if depth == 0:
        return cmp
    from qunic.reals import BAnd, BNot, BOr

    sub = _bools(depth - 1)
    return st.one_of(cmp, st.builds(BNot, sub), st.builds(BAnd, sub, sub), st.builds(BOr, sub, sub))


def _types(depth: int):
    base = st.one_of(
        st.just(TVoid()),
        st.just(TUnit()),
        _tyvars.map(TVar),
        _tnames.map(lambda n: TName(n, ())),
    )
    if depth == 0:
        return base
    sub = _types(depth - 1)
    return st.one_of(
        base,
        st.builds(TProd, sub, sub),
        st.builds(TIf, _bools(1), sub, sub),
        st.builds(TName, _tnames, st.tuples(sub)),
    )


def _genargs(depth: int):
    return st.one_of(_types(depth), _exprs(depth), _progs(depth), _reals(depth))


def _exprs(depth: int):
    base = st.one_of(
        st.just(EUnit()),
        _qvars.map(EVar),
        _enames.map(lambda n: EName(n, ())),
    )
    if depth == 0:
        return base
    sub = _exprs(depth - 1)
    arms = st.lists(st.builds(Arm, sub, sub), min_size=1, max_size=2).map(tuple)
    maybe_else = st.one_of(st.none(), sub)
    return st.one_of(
        base,
        st.builds(EPair, sub, sub),
        st.builds(ECtrl, sub, arms, maybe_else),
        st.builds(EMatch, sub, arms, maybe_else),
        st.builds(ETry, sub, sub),
        st.builds(EApp, _progs(depth - 1), sub),
        st.builds(ELet, sub, sub, sub),
        st.builds(EIf, _bools(1), sub, sub),
        st.builds(EName, _enames, st.tuples(_genargs(depth - 1))),
    )


def _progs(depth: int):
    base = st.one_of(
        _fnames.map(lambda n: PName(n, ())),
        st.builds(PU3, _reals(1), _reals(1), _reals(1)),
        st.builds(PGphase, _reals(1)),
    )
    if depth == 0:
        return base
    sub = _exprs(depth - 1)
    arms = st.lists(st.builds(Arm, sub, sub), min_size=1, max_size=2).map(tuple)
    return st.one_of(
        base,
        st.builds(PLambda, sub, sub),
        st.builds(PRphase, sub, _reals(1), _reals(1)),
        st.builds(PPmatch, arms),
        st.builds(PIf, _bools(1), _progs(depth - 1), _progs(depth - 1)),
        st.builds(PName, _fnames, st.tuples(_genargs(depth - 1))),
    )


@settings(max_examples=300, deadline=None)
@given(_exprs(3))
def test_expr_print_parse_round_trip(e):
    assert parse_expr_string(expr_to_str(e)) == e


@settings(max_examples=200, deadline=None)
@given(_progs(3))
def test_prog_print_parse_round_trip(f):
    assert parse_prog_string(prog_to_str(f)) == f


@settings(max_examples=200, deadline=None)
@given(_types(3))
def test_type_print_parse_round_trip(t):
    assert parse_type_string(type_to_str(t)) == t
