import unittest

from gcl_workbench.parser import (
    Dialect,
    DialectError,
    LexicalError,
    NameKindError,
    SyntacticError,
    parse_action,
    parse_aexp,
    parse_bexp,
    parse_program,
)
from gcl_workbench.syntax import (
    ArrayAssign,
    ArrayLength,
    ArrayRef,
    Assign,
    BinOp,
    Choice,
    Do,
    Guard,
    If,
    Input,
    LogicOp,
    Neg,
    Not,
    Num,
    Output,
    RelOp,
    San,
    Seq,
    Skip,
    Str,
    Test,
    Var,
    pretty,
)

from tests.programs import DATABASE, FACTORIAL, THREE_WAY


class ParseProgramTests(unittest.TestCase):
    def test_factorial_tree(self):
        expected = Seq(
            Assign("y", Num(1)),
            Do(
                Guard(
                    RelOp(">", Var("x"), Num(0)),
                    Seq(
                        Assign("y", BinOp("*", Var("x"), Var("y"))),
                        Assign("x", BinOp("-", Var("x"), Num(1))),
                    ),
                )
            ),
        )

        self.assertEqual(expected, parse_program(FACTORIAL))

    def test_pretty_prints_parsed_programs_back(self):
        for text in (FACTORIAL, THREE_WAY, "skip", "A[i]:=A[i]+27; out!A#"):
            with self.subTest(text=text):
                self.assertEqual(text, pretty(parse_program(text)))

    def test_guarded_choice_groups_all_guards(self):
        command = parse_program(THREE_WAY)

        self.assertIsInstance(command, If)
        self.assertIsInstance(command.body, Choice)
        self.assertEqual(Guard(RelOp("<", Var("x"), Num(0)), Assign("y", Neg(Num(1)))), command.body.first)

    def test_database_program_uses_array_lengths(self):
        command = parse_program(DATABASE)

        loop = command.second.second
        self.assertIsInstance(loop, Do)
        self.assertEqual(RelOp("<", Var("i"), ArrayLength("A")), loop.body.first.test)

    def test_comments_and_whitespace_are_ignored(self):
        command = parse_program("x:=1 // first\n;\n  skip")

        self.assertEqual(Seq(Assign("x", Num(1)), Skip()), command)

    def test_lexical_error_reports_position(self):
        with self.assertRaises(LexicalError) as ctx:
            parse_program("x:=1 @ 2")

        self.assertEqual(1, ctx.exception.line)
        self.assertEqual(6, ctx.exception.column)

    def test_syntactic_error_lists_expected_tokens(self):
        with self.assertRaises(SyntacticError) as ctx:
            parse_program("if x>0 -> skip")

        self.assertTrue(ctx.exception.expected)

    def test_missing_expression_is_a_syntactic_error(self):
        with self.assertRaises(SyntacticError):
            parse_program("x:=")

    def test_name_used_as_variable_and_array_is_rejected(self):
        with self.assertRaises(NameKindError):
            parse_program("A:=1; A[0]:=2")


class DialectTests(unittest.TestCase):
    def test_sanitiser_requires_security_dialect(self):
        with self.assertRaises(DialectError):
            parse_program("x:=san y")

        self.assertEqual(Assign("x", San(Var("y"))), parse_program("x:=san y", Dialect.SECURITY))

    def test_string_literals_require_security_dialect(self):
        with self.assertRaises(DialectError):
            parse_aexp('"abc"')

        self.assertEqual(Str("abc"), parse_aexp('"abc"', "security"))

    def test_channels_are_not_part_of_security_dialect(self):
        with self.assertRaises(DialectError):
            parse_program("in?x", Dialect.SECURITY)
        with self.assertRaises(DialectError):
            parse_program("out!x", Dialect.SECURITY)


class ExpressionTests(unittest.TestCase):
    def test_multiplication_binds_tighter_than_addition(self):
        expr = parse_aexp("i*m+j")

        self.assertEqual(BinOp("+", BinOp("*", Var("i"), Var("m")), Var("j")), expr)
        self.assertEqual("i*m+j", pretty(expr))

    def test_subtraction_is_left_associative(self):
        self.assertEqual("a-b-c", pretty(parse_aexp("(a-b)-c")))
        self.assertEqual("a-(b-c)", pretty(parse_aexp("a-(b-c)")))

    def test_minus_is_unary_negation(self):
        self.assertEqual(Neg(Num(1)), parse_aexp("-1"))
        self.assertEqual(BinOp("-", Var("x"), Neg(Var("y"))), parse_aexp("x - -y"))

    def test_array_reference_and_length(self):
        self.assertEqual(ArrayRef("A", BinOp("+", Var("i"), Num(1))), parse_aexp("A[i+1]"))
        self.assertEqual(ArrayLength("B"), parse_aexp("B#"))

    def test_conjunction_binds_tighter_than_disjunction(self):
        expr = parse_bexp("a>0 | b>0 & c>0")

        self.assertEqual("|", expr.op)
        self.assertEqual(LogicOp("&", RelOp(">", Var("b"), Num(0)), RelOp(">", Var("c"), Num(0))), expr.right)

    def test_negated_relation_prints_with_parentheses(self):
        expr = parse_bexp("!(x>0)")

        self.assertEqual(Not(RelOp(">", Var("x"), Num(0))), expr)
        self.assertEqual("!(x>0)", pretty(expr))


class ParseActionTests(unittest.TestCase):
    def test_actions(self):
        self.assertEqual(Assign("x", BinOp("-", Var("x"), Num(1))), parse_action("x:=x-1"))
        self.assertEqual(ArrayAssign("B", Var("t"), ArrayRef("A", Var("u"))), parse_action("B[t]:=A[u]"))
        self.assertEqual(Input("in", "x"), parse_action("in?x"))
        self.assertEqual(Output("out", Var("r")), parse_action("out!r"))
        self.assertEqual(Skip(), parse_action("skip"))

    def test_boolean_expression_is_a_test_action(self):
        action = parse_action("x>0 && y>0")

        self.assertEqual(Test(LogicOp("&&", RelOp(">", Var("x"), Num(0)), RelOp(">", Var("y"), Num(0)))), action)
        self.assertEqual("x>0 && y>0", pretty(action))


if __name__ == "__main__":
    unittest.main()
