"""Tiny arithmetic-expression evaluator shared by the text formats.

Expressions are parsed with :mod:`ast` and only integer literals, the
names supplied by the caller, ``+ - * /``, unary minus, parentheses and
integer powers (written ``^`` or ``**``) are accepted.
"""

import ast


class ExpressionError(ValueError):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def evaluate(text, names, constant):
    """Evaluate ``text`` with ``names`` bound; integer literals go through ``constant``."""
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError(f"empty expression: {text!r}")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree.body, names, constant, text)


def _eval(node, names, constant, text):
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return constant(node.value)
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval(node.operand, names, constant, text)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exponent = node.right
            sign = 1
            if isinstance(exponent, ast.UnaryOp) and isinstance(exponent.op, ast.USub):
                sign, exponent = -1, exponent.operand
            if not (isinstance(exponent, ast.Constant) and type(exponent.value) is int):
                raise ExpressionError(f"exponents must be integer literals in {text!r}")
            return _eval(node.left, names, constant, text) ** (sign * exponent.value)
        op = _BINOPS.get(type(node.op))
        if op is not None:
            left, right = _eval(node.left, names, constant, text), _eval(node.right, names, constant, text)
            try:
                return op(left, right)
            except (TypeError, ZeroDivisionError) as exc:
                raise ExpressionError(f"cannot evaluate {text!r}: {exc}") from None
    raise ExpressionError(f"unsupported syntax in {text!r}")
