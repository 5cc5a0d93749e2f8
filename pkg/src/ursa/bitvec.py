"""Fixed-width unsigned arithmetic over vectors of formulae.

A vector is a tuple of node ids, most significant bit first.  All
arithmetic wraps modulo ``2**width``.  Constant folding in the factory
means that operations on all-constant vectors yield all-constant vectors.
"""

from __future__ import annotations

from typing import Sequence

from .formula import FALSE, TRUE, FormulaFactory

Vector = tuple[int, ...]


class WidthMismatchError(ValueError):
    pass


def _check(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise WidthMismatchError(f"operand widths differ: {len(a)} vs {len(b)}")


def from_const(value: int, width: int) -> Vector:
    if width < 1:
        raise ValueError("width must be positive")
    value %= 1 << width
    return tuple(TRUE if (value >> (width - 1 - i)) & 1 else FALSE for i in range(width))


def to_ground(bits: Sequence[int]) -> int | None:
    value = 0
    for bit in bits:
        if bit == TRUE:
            value = (value << 1) | 1
        elif bit == FALSE:
            value <<= 1
        else:
            return None
    return value


def fresh(f: FormulaFactory, width: int) -> Vector:
    return tuple(f.fresh_var() for _ in range(width))


# -- arithmetic -------------------------------------------------------------

def _add(f: FormulaFactory, a: Sequence[int], b: Sequence[int], carry: int) -> Vector:
    n = len(a)
    out = [FALSE] * n
    for i in range(n - 1, -1, -1):
        half = f.mk_xor(a[i], b[i])
        out[i] = f.mk_xor(half, carry)
        if i:
            # the carry out of the top bit is discarded
            carry = f.mk_or(f.mk_and(a[i], b[i]), f.mk_and(carry, half))
    return tuple(out)


def add(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    _check(a, b)
    return _add(f, a, b, FALSE)


def neg(f: FormulaFactory, a: Sequence[int]) -> Vector:
    return _add(f, bit_not(f, a), from_const(0, len(a)), TRUE)


def sub(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    _check(a, b)
    return _add(f, a, bit_not(f, b), TRUE)


def mul(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    """Shift-and-add product, low ``width`` bits kept."""
    _check(a, b)
    n = len(a)
    acc: Vector = from_const(0, n)
    for shift in range(n):
        gate = b[n - 1 - shift]
        if gate == FALSE:
            continue
        partial = [FALSE] * n
        for i in range(n - shift):
            partial[i] = f.mk_and(a[i + shift], gate)
        acc = _add(f, acc, partial, FALSE)
    return acc


# -- bitwise ----------------------------------------------------------------

def bit_not(f: FormulaFactory, a: Sequence[int]) -> Vector:
    return tuple(f.mk_not(x) for x in a)


def bit_and(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    _check(a, b)
    return tuple(f.mk_and(x, y) for x, y in zip(a, b))


def bit_or(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    _check(a, b)
    return tuple(f.mk_or(x, y) for x, y in zip(a, b))


def bit_xor(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> Vector:
    _check(a, b)
    return tuple(f.mk_xor(x, y) for x, y in zip(a, b))


def shift_const(a: Sequence[int], amount: int, left: bool) -> Vector:
    n = len(a)
    k = min(amount, n)
    if left:
        return tuple(a[k:]) + (FALSE,) * k
    return (FALSE,) * k + tuple(a[:n - k])


def shift(f: FormulaFactory, a: Sequence[int], amount: int | Sequence[int], left: bool) -> Vector:
    """Logical shift by a ground or symbolic amount.

    A symbolic amount (a vector as wide as ``a``) drives a barrel shifter;
    any amount of ``width`` or more gives zero.
    """
    if isinstance(amount, int):
        return shift_const(a, amount, left)
    _check(a, amount)
    n = len(a)
    ground = to_ground(amount)
    if ground is not None:
        return shift_const(a, ground, left)
    out: Vector = tuple(a)
    overflow = FALSE
    for j in range(n):
        bit = amount[n - 1 - j]
        if (1 << j) < n:
            out = mux(f, bit, shift_const(out, 1 << j, left), out)
        else:
            overflow = f.mk_or(overflow, bit)
    if overflow != FALSE:
        keep = f.mk_not(overflow)
        out = tuple(f.mk_and(keep, x) for x in out)
    return out


# -- relations --------------------------------------------------------------

def greater(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> int:
    """Unsigned ``a > b``, scanning from the least significant bit."""
    _check(a, b)
    n = len(a)
    result = f.mk_and(a[n - 1], f.mk_not(b[n - 1]))
    for i in range(n - 2, -1, -1):
        result = f.mk_or(f.mk_and(a[i], f.mk_not(b[i])),
                         f.mk_and(result, f.mk_equiv(a[i], b[i])))
    return result


def equal(f: FormulaFactory, a: Sequence[int], b: Sequence[int]) -> int:
    _check(a, b)
    result = TRUE
    for x, y in zip(a, b):
        result = f.mk_and(result, f.mk_equiv(x, y))
    return result


def compare(f: FormulaFactory, rel: str, a: Sequence[int], b: Sequence[int]) -> int:
    if rel == "==":
        return equal(f, a, b)
    if rel == "!=":
        return f.mk_not(equal(f, a, b))
    if rel == ">":
        return greater(f, a, b)
    if rel == "<":
        return greater(f, b, a)
    if rel == "<=":
        return f.mk_not(greater(f, a, b))
    if rel == ">=":
        return f.mk_not(greater(f, b, a))
    raise ValueError(f"unknown relation {rel!r}")


# -- selection and conversion -----------------------------------------------

def mux(f: FormulaFactory, cond: int, a: Sequence[int], c: Sequence[int]) -> Vector:
    """Per bit ``(cond -> a_i) & (~cond -> c_i)``."""
    _check(a, c)
    if cond == TRUE:
        return tuple(a)
    if cond == FALSE:
        return tuple(c)
    ncond = f.mk_not(cond)
    return tuple(x if x == y else f.mk_and(f.mk_or(ncond, x), f.mk_or(cond, y))
                 for x, y in zip(a, c))


def num2bool(f: FormulaFactory, a: Sequence[int]) -> int:
    return f.mk_not(equal(f, a, from_const(0, len(a))))


def bool2num(b: int, width: int) -> Vector:
    return (FALSE,) * (width - 1) + (b,)


def sgn(f: FormulaFactory, a: Sequence[int]) -> Vector:
    return bool2num(num2bool(f, a), len(a))
