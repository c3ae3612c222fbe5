"""Exact Gaussian-rational scalars.

Every quantity in this package is a Gaussian rational a + b*i with
arbitrary-precision rational a, b.  All identity checks are therefore exact:
there are no tolerances anywhere.

gmpy2 is used for the rational arithmetic when available (it is much faster
on deep recursions); the stdlib Fraction is a drop-in fallback.
"""

from __future__ import annotations

import math
from typing import Union

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as _mpq

RatLike = Union[int, str, "Q"]

_RZERO = _mpq(0)
_RONE = _mpq(1)


class Q:
    """Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _mpq(re))
        object.__setattr__(self, "im", _mpq(im))

    @classmethod
    def _raw(cls, re, im) -> "Q":
        q = object.__new__(cls)
        object.__setattr__(q, "re", re)
        object.__setattr__(q, "im", im)
        return q

    # -- coercion -----------------------------------------------------------

    @classmethod
    def of(cls, x) -> "Q":
        """Coerce an int, rational, string or Q into a Q."""
        if isinstance(x, Q):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, float):
            raise TypeError("floats are not allowed in exact computations")
        return cls._raw(_mpq(x), _RZERO)

    @classmethod
    def parse(cls, s: str) -> "Q":
        """Parse "p/q", "p/q+r/s*i", "p/q-r/s*i", "r/s*i", "i", "-i"."""
        t = s.strip().replace(" ", "")
        if not t:
            raise ValueError("empty scalar string")
        if "i" in t:
            body = t[:-2] if t.endswith("*i") else t[:-1]
            if not t.endswith("*i") and not t.endswith("i"):
                raise ValueError(f"bad scalar string {s!r}")
            # split off an imaginary tail at the last +/- that is not leading
            cut = max(body.rfind("+"), body.rfind("-", 1))
            if cut <= 0 and not (body.startswith("-") and cut == -1):
                cut = -1
            if cut > 0:
                re_part, im_part = body[:cut], body[cut:]
            else:
                re_part, im_part = "", body
            if im_part in ("", "+"):
                im_part = "1"
            elif im_part == "-":
                im_part = "-1"
            elif im_part.startswith("+"):
                im_part = im_part[1:]
            re_v = _mpq(re_part) if re_part else _RZERO
            return cls._raw(re_v, _mpq(im_part))
        return cls._raw(_mpq(t), _RZERO)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = other if isinstance(other, Q) else Q.of(other)
        return Q._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, Q) else Q.of(other)
        return Q._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = other if isinstance(other, Q) else Q.of(other)
        return Q._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = other if isinstance(other, Q) else Q.of(other)
        if not self.im and not o.im:
            return Q._raw(self.re * o.re, _RZERO)
        return Q._raw(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, Q) else Q.of(other)
        if not o.re and not o.im:
            raise ZeroDivisionError("division by zero scalar")
        if not self.im and not o.im:
            return Q._raw(self.re / o.re, _RZERO)
        n = o.re * o.re + o.im * o.im
        return Q._raw(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        return Q.of(other) / self

    def __neg__(self):
        return Q._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, Q):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int,)):
            return self.re == other and not self.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "Q":
        return Q._raw(self.re, -self.im)

    # -- presentation -------------------------------------------------------

    def __repr__(self) -> str:
        return f"Q({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self) -> str:
        """Serialize as "p/q", "p/q+r/s*i" or "r/s*i"; never a float."""
        if not self.im:
            return str(self.re)
        im_s = f"{self.im}*i"
        if not self.re:
            return im_s
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im_s}"

    def sort_key(self):
        return (self.re, self.im)

    def bit_size(self) -> int:
        """Max bit length over the four integers making up the scalar."""
        return max(
            int(self.re.numerator).bit_length(),
            int(self.re.denominator).bit_length(),
            int(self.im.numerator).bit_length(),
            int(self.im.denominator).bit_length(),
        )


ZERO = Q._raw(_RZERO, _RZERO)
ONE = Q._raw(_RONE, _RZERO)
I = Q._raw(_RZERO, _RONE)


def qf(re, im=0) -> Q:
    """Shorthand constructor (accepts "p/q" strings, ints, rationals)."""
    if im:
        return Q(re, im)
    return Q.of(re)


def half(x: Q) -> Q:
    return Q._raw(x.re / 2, x.im / 2)


def _rat_sqrt(r):
    """Exact square root of a nonnegative rational, or None."""
    if r < 0:
        return None
    num = int(r.numerator)
    den = int(r.denominator)
    a = math.isqrt(num)
    b = math.isqrt(den)
    if a * a == num and b * b == den:
        return _mpq(a, b)
    return None


def gaussian_sqrt(z: Q):
    """A square root of z inside Q(i), or None when none exists there."""
    a, b = z.re, z.im
    if not b:
        s = _rat_sqrt(a)
        if s is not None:
            return Q._raw(s, _RZERO)
        s = _rat_sqrt(-a)
        if s is not None:
            return Q._raw(_RZERO, s)
        return None
    r = _rat_sqrt(a * a + b * b)
    if r is None:
        return None
    x = _rat_sqrt((a + r) / 2)
    if x is None or not x:
        return None
    return Q._raw(x, b / (2 * x))
