"""Exact Gaussian rational scalars: a + b*i with a, b rational."""

from fractions import Fraction

_RAT_TYPES = (int, Fraction)


class GaussRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return "GaussRational(%r, %r)" % (str(self.re), str(self.im))

    def __str__(self):
        return format_gauss(self)

    def __eq__(self, other):
        if isinstance(other, _RAT_TYPES):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self):
        return not self

    def is_real(self):
        return self.im == 0

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(other.re - self.re, other.im - self.im)

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _coerce(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, _RAT_TYPES):
        return GaussRational(x)
    return None


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)


def _format_rat(q):
    return str(q)  # Fraction prints p/q, or p when q == 1


def format_gauss(x):
    """Print in the literal syntax the expression grammar accepts.

    0 -> "0"; pure real -> "p/q"; pure imaginary -> "p/qi" (or "i", "-i");
    mixed -> "p/q+r/si" with an explicit sign between the parts.
    """
    re, im = x.re, x.im
    if im == 0:
        return _format_rat(re)
    if im == 1:
        imtxt = "i"
    elif im == -1:
        imtxt = "-i"
    else:
        imtxt = _format_rat(im) + "i"
    if re == 0:
        return imtxt
    if im > 0 and imtxt[0] != "-":
        return _format_rat(re) + "+" + imtxt
    return _format_rat(re) + imtxt


def parse_gauss(text):
    """Parse 'p/q', 'p/qi', 'i', '-i', or 'p/q+r/si' (either sign)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian rational literal")
    # split into at most two signed parts, keeping the leading sign attached
    parts = []
    start = 0
    for pos in range(1, len(s)):
        if s[pos] in "+-" and s[pos - 1] not in "+-/":
            parts.append(s[start:pos])
            start = pos
    parts.append(s[start:])
    if len(parts) > 2:
        raise ValueError("not a Gaussian rational literal: %r" % text)
    re = Fraction(0)
    im = Fraction(0)
    seen_re = False
    seen_im = False
    for part in parts:
        if part.endswith("i"):
            if seen_im:
                raise ValueError("two imaginary parts in %r" % text)
            seen_im = True
            body = part[:-1]
            if body in ("", "+"):
                im = Fraction(1)
            elif body == "-":
                im = Fraction(-1)
            else:
                im = Fraction(body)
        else:
            if seen_re:
                raise ValueError("two real parts in %r" % text)
            seen_re = True
            re = Fraction(part)
    return GaussRational(re, im)
