"""Coefficient functions on a chart: exact Gaussian-rational combinations of
monomials z^a zbar^b times torus characters E(k) = exp(i k.t).

A CoeffFn is a sparse dict mapping (a, b, k) -> GaussRational where a, b are
exponent tuples over the chart variables and k is an integer tuple over the
angle variables.  Conjugation swaps a <-> b, negates k and conjugates the
coefficient.  This ring is closed under products, partial derivatives and
complex conjugation, which is all the engine needs.
"""

import cmath
import re as _re

from .scalars import GaussRational, ZERO, ONE, I, format_gauss

_NAME_RE = _re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def conj_name(name):
    """Display name of the conjugated chart variable (z1 -> zb1)."""
    if name.startswith("z"):
        return "zb" + name[1:]
    return name + "_b"


class VariableTable:
    """Ordered chart and angle variable names shared by all CoeffFns of a model."""

    __slots__ = ("chart", "angle", "_index")

    def __init__(self, chart=(), angle=()):
        self.chart = tuple(chart)
        self.angle = tuple(angle)
        names = []
        for name in self.chart + self.angle:
            if not _NAME_RE.match(name) or name == "i":
                raise ValueError("bad variable name: %r" % name)
            names.append(name)
        names += [conj_name(c) for c in self.chart]
        if len(set(names)) != len(names):
            raise ValueError("variable names collide: %r" % (names,))
        self._index = {}
        for j, name in enumerate(self.chart):
            self._index[name] = ("z", j)
            self._index[conj_name(name)] = ("zb", j)
        for j, name in enumerate(self.angle):
            self._index[name] = ("t", j)

    def __eq__(self, other):
        return (
            isinstance(other, VariableTable)
            and self.chart == other.chart
            and self.angle == other.angle
        )

    def __hash__(self):
        return hash((self.chart, self.angle))

    def __repr__(self):
        return "VariableTable(chart=%r, angle=%r)" % (self.chart, self.angle)

    def slot(self, name):
        """('z'|'zb'|'t', index) for a variable or conjugate-variable name."""
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown variable %r (have %s)" % (name, sorted(self._index)))

    @property
    def zero_exps(self):
        n = len(self.chart)
        return (0,) * n, (0,) * n, (0,) * len(self.angle)


class CoeffFn:
    __slots__ = ("table", "terms")

    def __init__(self, table, terms=None):
        self.table = table
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = c

    # ---- constructors -------------------------------------------------

    @classmethod
    def constant(cls, table, value):
        value = value if isinstance(value, GaussRational) else GaussRational(value)
        if not value:
            return cls(table)
        a, b, k = table.zero_exps
        return cls(table, {(a, b, k): value})

    @classmethod
    def monomial(cls, table, name):
        """The variable `name` (or its conjugate zb-name) as a CoeffFn."""
        kind, j = table.slot(name)
        if kind == "t":
            raise ValueError(
                "angle variable %r is not itself in the ring; use characters E(k)" % name
            )
        a, b, k = table.zero_exps
        if kind == "z":
            a = a[:j] + (1,) + a[j + 1 :]
        else:
            b = b[:j] + (1,) + b[j + 1 :]
        return cls(table, {(a, b, k): ONE})

    @classmethod
    def character(cls, table, kvec):
        kvec = tuple(int(x) for x in kvec)
        if len(kvec) != len(table.angle):
            raise ValueError(
                "character needs %d exponents, got %d" % (len(table.angle), len(kvec))
            )
        a, b, _ = table.zero_exps
        return cls(table, {(a, b, kvec): ONE})

    # ---- ring operations ----------------------------------------------

    def _check(self, other):
        if self.table != other.table:
            raise ValueError("mixing coefficient functions of different models")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check(other)
        res = dict(self.terms)
        for key, c in other.terms.items():
            s = res.get(key, ZERO) + c
            if s:
                res[key] = s
            else:
                res.pop(key, None)
        return CoeffFn(self.table, res)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return CoeffFn(self.table, {key: -c for key, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check(other)
        res = {}
        for (a1, b1, k1), c1 in self.terms.items():
            for (a2, b2, k2), c2 in other.terms.items():
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                    tuple(x + y for x, y in zip(k1, k2)),
                )
                s = res.get(key, ZERO) + c1 * c2
                if s:
                    res[key] = s
                else:
                    res.pop(key, None)
        return CoeffFn(self.table, res)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, CoeffFn):
            return other
        if isinstance(other, (int, GaussRational)):
            return CoeffFn.constant(self.table, other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        if not self.terms:
            return True
        zero = self.table.zero_exps
        return set(self.terms) == {zero}

    def constant_value(self):
        if not self.terms:
            return ZERO
        zero = self.table.zero_exps
        if set(self.terms) != {zero}:
            raise ValueError("not a constant: %s" % self)
        return self.terms[zero]

    def conjugate(self):
        res = {}
        for (a, b, k), c in self.terms.items():
            res[(b, a, tuple(-x for x in k))] = c.conjugate()
        return CoeffFn(self.table, res)

    def is_real(self):
        return self == self.conjugate()

    def partial(self, name):
        """d/d(name) for a chart variable, its conjugate, or an angle variable.

        On characters, d/dt_j E(k) = (i k_j) E(k).
        """
        kind, j = self.table.slot(name)
        res = {}
        for (a, b, k), c in self.terms.items():
            if kind == "z":
                e = a[j]
                if not e:
                    continue
                key = (a[:j] + (e - 1,) + a[j + 1 :], b, k)
                inc = c * e
            elif kind == "zb":
                e = b[j]
                if not e:
                    continue
                key = (a, b[:j] + (e - 1,) + b[j + 1 :], k)
                inc = c * e
            else:
                if not k[j]:
                    continue
                key = (a, b, k)
                inc = c * GaussRational(0, k[j])
            s = res.get(key, ZERO) + inc
            if s:
                res[key] = s
            else:
                res.pop(key, None)
        return CoeffFn(self.table, res)

    # ---- evaluation ----------------------------------------------------

    def evaluate(self, point):
        """Numeric value at a point: chart vars get complex numbers, angle
        vars real numbers.  Missing variables default to 0."""
        zs = [complex(point.get(name, 0)) for name in self.table.chart]
        ts = [float(point.get(name, 0.0)) for name in self.table.angle]
        total = 0j
        for (a, b, k), c in self.terms.items():
            val = complex(c)
            for z, e in zip(zs, a):
                val *= z**e
            for z, e in zip(zs, b):
                val *= z.conjugate() ** e
            phase = sum(kj * tj for kj, tj in zip(k, ts))
            if phase:
                val *= cmath.exp(1j * phase)
            total += val
        return total

    def evaluate_exact(self, point):
        """Exact value at a Gaussian-rational point.  Angle variables take
        integer quarter-turn values (t = q*pi/2), so every character lands in
        the powers of i."""
        quarters = []
        for name in self.table.angle:
            q = point.get(name, 0)
            if not isinstance(q, int):
                raise ValueError(
                    "exact evaluation needs integer quarter-turns for %s" % name
                )
            quarters.append(q)
        zs = []
        for name in self.table.chart:
            v = point.get(name, 0)
            zs.append(v if isinstance(v, GaussRational) else GaussRational(v))
        i_powers = (ONE, I, -ONE, -I)
        total = ZERO
        for (a, b, k), c in self.terms.items():
            val = c
            for z, e in zip(zs, a):
                for _ in range(e):
                    val = val * z
            for z, e in zip(zs, b):
                zc = z.conjugate()
                for _ in range(e):
                    val = val * zc
            turn = sum(kj * qj for kj, qj in zip(k, quarters)) % 4
            if turn:
                val = val * i_powers[turn]
            total = total + val
        return total

    # ---- printing -------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: item[0])

    def _mono_text(self, key):
        a, b, k = key
        parts = []
        for name, e in zip(self.table.chart, a):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append("%s^%d" % (name, e))
        for name, e in zip(self.table.chart, b):
            if e == 1:
                parts.append(conj_name(name))
            elif e:
                parts.append("%s^%d" % (conj_name(name), e))
        if any(k):
            parts.append("E(%s)" % ",".join(str(x) for x in k))
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for key, c in self.sorted_terms():
            mono = self._mono_text(key)
            body, negative = _coeff_text(c, bool(mono))
            text = body + "*" + mono if (body and mono) else (body or mono)
            if not chunks:
                chunks.append(("-" if negative else "") + text)
            else:
                chunks.append(("-" if negative else "+") + text)
        return "".join(chunks)

    __repr__ = __str__


def _coeff_text(c, has_mono):
    """(body, negative) where body omits the sign when it was factored out.

    Mixed re/im coefficients are parenthesised so the printed term reparses
    with `*` precedence.
    """
    if c.im == 0:
        negative = c.re < 0
        mag = -c.re if negative else c.re
        if mag == 1 and has_mono:
            return "", negative
        return str(mag), negative
    if c.re == 0:
        negative = c.im < 0
        mag = -c.im if negative else c.im
        if mag == 1:
            return "i", negative
        return str(mag) + "i", negative
    return "(" + format_gauss(c) + ")", False
