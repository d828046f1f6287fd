"""Finitely presented coframe models and exact differential forms on them.

A CoframeModel is a list of degree-1 generators over a variable table.  Each
generator is either exact (it is dz, dzbar or dt of a declared variable, and
the exterior derivative of a coefficient produces it) or abstract (a real
invariant coframe element with a declared structure differential, as on a
nilmanifold).  Forms are sparse dicts mapping ascending generator-index tuples
to CoeffFn coefficients; all arithmetic is exact.

Grades tag every generator as fiber (F), holomorphic base (H) or
antiholomorphic base (A); tri-grading of forms counts tags.
"""

from fractions import Fraction

from .coeffs import CoeffFn, VariableTable, conj_name
from .scalars import GaussRational, ONE

GRADES = ("F", "H", "A")


class Generator:
    __slots__ = ("name", "grade", "slot", "diff")

    def __init__(self, name, grade, slot=None):
        if grade not in GRADES:
            raise ValueError("grade must be one of %s, got %r" % (GRADES, grade))
        self.name = name
        self.grade = grade
        self.slot = slot  # variable-slot name ('z1', 'zb1', 't1') or None
        self.diff = None  # structure differential, Form of degree 2 (None = 0)

    @property
    def exact(self):
        return self.slot is not None

    def __repr__(self):
        if self.exact:
            return "Generator(%r, %r, slot=%r)" % (self.name, self.grade, self.slot)
        return "Generator(%r, %r)" % (self.name, self.grade)


class CoframeModel:
    """Generators + variables + structure differentials, validated once.

    Build pattern: construct, set abstract differentials with set_diff, then
    finalize().  finalize checks d^2 = 0 on every generator, tag/slot
    consistency and (for invariant models) constant structure coefficients.
    """

    def __init__(self, name, table, gen_decls, invariant=False):
        self.name = name
        self.table = table if isinstance(table, VariableTable) else VariableTable(*table)
        self.invariant = bool(invariant)
        self.generators = []
        self._index = {}
        for decl in gen_decls:
            gname, grade, slot = decl
            if gname in self._index or gname == "i":
                raise ValueError("duplicate or reserved generator name %r" % gname)
            gen = Generator(gname, grade, slot)
            self._index[gname] = len(self.generators)
            self.generators.append(gen)
        self._finalized = False
        self._conj_partner = None
        self._exact_slots = None

    # ---- construction ---------------------------------------------------

    def set_diff(self, gname, form):
        if self._finalized:
            raise RuntimeError("model already finalized")
        gen = self.generators[self.index(gname)]
        if gen.exact:
            raise ValueError("exact generator %s has zero differential" % gname)
        gen.diff = form
        return self

    def finalize(self):
        table = self.table
        # slots must exist and match grades; each variable slot owned once
        owned = {}
        for idx, gen in enumerate(self.generators):
            if gen.exact:
                kind, _ = table.slot(gen.slot)
                want = {"z": "H", "zb": "A", "t": "F"}[kind]
                if gen.grade != want:
                    raise ValueError(
                        "generator %s is exact over %s and must have grade %s"
                        % (gen.name, gen.slot, want)
                    )
                if gen.slot in owned:
                    raise ValueError("two exact generators over %s" % gen.slot)
                owned[gen.slot] = idx
            elif gen.grade != "F":
                raise ValueError(
                    "abstract generator %s must have grade F (it is real)" % gen.name
                )
        for z in table.chart:
            for slot in (z, conj_name(z)):
                if slot not in owned:
                    raise ValueError("no exact generator over variable slot %s" % slot)
        for t in table.angle:
            if t not in owned:
                raise ValueError("no exact generator over angle variable %s" % t)
        # conjugation permutation on generators
        partner = list(range(len(self.generators)))
        for z in table.chart:
            a, b = owned[z], owned[conj_name(z)]
            partner[a], partner[b] = b, a
        self._conj_partner = tuple(partner)
        self._exact_slots = tuple(
            (idx, gen.slot) for idx, gen in enumerate(self.generators) if gen.exact
        )
        self._finalized = True
        # structure differentials: right model, degree 2, d^2 = 0
        for gen in self.generators:
            if gen.diff is None:
                continue
            d = gen.diff
            if d.model is not self:
                raise ValueError("differential of %s built on another model" % gen.name)
            if d and set(d.degrees()) != {2}:
                raise ValueError("differential of %s is not a 2-form" % gen.name)
            if self.invariant and not all(c.is_constant() for c in d.terms.values()):
                raise ValueError(
                    "invariant model: differential of %s must have constant"
                    " coefficients" % gen.name
                )
        for gen in self.generators:
            if gen.diff is not None and gen.diff.d():
                raise ValueError("d^2 != 0 on generator %s" % gen.name)
        return self

    # ---- lookups ----------------------------------------------------------

    @property
    def rank(self):
        return len(self.generators)

    def index(self, gname):
        try:
            return self._index[gname]
        except KeyError:
            raise KeyError("unknown generator %r (have %s)" % (gname, list(self._index)))

    def gen_names(self):
        return tuple(g.name for g in self.generators)

    def grade_of(self, idx):
        return self.generators[idx].grade

    def conj_partner(self, idx):
        return self._conj_partner[idx]

    def exact_slots(self):
        return self._exact_slots

    def subsets(self, degree=None):
        """All ascending index tuples (of one degree, or graded by degree)."""
        from itertools import combinations

        if degree is not None:
            return list(combinations(range(self.rank), degree))
        return [s for d in range(self.rank + 1) for s in self.subsets(d)]

    # ---- element constructors ----------------------------------------------

    def zero(self):
        return Form(self, {})

    def scalar(self, value):
        """A constant 0-form."""
        f = CoeffFn.constant(self.table, value)
        return Form(self, {(): f}) if f else Form(self, {})

    def fn(self, coeff):
        """Wrap a CoeffFn (or number) as a 0-form."""
        if isinstance(coeff, (int, GaussRational)):
            return self.scalar(coeff)
        return Form(self, {(): coeff}) if coeff else Form(self, {})

    def const(self, value):
        return CoeffFn.constant(self.table, value)

    def var(self, name):
        return CoeffFn.monomial(self.table, name)

    def char(self, *kvec):
        return CoeffFn.character(self.table, kvec)

    def one(self, gname, coeff=None):
        """The generator 1-form, optionally scaled."""
        c = CoeffFn.constant(self.table, 1) if coeff is None else coeff
        if isinstance(c, (int, GaussRational)):
            c = CoeffFn.constant(self.table, c)
        idx = self.index(gname)
        return Form(self, {(idx,): c}) if c else Form(self, {})

    def monomial_form(self, gnames, coeff=1):
        """coeff * g1 ^ g2 ^ ... with sign normalisation."""
        idxs = [self.index(n) for n in gnames]
        sign, subset = _sort_subset(idxs)
        if sign == 0:
            return self.zero()
        c = coeff if isinstance(coeff, CoeffFn) else CoeffFn.constant(self.table, coeff)
        if sign < 0:
            c = -c
        return Form(self, {subset: c}) if c else Form(self, {})

    def vector(self, gname, coeff=1):
        """The frame vector field dual to a generator, optionally scaled."""
        c = coeff if isinstance(coeff, CoeffFn) else CoeffFn.constant(self.table, coeff)
        return VectorField(self, {self.index(gname): c})

    def form(self, text):
        """Parse an expression in this model's generators and variables."""
        from .parser import parse_expression

        return parse_expression(self, text)

    def volume_subset(self):
        return tuple(range(self.rank))

    def __repr__(self):
        return "CoframeModel(%r, rank=%d%s)" % (
            self.name,
            self.rank,
            ", invariant" if self.invariant else "",
        )


def _sort_subset(idxs):
    """(sign, ascending tuple) of a generator index sequence; sign 0 on repeats."""
    idxs = list(idxs)
    if len(set(idxs)) != len(idxs):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idxs)):
        j = i
        while j > 0 and idxs[j - 1] > idxs[j]:
            idxs[j - 1], idxs[j] = idxs[j], idxs[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idxs)


def _merge_disjoint(s, t):
    """Merge two ascending disjoint tuples, returning (sign, merged) where sign
    counts the transpositions moving t's entries into place; 0 if they meet."""
    out = []
    sign = 1
    i = j = 0
    while i < len(s) and j < len(t):
        if s[i] == t[j]:
            return 0, ()
        if s[i] < t[j]:
            out.append(s[i])
            i += 1
        else:
            # t[j] jumps over the remaining len(s) - i entries of s
            if (len(s) - i) % 2:
                sign = -sign
            out.append(t[j])
            j += 1
    out.extend(s[i:])
    out.extend(t[j:])
    return sign, tuple(out)


class Form:
    """Exact differential form: dict of ascending index tuples -> CoeffFn."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms):
        self.model = model
        self.terms = {}
        for subset, c in terms.items():
            if not c:
                continue
            if model.invariant and not c.is_constant():
                raise ValueError(
                    "invariant model %s only carries constant coefficients"
                    % model.name
                )
            self.terms[subset] = c

    # ---- basic structure ---------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.model is other.model and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((s, tuple(sorted(c.terms.items()))) for s, c in self.terms.items())))

    def degrees(self):
        return sorted({len(s) for s in self.terms})

    def degree_part(self, k):
        return Form(self.model, {s: c for s, c in self.terms.items() if len(s) == k})

    def degree_parts(self):
        return {k: self.degree_part(k) for k in self.degrees()}

    def top_component(self):
        return self.degree_part(self.model.rank)

    def coefficient(self, gnames):
        """CoeffFn in front of g1^...^gk (sign-adjusted for the given order)."""
        sign, subset = _sort_subset([self.model.index(n) for n in gnames])
        c = self.terms.get(subset)
        if c is None:
            return CoeffFn(self.model.table)
        return c if sign > 0 else -c

    # ---- linear operations ---------------------------------------------------

    def _check(self, other):
        if self.model is not other.model:
            raise ValueError("mixing forms from different models")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        res = dict(self.terms)
        for s, c in other.terms.items():
            t = res.get(s)
            t = c if t is None else t + c
            if t:
                res[s] = t
            else:
                res.pop(s, None)
        return Form(self.model, res)

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Form(self.model, {s: -c for s, c in self.terms.items()})

    def __mul__(self, other):
        """Scalar or coefficient multiple (use ^ for the wedge)."""
        if isinstance(other, Form):
            return self.wedge(other)
        if isinstance(other, Fraction):
            other = GaussRational(other)
        if isinstance(other, (int, GaussRational)):
            other = CoeffFn.constant(self.model.table, other)
        if not isinstance(other, CoeffFn):
            return NotImplemented
        return Form(self.model, {s: c * other for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return self.wedge(other)

    def wedge(self, other):
        if not isinstance(other, Form):
            return self * other
        self._check(other)
        res = {}
        for s, cs in self.terms.items():
            for t, ct in other.terms.items():
                sign, merged = _merge_disjoint(s, t)
                if sign == 0:
                    continue
                c = cs * ct
                if sign < 0:
                    c = -c
                acc = res.get(merged)
                acc = c if acc is None else acc + c
                if acc:
                    res[merged] = acc
                else:
                    res.pop(merged, None)
        return Form(self.model, res)

    def wedge_power(self, k):
        out = self.model.scalar(1)
        for _ in range(k):
            out = out.wedge(self)
        return out

    def exp(self):
        """Expansion of e^a for a form with even degrees >= 2 (nilpotent)."""
        if any(k == 0 or k % 2 for k in self.degrees()):
            raise ValueError("exp needs a form of even positive degrees")
        out = self.model.scalar(1)
        power = self.model.scalar(1)
        m = 1
        while True:
            power = power.wedge(self) * Fraction(1, m)
            if not power:
                return out
            out = out + power
            m += 1

    # ---- differential, contraction, symmetries -----------------------------

    def d(self):
        model = self.model
        res = model.zero()
        for subset, f in self.terms.items():
            base = Form(model, {subset: ONE_COEFF(model)})
            # coefficient part: sum over exact generators dv ^ (df/dv) g_S
            for gidx, slot in model.exact_slots():
                df = f.partial(slot)
                if not df:
                    continue
                sign, merged = _merge_disjoint((gidx,), subset)
                if sign == 0:
                    continue
                c = df if sign > 0 else -df
                res = res + Form(model, {merged: c})
            # structure part: Leibniz over the generators of the monomial
            for pos, gidx in enumerate(subset):
                dg = model.generators[gidx].diff
                if dg is None or not dg:
                    continue
                front = Form(model, {subset[:pos]: ONE_COEFF(model)})
                back = Form(model, {subset[pos + 1 :]: ONE_COEFF(model)})
                sgn = -1 if pos % 2 else 1
                piece = front.wedge(dg).wedge(back) * (f if sgn > 0 else -f)
                res = res + piece
        return res

    def interior(self, X):
        """Contraction with a vector field in the dual frame."""
        model = self.model
        if X.model is not model:
            raise ValueError("vector field from another model")
        res = {}
        for subset, f in self.terms.items():
            for pos, gidx in enumerate(subset):
                xc = X.components.get(gidx)
                if not xc:
                    continue
                c = f * xc
                if pos % 2:
                    c = -c
                rest = subset[:pos] + subset[pos + 1 :]
                acc = res.get(rest)
                acc = c if acc is None else acc + c
                if acc:
                    res[rest] = acc
                else:
                    res.pop(rest, None)
        return Form(model, res)

    def lie(self, X):
        """Lie derivative along X, by the Cartan formula."""
        return self.d().interior(X) + self.interior(X).d()

    def conj(self):
        model = self.model
        res = {}
        for subset, f in self.terms.items():
            mapped = [model.conj_partner(i) for i in subset]
            sign, new = _sort_subset(mapped)
            c = f.conjugate()
            if sign < 0:
                c = -c
            acc = res.get(new)
            acc = c if acc is None else acc + c
            if acc:
                res[new] = acc
            else:
                res.pop(new, None)
        return Form(model, res)

    def is_real(self):
        return self == self.conj()

    def alpha(self):
        """Reversal: degree-k parts pick up (-1)^(k(k-1)/2)."""
        res = {}
        for subset, f in self.terms.items():
            k = len(subset)
            if (k * (k - 1) // 2) % 2:
                f = -f
            res[subset] = f
        return Form(self.model, res)

    # ---- gradings ------------------------------------------------------------

    def trigrade_of(self, subset):
        r = p = q = 0
        for i in subset:
            g = self.model.grade_of(i)
            if g == "F":
                r += 1
            elif g == "H":
                p += 1
            else:
                q += 1
        return (r, p, q)

    def trigrade(self):
        """Decompose by (fiber, holomorphic, antiholomorphic) generator counts."""
        buckets = {}
        for subset, c in self.terms.items():
            key = self.trigrade_of(subset)
            buckets.setdefault(key, {})[subset] = c
        return {key: Form(self.model, terms) for key, terms in sorted(buckets.items())}

    def component(self, r, p, q):
        terms = {
            s: c for s, c in self.terms.items() if self.trigrade_of(s) == (r, p, q)
        }
        return Form(self.model, terms)

    def bigrade(self):
        """(p, q) decomposition, ignoring fiber generators (must be absent)."""
        out = {}
        for key, part in self.trigrade().items():
            r, p, q = key
            if r:
                raise ValueError("form has fiber-generator components")
            out[(p, q)] = part
        return out

    def tri_d(self):
        """(d_F part, del part, dbar part, residual) of d on this form.

        The residual collects everything that does not raise exactly one of
        the three indices; it vanishes on product charts where all structure
        differentials are zero.
        """
        model = self.model
        d_f = model.zero()
        del_ = model.zero()
        dbar = model.zero()
        resid = model.zero()
        for key, part in self.trigrade().items():
            r, p, q = key
            for tkey, piece in part.d().trigrade().items():
                if tkey == (r + 1, p, q):
                    d_f = d_f + piece
                elif tkey == (r, p + 1, q):
                    del_ = del_ + piece
                elif tkey == (r, p, q + 1):
                    dbar = dbar + piece
                else:
                    resid = resid + piece
        return d_f, del_, dbar, resid

    def d_fiber(self):
        return self._tri_checked(0)

    def del_part(self):
        return self._tri_checked(1)

    def dbar_part(self):
        return self._tri_checked(2)

    def _tri_checked(self, which):
        parts = self.tri_d()
        if parts[3]:
            raise ValueError(
                "d does not split by tri-grading on this model (residual %s)"
                % parts[3]
            )
        return parts[which]

    # ---- evaluation ------------------------------------------------------------

    def evaluate(self, point):
        return {s: c.evaluate(point) for s, c in self.terms.items()}

    def evaluate_exact(self, point):
        out = {}
        for s, c in self.terms.items():
            v = c.evaluate_exact(point)
            if v:
                out[s] = v
        return out

    # ---- printing -----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (len(item[0]), item[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        model = self.model
        chunks = []
        for subset, c in self.sorted_terms():
            gens = "^".join(model.generators[i].name for i in subset)
            if not subset:
                text, neg = str(c), False
            elif len(c.terms) == 1:
                ((key, coeff),) = c.terms.items()
                from .coeffs import _coeff_text

                body, neg = _coeff_text(coeff, True)
                mono = c._mono_text(key)
                head = "*".join(x for x in (body, mono) if x)
                text = head + "*" + gens if head else gens
            else:
                text, neg = "(" + str(c) + ")*" + gens, False
            if not chunks:
                chunks.append(("-" if neg else "") + text)
            else:
                chunks.append(("-" if neg else "+") + text)
        return "".join(chunks)

    __repr__ = __str__


def ONE_COEFF(model):
    return CoeffFn.constant(model.table, 1)


class VectorField:
    """Vector field in the frame dual to the model's generators."""

    __slots__ = ("model", "components")

    def __init__(self, model, components):
        self.model = model
        self.components = {i: c for i, c in components.items() if c}

    def __bool__(self):
        return bool(self.components)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.model is other.model and self.components == other.components

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        res = dict(self.components)
        for i, c in other.components.items():
            t = res.get(i)
            t = c if t is None else t + c
            if t:
                res[i] = t
            else:
                res.pop(i, None)
        return VectorField(self.model, res)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return VectorField(self.model, {i: -c for i, c in self.components.items()})

    def __mul__(self, other):
        if isinstance(other, Fraction):
            other = GaussRational(other)
        if isinstance(other, (int, GaussRational)):
            other = CoeffFn.constant(self.model.table, other)
        if not isinstance(other, CoeffFn):
            return NotImplemented
        return VectorField(self.model, {i: c * other for i, c in self.components.items()})

    __rmul__ = __mul__

    def conj(self):
        model = self.model
        res = {}
        for i, c in self.components.items():
            j = model.conj_partner(i)
            cc = c.conjugate()
            acc = res.get(j)
            res[j] = cc if acc is None else acc + cc
        return VectorField(model, res)

    def apply(self, f):
        """Derivation on a CoeffFn: exact slots differentiate, abstract frame
        directions annihilate coefficients."""
        out = CoeffFn(self.model.table)
        for gidx, slot in self.model.exact_slots():
            c = self.components.get(gidx)
            if c:
                out = out + c * f.partial(slot)
        return out

    def pair(self, one_form):
        """one_form(X) as a CoeffFn."""
        contracted = one_form.interior(self)
        return contracted.terms.get((), CoeffFn(self.model.table))

    def bracket(self, other):
        """Lie bracket via the coframe: g([X,Y]) = X(g(Y)) - Y(g(X)) - dg(X,Y)."""
        model = self.model
        if other.model is not model:
            raise ValueError("vector fields from different models")
        comps = {}
        for idx, gen in enumerate(model.generators):
            g = Form(model, {(idx,): ONE_COEFF(model)})
            gx = self.pair(g)
            gy = other.pair(g)
            val = self.apply(gy) - other.apply(gx)
            if gen.diff is not None and gen.diff:
                dg_xy = gen.diff.interior(self).interior(other)
                # interior twice: (i_Y i_X dg) = dg(X, Y)
                val = val - dg_xy.terms.get((), CoeffFn(model.table))
            if val:
                comps[idx] = val
        return VectorField(model, comps)

    def __str__(self):
        if not self.components:
            return "0"
        names = self.model.gen_names()
        bits = []
        for i in sorted(self.components):
            bits.append("(%s)*@%s" % (self.components[i], names[i]))
        return " + ".join(bits)

    __repr__ = __str__
