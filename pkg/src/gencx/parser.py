"""Model-document grammar, the expression parser, and the canonical printer.

Documents are INI-shaped.  `[vars]` declares the coefficient variables and
model flags; each `[generator.<name>]` section declares one coframe
generator (fields grade, slot, diff); `[form.<name>]` sections bind named
forms; `[gcs]` holds the spinor data B / omega / Omega; `[bundle]` holds
l / beta / presentation for torus bundles over the declared base.

Expressions use `+ - * / ^` over generators, chart variables, rational and
Gaussian literals, with `d(...)`, `conj(...)`, `exp(...)` and the character
atoms `E(k1,...,kn)`.  `^` is the wedge, except `var^int` which is a power,
matching the printer.  All diagnostics carry line and column.
"""

import re
from fractions import Fraction

from .bundles import build_bundle, build_chart_bundle, lift_form
from .coeffs import CoeffFn, VariableTable
from .model import CoframeModel
from .scalars import GaussRational


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = "line %d" % line
            if column is not None:
                where += ", col %d" % column
            where += ": "
        super().__init__(where + message)


# ---- expression tokenizer ---------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?i?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text, line):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ParseError("unexpected character %r" % stripped[0], line, col)
        pos = m.end()
        for kind in ("num", "name", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val, m.start(kind) + 1))
                break
    tokens.append(("end", "", len(text) + 1))
    return tokens


def _scalar_from_literal(text):
    if text.endswith("i"):
        body = text[:-1] or "1"
        return GaussRational(0, Fraction(body))
    return GaussRational(Fraction(text))


def _is_scalar(form):
    return form.degrees() in ([], [0])


class _ExprParser:
    """Recursive descent over the token list; values are Forms."""

    def __init__(self, model, tokens, line, env=None, allow_d=True):
        self.model = model
        self.tokens = tokens
        self.line = line
        self.env = env or {}
        self.allow_d = allow_d
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.line, tok[2])

    def expect_op(self, op):
        kind, val, _ = self.peek()
        if kind != "op" or val != op:
            self.fail("expected %r" % op)
        return self.take()

    def parse(self):
        form = self.sum()
        if self.peek()[0] != "end":
            self.fail("trailing input %r" % self.peek()[1])
        return form

    def sum(self):
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        form = self.product()
        if negate:
            form = -form
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.product()
                form = form - rhs if val == "-" else form + rhs
            else:
                return form

    def product(self):
        form = self.wedge()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                tok = self.take()
                rhs = self.wedge()
                if val == "*":
                    form = self._multiply(form, rhs, tok)
                else:
                    form = self._divide(form, rhs, tok)
            else:
                return form

    def wedge(self):
        form = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "^":
                tok = self.take()
                nkind, nval, _ = self.peek()
                if (
                    nkind == "num"
                    and not nval.endswith("i")
                    and "/" not in nval
                    and _is_scalar(form)
                ):
                    self.take()
                    form = self._power(form, int(nval), tok)
                else:
                    form = form ^ self.atom()
            else:
                return form

    def atom(self):
        kind, val, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.atom()
        if kind == "op" and val == "(":
            self.take()
            form = self.sum()
            self.expect_op(")")
            return form
        if kind == "num":
            self.take()
            return self.model.fn(_scalar_from_literal(val))
        if kind == "name":
            self.take()
            if val == "i":
                return self.model.fn(GaussRational(0, 1))
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                return self.call(val, col)
            return self.name_atom(val, col)
        self.fail("expected a value, found %r" % (val or "end of input"))

    def call(self, fname, col):
        self.expect_op("(")
        if fname == "E":
            kvec = self.character_args(col)
            table = self.model.table
            if len(kvec) != len(table.angle):
                raise ParseError(
                    "E(...) needs %d integers, one per angle variable"
                    % len(table.angle),
                    self.line,
                    col,
                )
            return self.model.fn(CoeffFn.character(table, tuple(kvec)))
        arg = self.sum()
        self.expect_op(")")
        if fname == "d":
            if not self.allow_d:
                raise ParseError(
                    "d(...) is not allowed inside structure differentials;"
                    " write the 2-form explicitly",
                    self.line,
                    col,
                )
            return arg.d()
        if fname == "conj":
            return arg.conj()
        if fname == "exp":
            return arg.exp()
        raise ParseError("unknown function %r" % fname, self.line, col)

    def character_args(self, col):
        out = []
        while True:
            sign = 1
            kind, val, _ = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
            kind, val, _ = self.peek()
            if kind != "num" or "/" in val or val.endswith("i"):
                self.fail("E(...) arguments must be integers")
            self.take()
            out.append(sign * int(val))
            kind, val, _ = self.peek()
            if kind == "op" and val == ",":
                self.take()
                continue
            self.expect_op(")")
            return out

    def name_atom(self, name, col):
        if name in self.env:
            return self.env[name]
        model = self.model
        try:
            model.index(name)
        except KeyError:
            pass
        else:
            return model.one(name)
        try:
            return model.fn(CoeffFn.monomial(model.table, name))
        except (KeyError, ValueError):
            pass
        raise ParseError(
            "unknown name %r (not a generator, variable, or bound form)" % name,
            self.line,
            col,
        )

    def _multiply(self, lhs, rhs, tok):
        if _is_scalar(rhs):
            c = rhs.terms.get((), None)
            return lhs * c if c is not None else lhs.model.zero()
        if _is_scalar(lhs):
            c = lhs.terms.get((), None)
            return rhs * c if c is not None else lhs.model.zero()
        raise ParseError(
            "use ^ to multiply forms of positive degree", self.line, tok[2]
        )

    def _divide(self, lhs, rhs, tok):
        if not _is_scalar(rhs):
            raise ParseError("can only divide by a constant scalar", self.line, tok[2])
        c = rhs.terms.get((), None)
        if c is None or not c.is_constant() or not c.constant_value():
            raise ParseError(
                "can only divide by a nonzero constant scalar", self.line, tok[2]
            )
        return lhs * c.constant_value().inverse()

    def _power(self, base, exponent, tok):
        c = base.terms.get((), None)
        if c is None:
            return self.model.zero() if exponent else self.model.scalar(1)
        acc = CoeffFn.constant(self.model.table, 1)
        for _ in range(exponent):
            acc = acc * c
        return self.model.fn(acc)


def parse_expression(model, text, line=None, env=None, allow_d=True):
    """One expression over a model's generators and variables, as a Form."""
    tokens = _tokenize(text, line)
    return _ExprParser(model, tokens, line, env=env, allow_d=allow_d).parse()


# ---- document structure -----------------------------------------------------


class Section:
    __slots__ = ("name", "line", "fields")

    def __init__(self, name, line):
        self.name = name
        self.line = line
        self.fields = {}  # key -> (value text, line)


def _split_sections(text):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError("unterminated section header", lineno, len(raw))
            name = line[1:-1].strip()
            if not name:
                raise ParseError("empty section name", lineno, 1)
            current = Section(name, lineno)
            sections.append(current)
            continue
        if current is None:
            raise ParseError("field outside any [section]", lineno, 1)
        if "=" not in line:
            raise ParseError("expected key = value", lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip()
        if key in current.fields:
            raise ParseError("duplicate key %r in [%s]" % (key, current.name), lineno, 1)
        current.fields[key] = (value.strip(), lineno)
    return sections


def _name_list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


_GRADE_FOR_SLOT_KIND = {"z": "H", "zb": "A", "t": "F"}


class ModelDocument:
    """A parsed model file: base model, optional bundle, named forms, gcs."""

    __slots__ = (
        "source",
        "name",
        "model",
        "bundle",
        "forms",
        "gcs",
        "beta",
        "l",
        "presentation",
    )

    def __init__(self, source, name, model, bundle, forms, gcs, beta, l, presentation):
        self.source = source
        self.name = name
        self.model = model
        self.bundle = bundle
        self.forms = forms
        self.gcs = gcs
        self.beta = beta
        self.l = l
        self.presentation = presentation

    @property
    def exposed(self):
        """The model that [form] and [gcs] expressions live on."""
        return self.bundle.total if self.bundle is not None else self.model

    def rho(self):
        """exp(B + i omega) ^ Omega from the [gcs] section (or None)."""
        if not self.gcs:
            return None
        model = self.exposed
        B = self.gcs.get("B", model.zero())
        omega = self.gcs.get("omega", model.zero())
        Omega = self.gcs.get("Omega", model.scalar(1))
        exponent = B + omega * GaussRational(0, 1)
        rho = exponent.exp() ^ Omega if exponent else Omega
        return rho


def parse_model(text, name=None):
    """Parse a model document; raises ParseError with line/column on failure."""
    sections = _split_sections(text)
    by_name = {}
    gens = []
    forms = []
    for sec in sections:
        if sec.name.startswith("generator."):
            gens.append(sec)
        elif sec.name.startswith("form."):
            forms.append(sec)
        elif sec.name in ("vars", "gcs", "bundle"):
            if sec.name in by_name:
                raise ParseError("duplicate section [%s]" % sec.name, sec.line)
            by_name[sec.name] = sec
        else:
            raise ParseError("unknown section [%s]" % sec.name, sec.line)
    if not gens:
        raise ParseError("document declares no [generator.*] sections", 1)

    var_sec = by_name.get("vars")
    chart = ()
    angle = ()
    invariant = True
    if var_sec is not None:
        for key, (value, lineno) in var_sec.fields.items():
            if key == "name":
                name = value
            elif key == "chart":
                chart = _name_list(value)
            elif key == "angle":
                angle = _name_list(value)
            elif key == "invariant":
                if value not in ("true", "false"):
                    raise ParseError("invariant must be true or false", lineno)
                invariant = value == "true"
            else:
                raise ParseError("unknown [vars] key %r" % key, lineno)
    table = VariableTable(chart=chart, angle=angle)

    decls = []
    diff_fields = []
    seen = set()
    for sec in gens:
        gname = sec.name[len("generator.") :]
        if gname in seen:
            raise ParseError("duplicate generator %r" % gname, sec.line)
        seen.add(gname)
        grade = None
        slot = None
        diff = None
        for key, (value, lineno) in sec.fields.items():
            if key == "grade":
                if value not in ("H", "A", "F"):
                    raise ParseError("grade must be H, A, or F", lineno)
                grade = value
            elif key == "slot":
                slot = value
            elif key == "diff":
                diff = (value, lineno)
            else:
                raise ParseError("unknown generator key %r" % key, lineno)
        if slot is not None:
            try:
                kind, _ = table.slot(slot)
            except (KeyError, ValueError):
                raise ParseError(
                    "slot %r is not a declared variable" % slot, sec.line
                )
            want = _GRADE_FOR_SLOT_KIND[kind]
            if grade is None:
                grade = want
            elif grade != want:
                raise ParseError(
                    "generator over slot %s must have grade %s" % (slot, want),
                    sec.line,
                )
            if diff is not None:
                raise ParseError(
                    "exact generator %s cannot carry a diff" % gname, diff[1]
                )
        if grade is None:
            raise ParseError("generator %s needs a grade" % gname, sec.line)
        decls.append((gname, grade, slot))
        if diff is not None:
            diff_fields.append((gname, diff[0], diff[1]))

    name = name or "model"
    # evaluate structure differentials on a structure-free twin, then rebuild
    scratch = CoframeModel(name, table, decls, invariant=invariant).finalize()
    diff_forms = {}
    for gname, value, lineno in diff_fields:
        form = parse_expression(scratch, value, line=lineno, allow_d=False)
        if form and form.degrees() != [2]:
            raise ParseError(
                "diff of %s must be a 2-form (got degrees %s)"
                % (gname, form.degrees()),
                lineno,
            )
        diff_forms[gname] = form
    model = CoframeModel(name, table, decls, invariant=invariant)
    for gname, form in diff_forms.items():
        if form:
            model.set_diff(gname, lift_form(form, model))
    try:
        model.finalize()
    except ValueError as exc:
        raise ParseError(str(exc), gens[0].line)

    bundle = None
    beta = None
    l = None
    presentation = None
    bun_sec = by_name.get("bundle")
    if bun_sec is not None:
        presentation = "invariant"
        beta_text = None
        for key, (value, lineno) in bun_sec.fields.items():
            if key == "l":
                try:
                    l = int(value)
                except ValueError:
                    raise ParseError("l must be an integer", lineno)
            elif key == "beta":
                beta_text = (value, lineno)
            elif key == "presentation":
                if value not in ("invariant", "chart"):
                    raise ParseError(
                        "presentation must be invariant or chart", lineno
                    )
                presentation = value
            elif key == "base":
                if value != name:
                    raise ParseError(
                        "base %r does not name this document's model" % value, lineno
                    )
            else:
                raise ParseError("unknown [bundle] key %r" % key, lineno)
        if l is None:
            raise ParseError("[bundle] needs l", bun_sec.line)
        beta = [None] * (2 * l)
        if beta_text is not None:
            items = [x.strip() for x in beta_text[0].split(",")]
            if len(items) != 2 * l:
                raise ParseError(
                    "beta needs %d comma-separated entries" % (2 * l), beta_text[1]
                )
            beta = [
                parse_expression(model, item, line=beta_text[1]) for item in items
            ]
        builder = build_bundle if presentation == "invariant" else build_chart_bundle
        try:
            bundle = builder(model, l, beta, name=name)
        except (ValueError, AssertionError) as exc:
            raise ParseError(str(exc), bun_sec.line)

    exposed = bundle.total if bundle is not None else model
    env = {}
    form_bindings = {}
    for sec in forms:
        fname = sec.name[len("form.") :]
        if fname in form_bindings:
            raise ParseError("duplicate form %r" % fname, sec.line)
        if "expr" not in sec.fields:
            raise ParseError("[form.%s] needs expr" % fname, sec.line)
        value, lineno = sec.fields["expr"]
        form_bindings[fname] = parse_expression(exposed, value, line=lineno, env=env)
        env[fname] = form_bindings[fname]

    gcs = {}
    gcs_sec = by_name.get("gcs")
    if gcs_sec is not None:
        for key, (value, lineno) in gcs_sec.fields.items():
            if key not in ("B", "omega", "Omega"):
                raise ParseError("unknown [gcs] key %r" % key, lineno)
            gcs[key] = parse_expression(exposed, value, line=lineno, env=env)

    return ModelDocument(
        text, name, model, bundle, form_bindings, gcs, beta, l, presentation
    )


# ---- canonical printer ------------------------------------------------------


def print_model(doc):
    """Canonical text of a document; parse(print_model(d)) reproduces d."""
    out = []
    model = doc.model
    out.append("[vars]")
    out.append("name = %s" % doc.name)
    if model.table.chart:
        out.append("chart = %s" % ", ".join(model.table.chart))
    if model.table.angle:
        out.append("angle = %s" % ", ".join(model.table.angle))
    out.append("invariant = %s" % ("true" if model.invariant else "false"))
    for gen in model.generators:
        out.append("")
        out.append("[generator.%s]" % gen.name)
        out.append("grade = %s" % gen.grade)
        if gen.slot is not None:
            out.append("slot = %s" % gen.slot)
        if gen.diff:
            out.append("diff = %s" % gen.diff)
    if doc.bundle is not None:
        out.append("")
        out.append("[bundle]")
        out.append("l = %d" % doc.l)
        out.append("presentation = %s" % doc.presentation)
        if any(b is not None and bool(b) for b in doc.beta):
            texts = []
            for b in doc.beta:
                texts.append(str(b) if b is not None and b else "0")
            out.append("beta = %s" % ", ".join(texts))
    for fname in sorted(doc.forms):
        out.append("")
        out.append("[form.%s]" % fname)
        out.append("expr = %s" % doc.forms[fname])
    if doc.gcs:
        out.append("")
        out.append("[gcs]")
        for key in ("B", "omega", "Omega"):
            if key in doc.gcs:
                out.append("%s = %s" % (key, doc.gcs[key]))
    return "\n".join(out) + "\n"
