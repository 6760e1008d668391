"""Exact sparse multivariate polynomial arithmetic.

Coefficients are exact rationals (``fractions.Fraction``) or elements of a
prime field F_p with p < 2^31, tagged by the ring's :class:`Domain`.  A
:class:`Polynomial` is immutable: terms are stored as a tuple of
(exponent tuple, coefficient) pairs sorted in descending degrevlex order, so
iteration, printing and hashing are deterministic.  All operations are pure
functions and values can be shared freely across threads.

Monomials are plain exponent tuples; variables are positionally indexed and
names are display metadata only.  Exponents are restricted to 32-bit
non-negative integers, overflow raises instead of wrapping.

The expression grammar accepted by :func:`parse_polynomial`::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := ident | rational | '(' expr ')'
    ident    := [A-Za-z_][A-Za-z0-9_]*
    rational := int ('/' uint)?

Whitespace is insignificant and multiplication is always explicit (``2*x``,
never ``2x``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    ArityMismatch,
    ExponentOverflow,
    InputError,
    NegativeExponent,
    PolynomialSyntaxError,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)

MAX_EXPONENT = 2**31 - 1

Monomial = tuple  # exponent vector, one entry per ring variable
Scalar = Union[Fraction, int]


# ----------------------------------------------------------------- monomials

def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """Quotient exponent vector b - a; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


# ----------------------------------------------------------- monomial orders

@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order used for leading terms and division.

    kinds:
      * ``lex``             global, 1 smallest
      * ``degrevlex``       global, 1 smallest (the ring default)
      * ``local_degrevlex`` local, 1 largest (lowest total degree leads)
      * ``elim``            global block order; the variables in ``block``
                            are compared first, by total degree, so they are
                            eliminated by a Groebner basis computation
    """

    kind: str
    block: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "local_degrevlex", "elim"):
            raise InputError(f"unknown monomial order kind {self.kind!r}")

    @property
    def is_global(self) -> bool:
        return self.kind != "local_degrevlex"

    @property
    def is_local(self) -> bool:
        return self.kind == "local_degrevlex"

    def key(self, m: Monomial):
        """Sort key: larger key means larger monomial under the order."""
        if self.kind == "lex":
            return m
        if self.kind == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if self.kind == "local_degrevlex":
            return (-sum(m), tuple(-e for e in reversed(m)))
        # elim: compare the dropped block by degrevlex first, then the rest
        inb = [e for i, e in enumerate(m) if i in self.block]
        out = [e for i, e in enumerate(m) if i not in self.block]
        return (
            sum(inb),
            tuple(-e for e in reversed(inb)),
            sum(out),
            tuple(-e for e in reversed(out)),
        )


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")
LOCAL_DEGREVLEX = MonomialOrder("local_degrevlex")


def elimination_order(block: Iterable[int]) -> MonomialOrder:
    """Block order eliminating the given variable indices."""
    return MonomialOrder("elim", frozenset(block))


# ------------------------------------------------------- coefficient domains

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Domain:
    """Coefficient domain tag: char 0 is Q, a prime p is F_p.

    F_p values are plain ints in [0, p); rationals are Fractions, which are
    always in lowest terms with positive denominator.
    """

    char: int = 0

    def __post_init__(self):
        if self.char != 0:
            if self.char >= 2**31 or not _is_prime(self.char):
                raise InputError(f"characteristic must be 0 or a prime < 2^31, got {self.char}")

    @property
    def is_prime_field(self) -> bool:
        return self.char != 0

    def coerce(self, value) -> Scalar:
        if self.char == 0:
            return Fraction(value)
        p = self.char
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise InputError(f"denominator of {value} is divisible by p = {p}")
            return value.numerator * pow(den, -1, p) % p
        return int(value) % p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.char if self.char else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.char if self.char else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.char if self.char else a * b

    def neg(self, a: Scalar) -> Scalar:
        return -a % self.char if self.char else -a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        if self.char:
            return a * pow(b, -1, self.char) % self.char
        return a / b

    def pow(self, a: Scalar, e: int) -> Scalar:
        return pow(a, e, self.char) if self.char else a**e

    def scalar_str(self, a: Scalar) -> str:
        return str(a)


QQ = Domain(0)


def GF(p: int) -> Domain:
    return Domain(p)


# -------------------------------------------------------------------- rings

_IDENT_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _valid_ident(name: str) -> bool:
    return bool(name) and not name[0].isdigit() and set(name) <= _IDENT_OK


@dataclass(frozen=True)
class Ring:
    """A polynomial ring: variable names plus a coefficient domain."""

    variables: tuple
    domain: Domain = QQ

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        for name in self.variables:
            if not _valid_ident(name):
                raise InputError(f"invalid variable name {name!r}")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value) -> "Polynomial":
        return Polynomial(self, {(0,) * self.arity: value})

    def variable(self, i: int) -> "Polynomial":
        if not 0 <= i < self.arity:
            raise IndexError(f"variable index {i} out of range")
        exps = [0] * self.arity
        exps[i] = 1
        return Polynomial(self, {tuple(exps): 1})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __repr__(self):
        dom = "QQ" if self.domain.char == 0 else f"GF({self.domain.char})"
        return f"{dom}[{','.join(self.variables)}]"


# -------------------------------------------------------------- polynomials

class Polynomial:
    """Immutable sparse polynomial over a :class:`Ring`.

    Terms are merged, zero coefficients dropped, and storage is sorted in
    descending degrevlex order, which makes printing canonical.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict = {}
        coerce = ring.domain.coerce
        add = ring.domain.add
        arity = ring.arity
        for mono, coeff in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != arity:
                raise ArityMismatch(f"monomial {mono} has wrong length for {ring!r}")
            for e in mono:
                if e < 0:
                    raise InputError(f"negative exponent in monomial {mono}")
                if e > MAX_EXPONENT:
                    raise ExponentOverflow(f"exponent {e} exceeds 32-bit range")
            c = coerce(coeff)
            if mono in merged:
                merged[mono] = add(merged[mono], c)
            else:
                merged[mono] = c
        cleaned = [(m, c) for m, c in merged.items() if c != 0]
        cleaned.sort(key=lambda mc: DEGREVLEX.key(mc[0]), reverse=True)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", tuple(cleaned))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # ---------------------------------------------------------- inspection

    def terms(self):
        """Terms as (monomial, coefficient) pairs, descending degrevlex."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, mono: Monomial) -> Scalar:
        for m, c in self._terms:
            if m == mono:
                return c
        return self.ring.domain.coerce(0)

    def constant_term(self) -> Scalar:
        return self.coefficient((0,) * self.ring.arity)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(mono_degree(m) for m, _ in self._terms)

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        """The order-maximal (monomial, coefficient) pair."""
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        key = order.key
        return max(self._terms, key=lambda mc: key(mc[0]))

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(m[i] for m, _ in self._terms)

    # ---------------------------------------------------------- arithmetic

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"operands in {self.ring!r} and {other.ring!r}")

    def _coerce_operand(self, other):
        if isinstance(other, Polynomial):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        add = self.ring.domain.add
        for m, c in other._terms:
            out[m] = add(out[m], c) if m in out else c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.domain.neg
        return Polynomial(self.ring, [(m, neg(c)) for m, c in self._terms])

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        dom = self.ring.domain
        out: dict = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                m = mono_mul(m1, m2)
                c = dom.mul(c1, c2)
                out[m] = dom.add(out[m], c) if m in out else c
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def mul_term(self, mono: Monomial, coeff: Scalar) -> "Polynomial":
        """Multiply by a single term, the workhorse of division loops."""
        dom = self.ring.domain
        return Polynomial(
            self.ring, [(mono_mul(m, mono), dom.mul(c, coeff)) for m, c in self._terms]
        )

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise InputError(f"polynomial exponent must be a non-negative integer, got {e!r}")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e > 1
            e >>= 1
            if base_needed and e:
                base = base * base
        return result

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        _, lc = self.leading_term(order)
        dom = self.ring.domain
        return Polynomial(self.ring, [(m, dom.div(c, lc)) for m, c in self._terms])

    # -------------------------------------------------------------- calculus

    def derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable i."""
        if not 0 <= i < self.ring.arity:
            raise IndexError(f"variable index {i} out of range for {self.ring!r}")
        dom = self.ring.domain
        out = []
        for m, c in self._terms:
            e = m[i]
            if e == 0:
                continue
            mono = list(m)
            mono[i] = e - 1
            out.append((tuple(mono), dom.mul(c, dom.coerce(e))))
        return Polynomial(self.ring, out)

    # ----------------------------------------------------------- evaluation

    def evaluate(self, point: Sequence) -> Scalar:
        """Exact value at a point with scalar coordinates."""
        if len(point) != self.ring.arity:
            raise ArityMismatch(
                f"point has {len(point)} coordinates, ring arity is {self.ring.arity}"
            )
        dom = self.ring.domain
        coords = [dom.coerce(x) for x in point]
        total = dom.coerce(0)
        for m, c in self._terms:
            v = c
            for x, e in zip(coords, m):
                if e:
                    v = dom.mul(v, dom.pow(x, e))
            total = dom.add(total, v)
        return total

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: substitute values[i] for variable i.

        All values must share one ring, which becomes the result ring.
        """
        if len(values) != self.ring.arity:
            raise ArityMismatch("substitution needs one value per variable")
        target = values[0].ring
        for v in values:
            if v.ring != target:
                raise RingMismatch("substitution values live in different rings")
        powers: dict = {}

        def power(i: int, e: int) -> Polynomial:
            if (i, e) not in powers:
                powers[(i, e)] = values[i] ** e
            return powers[(i, e)]

        acc = target.zero()
        for m, c in self._terms:
            part = target.constant(c if self.ring.domain.char == 0 else int(c))
            for i, e in enumerate(m):
                if e:
                    part = part * power(i, e)
            acc = acc + part
        return acc

    def shift(self, point: Sequence) -> "Polynomial":
        """Translate the point to the origin: substitute x_i -> x_i + P_i."""
        if len(point) != self.ring.arity:
            raise ArityMismatch("shift point has wrong arity")
        values = [
            self.ring.variable(i) + self.ring.constant(point[i]) for i in range(self.ring.arity)
        ]
        return self.substitute(values)

    def transport(self, target: Ring, index_map: Sequence[int]) -> "Polynomial":
        """Re-home into ``target``, sending old variable i to index_map[i]."""
        out = []
        for m, c in self._terms:
            exps = [0] * target.arity
            for i, e in enumerate(m):
                if e:
                    exps[index_map[i]] = e
            out.append((tuple(exps), c))
        return Polynomial(target, out)

    def change_domain(self, target: Ring) -> "Polynomial":
        """Same variables, new coefficient domain (e.g. reduce Q -> F_p)."""
        if target.variables != self.ring.variables:
            raise RingMismatch("change_domain requires identical variable lists")
        return Polynomial(target, [(m, target.domain.coerce(c)) for m, c in self._terms])

    # ------------------------------------------------------------- identity

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self == self.ring.constant(other)
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, self._terms)))
        return self._hash

    # -------------------------------------------------------------- display

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.variables
        rational = self.ring.domain.char == 0
        pieces = []
        for k, (m, c) in enumerate(self._terms):
            if rational and c < 0:
                sign = "-" if k == 0 else " - "
                mag = -c
            else:
                sign = "" if k == 0 else " + "
                mag = c
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(sign + body)
        return "".join(pieces)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


# -------------------------------------------------------------------- parser

def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise PolynomialSyntaxError(f"unexpected character {ch!r}", _byte_offset(text, i))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok) -> None:
        raise PolynomialSyntaxError(message, _byte_offset(self.text, tok[2]))

    def parse(self) -> Polynomial:
        poly = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return poly

    def expr(self) -> Polynomial:
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise NegativeExponent(_byte_offset(self.text, tok[2]))
            if tok[0] != "int":
                self.fail("expected integer exponent", tok)
            self.take()
            e = int(tok[1])
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds 32-bit range")
            return base**e
        return base

    def base(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            closing = self.peek()
            if closing[0] != ")":
                self.fail("expected ')'", closing)
            self.take()
            return inner
        if tok[0] == "int":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "int":
                    self.fail("expected integer denominator", den_tok)
                self.take()
                den = int(den_tok[1])
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return self.ring.constant(Fraction(num, den))
            return self.ring.constant(num)
        if tok[0] == "ident":
            self.take()
            name = tok[1]
            try:
                idx = self.ring.index(name)
            except UnknownVariable:
                raise UnknownVariable(name, _byte_offset(self.text, tok[2])) from None
            return self.ring.variable(idx)
        self.fail(f"unexpected {tok[1]!r}" if tok[1] else "unexpected end of input", tok)


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse an expression into canonical form; printing round-trips."""
    return _Parser(text, ring).parse()


def parse_point(text: str, arity: int):
    """Parse comma-separated rational coordinates, e.g. ``0,1/2,-3``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != arity:
        raise ArityMismatch(f"expected {arity} coordinates, got {len(parts)}")
    coords = []
    for p in parts:
        try:
            coords.append(Fraction(p))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad coordinate {p!r}: {exc}") from None
    return tuple(coords)
