"""Truncated arc calculus for 1-forms.

An arc is a tuple of truncated power series in t whose coefficients are
polynomials in formal parameters s_1..s_k; identities are verified at the
polynomial level, which suffices for the corresponding statements over the
fraction field.  Vanishing orders are certified only up to the truncation
order N (default 8), so callers wanting order m must use N >= m.

The text format for arcs is one assignment per ambient coordinate plus an
optional header line::

    order: 8
    x = u + v*t^2
    y = -v*t

Identifiers other than ``t`` are the arc parameters, in order of first
appearance.

The central operation is :func:`lagrangian_obstruction`: for an arc along
which every component of a 1-form vanishes to order >= m, the 2-form

    sum_i  d(gamma_i(0)) wedge d(coefficient of t^m in f_i(gamma(t)))

in the parameters.  For almost-closed forms this is exactly zero (the conic
Lagrangian property of the associated cone, exercised by the test suite);
non-almost-closed forms produce nonzero obstructions.
"""

from __future__ import annotations

import re

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import ArityMismatch, InputError, OrderTooLow, RingMismatch
from .poly import Polynomial, Ring, parse_polynomial
from .singular import OneForm

DEFAULT_TRUNCATION = 8


class _InfiniteWithinTruncation:
    """Vanishing-order marker: identically zero through the truncation."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITE_WITHIN_TRUNCATION"


INFINITE_WITHIN_TRUNCATION = _InfiniteWithinTruncation()


# --------------------------------------------------------- truncated series

@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in t truncated at order N, coefficients in a parameter ring."""

    param_ring: Ring
    coeffs: tuple  # coeffs[p] is the Polynomial coefficient of t^p, p <= N

    def __init__(self, param_ring: Ring, coeffs: Sequence[Polynomial]):
        coeffs = tuple(coeffs)
        for c in coeffs:
            if c.ring != param_ring:
                raise RingMismatch("series coefficient in wrong ring")
        object.__setattr__(self, "param_ring", param_ring)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self):
        """Index of the first nonzero coefficient, or None if all vanish."""
        for p, c in enumerate(self.coeffs):
            if not c.is_zero():
                return p
        return None

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.param_ring != other.param_ring or self.order != other.order:
            raise RingMismatch("series mismatch")
        return TruncatedSeries(
            self.param_ring, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.param_ring != other.param_ring or self.order != other.order:
            raise RingMismatch("series mismatch")
        zero = self.param_ring.zero()
        out = [zero] * (self.order + 1)
        for a, ca in enumerate(self.coeffs):
            if ca.is_zero():
                continue
            for b in range(self.order + 1 - a):
                cb = other.coeffs[b]
                if not cb.is_zero():
                    out[a + b] = out[a + b] + ca * cb
        return TruncatedSeries(self.param_ring, out)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.param_ring, [coeff * c for coeff in self.coeffs])

    def __str__(self):
        parts = [f"({c})*t^{p}" for p, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def series_constant(param_ring: Ring, order: int, value) -> TruncatedSeries:
    coeffs = [param_ring.zero()] * (order + 1)
    coeffs[0] = param_ring.constant(value) if not isinstance(value, Polynomial) else value
    return TruncatedSeries(param_ring, coeffs)


# ------------------------------------------------------------------- arcs

@dataclass(frozen=True)
class ArcSeries:
    """An arc into affine space: one truncated t-series per coordinate."""

    ambient_ring: Ring
    param_ring: Ring
    components: tuple
    order: int

    def __init__(self, ambient_ring: Ring, param_ring: Ring, components, order: int):
        components = tuple(components)
        if len(components) != ambient_ring.arity:
            raise ArityMismatch("arc needs one component per ambient coordinate")
        for s in components:
            if s.param_ring != param_ring or s.order != order:
                raise RingMismatch("arc component series mismatch")
        object.__setattr__(self, "ambient_ring", ambient_ring)
        object.__setattr__(self, "param_ring", param_ring)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "order", order)

    def base_point(self) -> tuple:
        """Constant coefficients, the image of t = 0 (parameter polynomials)."""
        return tuple(s.coeffs[0] for s in self.components)

    def __repr__(self):
        names = self.ambient_ring.variables
        lines = [f"{x}(t) = {s}" for x, s in zip(names, self.components)]
        return f"<arc order {self.order}: " + "; ".join(lines) + ">"


def _ident_scan(expr: str):
    return re.findall(r"[A-Za-z_][A-Za-z0-9_]*", expr)


def arc_from_strings(
    ambient_ring: Ring,
    components: Sequence[str],
    order: int = DEFAULT_TRUNCATION,
    params: Sequence[str] | None = None,
) -> ArcSeries:
    """Build an arc from component expressions in t and parameter names.

    Parameters default to the non-``t`` identifiers in order of first
    appearance across the component expressions.
    """
    if len(components) != ambient_ring.arity:
        raise ArityMismatch("one component expression per ambient coordinate")
    if params is None:
        seen: list = []
        for expr in components:
            for name in _ident_scan(expr):
                if name != "t" and name not in seen:
                    seen.append(name)
        params = seen
    if "t" in params:
        raise InputError("'t' is the arc variable, not a parameter")
    param_ring = Ring(tuple(params))
    work = Ring(tuple(params) + ("t",))
    t_index = work.arity - 1
    series = []
    for expr in components:
        poly = parse_polynomial(expr, work)
        if poly.degree_in(t_index) > order:
            raise InputError(
                f"component {expr!r} has t-degree beyond the truncation order {order}"
            )
        coeffs = [param_ring.zero() for _ in range(order + 1)]
        for mono, coeff in poly.terms():
            p = mono[t_index]
            pmono = mono[:t_index]
            coeffs[p] = coeffs[p] + Polynomial(param_ring, [(pmono, coeff)])
        series.append(TruncatedSeries(param_ring, coeffs))
    return ArcSeries(ambient_ring, param_ring, series, order)


def parse_arc(text: str, ambient_ring: Ring) -> ArcSeries:
    """Parse the arc text format (``order:`` header plus assignments)."""
    order = DEFAULT_TRUNCATION
    assignments: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("order"):
            head, _, value = line.partition(":")
            if head.strip().lower() != "order" or not value.strip().isdigit():
                raise InputError(f"bad order header {line!r}")
            order = int(value.strip())
            continue
        name, eq, expr = line.partition("=")
        if not eq:
            raise InputError(f"expected 'name = expression', got {line!r}")
        name = name.strip()
        if name not in ambient_ring.variables:
            raise InputError(f"arc assigns {name!r}, not an ambient coordinate")
        if name in assignments:
            raise InputError(f"coordinate {name!r} assigned twice")
        assignments[name] = expr.strip()
    missing = [v for v in ambient_ring.variables if v not in assignments]
    if missing:
        raise InputError(f"arc is missing coordinates {missing}")
    return arc_from_strings(
        ambient_ring, [assignments[v] for v in ambient_ring.variables], order
    )


def compose_along_arc(f: Polynomial, arc: ArcSeries) -> TruncatedSeries:
    """Substitute the arc into f; exact in every retained t-coefficient."""
    if f.ring.arity != arc.ambient_ring.arity:
        raise ArityMismatch("polynomial arity does not match the arc")
    zero = arc.param_ring.zero()
    n1 = arc.order + 1
    acc = [zero] * n1
    pow_cache: dict = {}

    def power(i: int, e: int) -> TruncatedSeries:
        if (i, e) not in pow_cache:
            if e == 0:
                pow_cache[(i, e)] = series_constant(arc.param_ring, arc.order, 1)
            else:
                pow_cache[(i, e)] = power(i, e - 1) * arc.components[i]
        return pow_cache[(i, e)]

    result = TruncatedSeries(arc.param_ring, acc)
    for mono, coeff in f.terms():
        term = series_constant(arc.param_ring, arc.order, coeff)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


def arc_vanishing_order(omega: OneForm, arc: ArcSeries):
    """Largest m <= N with all components of omega(arc) zero below t^m.

    Identically-zero compositions impose no constraint; if every component
    vanishes through the truncation the result is
    INFINITE_WITHIN_TRUNCATION.
    """
    vals = []
    for f in omega.components:
        v = compose_along_arc(f, arc).valuation()
        if v is not None:
            vals.append(v)
    if not vals:
        return INFINITE_WITHIN_TRUNCATION
    return min(vals)


# ----------------------------------------------------------- parameter forms

@dataclass(frozen=True)
class ParameterForm:
    """A 1- or 2-form in the arc parameters with polynomial coefficients.

    Keys are parameter index tuples, (j,) for ds_j and (j, k) with j < k for
    ds_j ^ ds_k; zero coefficients are pruned and keys sorted, so equality is
    structural.
    """

    degree: int
    param_ring: Ring
    terms: tuple

    def __init__(self, degree: int, param_ring: Ring, terms):
        if degree not in (1, 2):
            raise InputError("parameter forms have degree 1 or 2")
        items = terms.items() if isinstance(terms, dict) else terms
        merged: dict = {}
        for key, coeff in items:
            key = tuple(key)
            if len(key) != degree:
                raise InputError(f"key {key} has wrong length for degree {degree}")
            if degree == 2 and key[0] >= key[1]:
                raise InputError("2-form keys must be strictly increasing pairs")
            if key in merged:
                merged[key] = merged[key] + coeff
            else:
                merged[key] = coeff
        cleaned = tuple(sorted((k, c) for k, c in merged.items() if not c.is_zero()))
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "param_ring", param_ring)
        object.__setattr__(self, "terms", cleaned)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ParameterForm") -> "ParameterForm":
        if self.degree != other.degree or self.param_ring != other.param_ring:
            raise RingMismatch("form mismatch")
        return ParameterForm(self.degree, self.param_ring, list(self.terms) + list(other.terms))

    def __sub__(self, other: "ParameterForm") -> "ParameterForm":
        return self + other.scale(-1)

    def scale(self, c) -> "ParameterForm":
        return ParameterForm(
            self.degree, self.param_ring, [(k, coeff * c) for k, coeff in self.terms]
        )

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.param_ring.variables
        parts = []
        for key, coeff in self.terms:
            sym = "^".join(f"d{names[j]}" for j in key)
            parts.append(f"({coeff})*{sym}")
        return " + ".join(parts)

    def to_payload(self):
        names = self.param_ring.variables
        return [
            {"form": "^".join(f"d{names[j]}" for j in key), "coefficient": str(coeff)}
            for key, coeff in self.terms
        ]


def zero_form(degree: int, param_ring: Ring) -> ParameterForm:
    return ParameterForm(degree, param_ring, ())


def param_differential(p: Polynomial) -> ParameterForm:
    """Formal differential in the parameters: sum of partonly ds_j terms."""
    ring = p.ring
    return ParameterForm(
        1, ring, [((j,), p.derivative(j)) for j in range(ring.arity)]
    )


def wedge(a: ParameterForm, b: ParameterForm) -> ParameterForm:
    """Wedge of two 1-forms, canonicalized with increasing index pairs."""
    if a.degree != 1 or b.degree != 1:
        raise InputError("wedge expects two 1-forms")
    out: list = []
    for (j,), ca in a.terms:
        for (k,), cb in b.terms:
            if j == k:
                continue
            if j < k:
                out.append(((j, k), ca * cb))
            else:
                out.append(((k, j), -(ca * cb)))
    return ParameterForm(2, a.param_ring, out)


def exterior_derivative(a: ParameterForm) -> ParameterForm:
    """d of a 1-form in the parameters."""
    if a.degree != 1:
        raise InputError("exterior_derivative expects a 1-form")
    out: list = []
    for (j,), c in a.terms:
        for k in range(a.param_ring.arity):
            dc = c.derivative(k)
            if dc.is_zero() or k == j:
                continue
            if k < j:
                out.append(((k, j), dc))
            else:
                out.append(((j, k), -dc))
    return ParameterForm(2, a.param_ring, out)


# ------------------------------------------------------- the obstruction form

def _certify_order(omega: OneForm, arc: ArcSeries, m: int) -> None:
    if m < 1:
        raise InputError("the order m must be a positive integer")
    if arc.order < m:
        raise OrderTooLow(
            f"truncation order {arc.order} cannot certify vanishing order {m}"
        )
    v = arc_vanishing_order(omega, arc)
    if v is not INFINITE_WITHIN_TRUNCATION and v < m:
        raise OrderTooLow(f"verified vanishing order is {v}, below the requested {m}")


def lagrangian_obstruction(omega: OneForm, arc: ArcSeries, m: int) -> ParameterForm:
    """The conic-Lagrangian obstruction 2-form of (omega, arc) at order m.

    sum_i d(constant coefficient of gamma_i) ^ d(t^m coefficient of
    f_i(gamma)).  Requires the certified vanishing order to be at least m.
    """
    _certify_order(omega, arc, m)
    acc = zero_form(2, arc.param_ring)
    for i, f in enumerate(omega.components):
        base = arc.components[i].coeffs[0]
        target = compose_along_arc(f, arc).coeffs[m]
        acc = acc + wedge(param_differential(base), param_differential(target))
    return acc


def obstruction_via_exterior_derivative(
    omega: OneForm, arc: ArcSeries, m: int
) -> ParameterForm:
    """Equivalent route: -(1/m!) d( sum_i F_i^(m) d c_i^(0) ).

    Here c_i^(p) and F_i^(p) are the factorial-normalized coefficients of
    gamma_i and f_i(gamma); agreement with
    :func:`lagrangian_obstruction` is asserted by the test suite.
    """
    _certify_order(omega, arc, m)
    one_form = zero_form(1, arc.param_ring)
    fact_m = factorial(m)
    for i, f in enumerate(omega.components):
        F_m = compose_along_arc(f, arc).coeffs[m] * fact_m
        dc0 = param_differential(arc.components[i].coeffs[0])
        one_form = one_form + dc0.scale(F_m)
    return exterior_derivative(one_form).scale(Fraction(-1, fact_m))


# --------------------------------------- pullback of d(omega): two evaluations

def _component_differential_series(arc: ArcSeries, i: int):
    """d(gamma_i) as a t-series valued 1-form.

    Returns (ds_part, dt_part): ds_part[p] is the parameter 1-form
    coefficient of t^p, dt_part[p] the scalar coefficient of t^p dt.
    """
    coeffs = arc.components[i].coeffs
    N = arc.order
    ds_part = [param_differential(c) for c in coeffs]
    dt_part = [
        coeffs[p + 1] * (p + 1) if p + 1 <= N else arc.param_ring.zero()
        for p in range(N + 1)
    ]
    return ds_part, dt_part


def pullback_dt_coefficient_direct(omega: OneForm, arc: ArcSeries, m: int) -> ParameterForm:
    """Coefficient of t^(m-1) dt in the arc pullback of d(omega).

    Direct expansion: compose the antisymmetrized Jacobian coefficients of
    d(omega) along the arc and wedge the coordinate differentials as
    truncated series.
    """
    if not 1 <= m <= arc.order:
        raise InputError("need 1 <= m <= truncation order")
    ring = omega.ring
    n = ring.arity
    N = arc.order
    pr = arc.param_ring
    diff_series = [_component_differential_series(arc, i) for i in range(n)]
    acc = zero_form(1, pr)
    for i in range(n):
        for j in range(i + 1, n):
            # d(omega) = sum_{i<j} (d f_j / d x_i - d f_i / d x_j) dx_i ^ dx_j
            a_ij = omega.components[j].derivative(i) - omega.components[i].derivative(j)
            if a_ij.is_zero():
                continue
            A = compose_along_arc(a_ij, arc)
            (xs, xt), (ys, yt) = diff_series[i], diff_series[j]
            # ds^dt part of dgamma_i ^ dgamma_j at t-degree p
            st = [zero_form(1, pr) for _ in range(N + 1)]
            for a in range(N + 1):
                for b in range(N + 1 - a):
                    st[a + b] = st[a + b] + xs[a].scale(yt[b]) - ys[b].scale(xt[a])
            # multiply by the scalar series A and read off t^(m-1)
            for a in range(m):
                c = A.coeffs[a]
                if not c.is_zero():
                    acc = acc + st[m - 1 - a].scale(c)
    return acc


def pullback_dt_coefficient_taylor(omega: OneForm, arc: ArcSeries, m: int) -> ParameterForm:
    """Same coefficient via the binomial sums over factorial-normalized
    coefficients:

        (1/(m-1)!) sum_{k=0}^{m-1} C(m-1, k) sum_i
            [ c_i^(m-k) dF_i^(k)  -  F_i^(k+1) dc_i^(m-k-1) ]
    """
    if not 1 <= m <= arc.order:
        raise InputError("need 1 <= m <= truncation order")
    pr = arc.param_ring
    n = omega.ring.arity
    composed = [compose_along_arc(f, arc) for f in omega.components]

    def c_coeff(i, p):
        return arc.components[i].coeffs[p] * factorial(p)

    def F_coeff(i, p):
        return composed[i].coeffs[p] * factorial(p)

    acc = zero_form(1, pr)
    for k in range(m):
        binom = comb(m - 1, k)
        for i in range(n):
            first = param_differential(F_coeff(i, k)).scale(c_coeff(i, m - k) * binom)
            second = param_differential(c_coeff(i, m - k - 1)).scale(F_coeff(i, k + 1) * binom)
            acc = acc + first - second
    return acc.scale(Fraction(1, factorial(m - 1)))
