"""Truncated power series over Q_p and Lubin-Tate formal groups for the uniformizer u*p."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import ConvergenceGuard, InvalidParameters, PatternViolation
from .tower.ring import TowerElement
from .tower.scalar import INF, PadicScalar

Exps = tuple[int, ...]
ScalarLike = Union[int, Fraction, PadicScalar]


class TruncatedSeries:
    """Power series in ``nvars`` variables with terms of total degree <= ``D``."""

    __slots__ = ("p", "N", "nvars", "D", "terms")

    def __init__(self, p: int, N: int, nvars: int, D: int, terms: Mapping[Exps, PadicScalar] | None = None):
        self.p, self.N, self.nvars, self.D = p, N, nvars, D
        clean: dict[Exps, PadicScalar] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError("exponent tuple has the wrong length")
            if sum(exps) <= D and not c.is_zero():
                clean[exps] = c
        self.terms = clean

    # ---- constructors ----

    def _scalar(self, c: ScalarLike) -> PadicScalar:
        if isinstance(c, PadicScalar):
            return c
        return PadicScalar.from_fraction(self.p, Fraction(c), self.N)

    @classmethod
    def variable(cls, p: int, N: int, nvars: int, D: int, index: int) -> "TruncatedSeries":
        exps = tuple(int(k == index) for k in range(nvars))
        return cls(p, N, nvars, D, {exps: PadicScalar.from_int(p, 1, N)})

    @classmethod
    def from_univariate(cls, p: int, N: int, D: int, coeffs: Mapping[int, ScalarLike]) -> "TruncatedSeries":
        s = cls(p, N, 1, D)
        return cls(p, N, 1, D, {(k,): s._scalar(c) for k, c in coeffs.items()})

    def _like(self, terms: Mapping[Exps, PadicScalar]) -> "TruncatedSeries":
        return TruncatedSeries(self.p, self.N, self.nvars, self.D, terms)

    # ---- access ----

    def coefficient(self, *exps: int) -> PadicScalar:
        c = self.terms.get(tuple(exps))
        return c if c is not None else PadicScalar.zero(self.p, self.N)

    def degree_part(self, n: int) -> "TruncatedSeries":
        return self._like({k: c for k, c in self.terms.items() if sum(k) == n})

    def below_degree(self, n: int) -> "TruncatedSeries":
        return self._like({k: c for k, c in self.terms.items() if sum(k) < n})

    def has_constant_term(self) -> bool:
        return (0,) * self.nvars in self.terms

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.terms.values())

    def min_precision(self) -> int:
        """Smallest absolute precision over stored coefficients."""
        return min((c.prec for c in self.terms.values()), default=INF)

    # ---- arithmetic ----

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return self._like(out)

    def __neg__(self) -> "TruncatedSeries":
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c: ScalarLike) -> "TruncatedSeries":
        c = self._scalar(c)
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = self.D
        out: dict[Exps, PadicScalar] = {}
        right = sorted(other.terms.items(), key=lambda kv: sum(kv[0]))
        for ka, ca in self.terms.items():
            da = sum(ka)
            for kb, cb in right:
                if da + sum(kb) > D:
                    break
                k = tuple(x + y for x, y in zip(ka, kb))
                term = ca * cb
                out[k] = out[k] + term if k in out else term
        return self._like(out)

    def compose(self, subs: Sequence["TruncatedSeries"]) -> "TruncatedSeries":
        """Substitute series without constant term for each variable."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        if not subs:
            return self
        m = subs[0].nvars
        for s in subs:
            if s.has_constant_term():
                raise InvalidParameters("composition needs substitutions without constant term")
        D = min(self.D, subs[0].D)
        one = TruncatedSeries(self.p, self.N, m, D, {(0,) * m: PadicScalar.from_int(self.p, 1, self.N)})
        powers: list[list[TruncatedSeries]] = []
        for v, s in enumerate(subs):
            top = max((k[v] for k in self.terms), default=0)
            pw = [one]
            for _ in range(top):
                pw.append(pw[-1] * s)
            powers.append(pw)
        out: dict[Exps, PadicScalar] = {}
        cache: dict[Exps, TruncatedSeries] = {}
        for exps, c in self.terms.items():
            prod = _product_of_powers(exps, powers, cache)
            for k, v in prod.terms.items():
                term = v * c
                out[k] = out[k] + term if k in out else term
        return TruncatedSeries(self.p, self.N, m, D, out)

    def equals(self, other: "TruncatedSeries", min_prec: int = 1) -> bool:
        """Coefficientwise equality at precision, each difference known to at least p^min_prec."""
        diff = self - other
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            c = diff.terms.get(k)
            if c is not None:
                return False
            a, b = self.coefficient(*k), other.coefficient(*k)
            if min(a.prec, b.prec) < min_prec:
                return False
        return True

    def evaluate(self, points: Sequence[TowerElement]) -> TowerElement:
        ring = points[0].ring
        acc = ring.zero()
        power_cache: list[dict[int, TowerElement]] = [{0: ring.one()} for _ in points]

        def pw(v: int, k: int) -> TowerElement:
            cache = power_cache[v]
            if k not in cache:
                cache[k] = pw(v, k - 1) * points[v]
            return cache[k]

        for exps, c in self.terms.items():
            term = ring.from_scalar(c)
            for v, k in enumerate(exps):
                if k:
                    term = term * pw(v, k)
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        shown = ", ".join(f"{k}: {c}" for k, c in items[:8])
        more = "" if len(items) <= 8 else f", ... ({len(items)} terms)"
        return f"TruncatedSeries(nvars={self.nvars}, D={self.D}, {{{shown}{more}}})"


def _product_of_powers(exps: Exps, powers, cache) -> TruncatedSeries:
    hit = cache.get(exps)
    if hit is not None:
        return hit
    nz = [v for v, k in enumerate(exps) if k]
    if not nz:
        result = powers[0][0]
    elif len(nz) == 1:
        result = powers[nz[0]][exps[nz[0]]]
    else:
        last = nz[-1]
        head = tuple(k if v != last else 0 for v, k in enumerate(exps))
        result = _product_of_powers(head, powers, cache) * powers[last][exps[last]]
    cache[exps] = result
    return result


# ---------------------------------------------------------------------------
# Lubin-Tate data


def default_degree(p: int) -> int:
    return max(p + 1, 8)


def _working_precision(N: int, D: int) -> int:
    # each induction step divides by pi - pi^n, costing one digit
    return N + D + 2


def uniformizer(p: int, u: ScalarLike, N: int) -> PadicScalar:
    us = u if isinstance(u, PadicScalar) else PadicScalar.from_fraction(p, Fraction(u), N)
    if not us.is_unit():
        raise InvalidParameters("u must be a p-adic unit")
    return us * p


def formal_log(p: int, u: ScalarLike, D: int, N: int = 20) -> TruncatedSeries:
    """The series sum_j X^(p^j) / pi^j, pi = u p."""
    if D < p:
        raise InvalidParameters("formal_log needs D >= p")
    Nw = _working_precision(N, D)
    pi = uniformizer(p, u, Nw)
    coeffs = {}
    j, k = 0, 1
    while k <= D:
        coeffs[k] = pi ** (-j)
        j, k = j + 1, k * p
    return TruncatedSeries.from_univariate(p, Nw, D, coeffs)


def formal_exp(log: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of a one-variable series with unit linear term."""
    if log.nvars != 1:
        raise InvalidParameters("formal_exp needs a one-variable series")
    lead = log.coefficient(1)
    if lead.is_zero() or not lead.is_unit():
        raise InvalidParameters("linear coefficient must be a unit")
    p, N, D = log.p, log.N, log.D
    inv_lead = lead.inverse()
    current = TruncatedSeries.from_univariate(p, N, D, {1: inv_lead})
    for n in range(2, D + 1):
        composed = log.compose([current])
        c = composed.coefficient(n)
        if not c.is_zero():
            current = current + TruncatedSeries.from_univariate(p, N, D, {n: -c * inv_lead})
    return current


def _two_var(p: int, N: int, D: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    return TruncatedSeries.variable(p, N, 2, D, 0), TruncatedSeries.variable(p, N, 2, D, 1)


def explicit_endomorphism(p: int, u: ScalarLike, D: int, N: int = 20) -> TruncatedSeries:
    """exp(pi * log X): the Lubin-Tate series whose logarithm is the explicit series."""
    log = formal_log(p, u, D, N)
    pi = uniformizer(p, u, log.N)
    return formal_exp(log).compose([log.scale(pi)])


def polynomial_endomorphism(p: int, u: ScalarLike, D: int, N: int = 20) -> TruncatedSeries:
    """pi X + X^p."""
    Nw = _working_precision(N, D)
    pi = uniformizer(p, u, Nw)
    return TruncatedSeries.from_univariate(p, Nw, D, {1: pi, p: 1})


class FormalGroupLaw:
    """A one-dimensional commutative formal group law with its defining endomorphism."""

    def __init__(self, law: TruncatedSeries, endomorphism: TruncatedSeries | None = None, log: TruncatedSeries | None = None):
        self.law = law
        self.endomorphism = endomorphism
        self.log = log
        self.p, self.N, self.D = law.p, law.N, law.D
        self._inverse: TruncatedSeries | None = None

    def __call__(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        return self.law.compose([x, y])

    def coefficient(self, i: int, j: int) -> PadicScalar:
        return self.law.coefficient(i, j)

    @property
    def inverse(self) -> TruncatedSeries:
        if self._inverse is None:
            self._inverse = formal_inverse(self.law)
        return self._inverse


def lubin_tate_law(
    p: int,
    u: ScalarLike,
    D: int | None = None,
    N: int = 20,
    endomorphism: str | TruncatedSeries = "explicit",
) -> FormalGroupLaw:
    """Formal group law commuting with the endomorphism, by degree induction.

    ``endomorphism`` is ``"explicit"`` (exp(pi log X) for the explicit logarithm),
    ``"polynomial"`` (pi X + X^p) or a custom one-variable series.
    """
    D = default_degree(p) if D is None else D
    if D < p + 1:
        raise InvalidParameters("lubin_tate_law needs D >= p + 1")
    if isinstance(endomorphism, TruncatedSeries):
        endo = endomorphism
    elif endomorphism == "explicit":
        endo = explicit_endomorphism(p, u, D, N)
    elif endomorphism == "polynomial":
        endo = polynomial_endomorphism(p, u, D, N)
    else:
        raise InvalidParameters(f"unknown endomorphism {endomorphism!r}")
    Nw = endo.N
    pi = endo.coefficient(1)
    X, Y = _two_var(p, Nw, D)
    law = X + Y
    endo_x, endo_y = endo.compose([X]), endo.compose([Y])
    endo_tail = endo - TruncatedSeries.from_univariate(p, Nw, D, {1: pi})
    for n in range(2, D + 1):
        # pi F_n + P_n = pi^n F_n + Q_n
        P = endo_tail.compose([law]).degree_part(n)
        Q = law.compose([endo_x, endo_y]).degree_part(n)
        denom = pi - pi**n
        law = law + (Q - P).scale(denom.inverse())
    log = formal_log(p, u, D, N) if endomorphism == "explicit" else None
    return FormalGroupLaw(law, endo, log)


def law_from_log(log: TruncatedSeries) -> TruncatedSeries:
    """exp(log X + log Y), an independent route to the law attached to a logarithm."""
    p, N, D = log.p, log.N, log.D
    X, Y = _two_var(p, N, D)
    exp = formal_exp(log)
    return exp.compose([log.compose([X]) + log.compose([Y])])


def formal_inverse(law: TruncatedSeries) -> TruncatedSeries:
    """i(X) with F(X, i(X)) = 0, solved one degree at a time."""
    p, N, D = law.p, law.N, law.D
    X = TruncatedSeries.variable(p, N, 1, D, 0)
    inv = -X
    dy = law.coefficient(0, 1)
    for n in range(2, D + 1):
        c = law.compose([X, inv]).coefficient(n)
        if not c.is_zero():
            inv = inv + TruncatedSeries.from_univariate(p, N, D, {n: -c / dy})
    return inv


def formal_difference(law: TruncatedSeries) -> TruncatedSeries:
    """X -_F Y = F(X, i(Y)) as a two-variable series."""
    p, N, D = law.p, law.N, law.D
    X, Y = _two_var(p, N, D)
    inv = formal_inverse(law)
    return law.compose([X, inv.compose([Y])])


def subtraction_expansion(law: TruncatedSeries | FormalGroupLaw) -> PadicScalar:
    """The coefficient A in X -_F Y = X - Y + A XY - A Y^2 + (degree >= 3)."""
    series = law.law if isinstance(law, FormalGroupLaw) else law
    diff = formal_difference(series)
    one = PadicScalar.from_int(series.p, 1, series.N)
    if not (diff.coefficient(1, 0) == one and diff.coefficient(0, 1) == -one):
        raise PatternViolation("linear part of X -_F Y is not X - Y")
    a = diff.coefficient(1, 1)
    if not (diff.coefficient(0, 2) + a).is_zero():
        raise PatternViolation("Y^2 coefficient is not -A")
    if not diff.coefficient(2, 0).is_zero():
        raise PatternViolation("X^2 coefficient is not zero")
    return a


def formal_point_add(x: TowerElement, y: TowerElement, law: TruncatedSeries | FormalGroupLaw, target: int | None = None) -> TowerElement:
    """Evaluate F(x, y) for points of positive valuation.

    The truncation error is bounded by (D+1) * min(v(x), v(y)) since the law is
    integral; ConvergenceGuard is raised when that bound is below ``target``
    (p-adic digits, default the ring precision).
    """
    series = law.law if isinstance(law, FormalGroupLaw) else law
    ring = x.ring
    target = ring.N if target is None else target
    vals = []
    for pt in (x, y):
        if pt.is_zero():
            if pt.prec < INF:
                vals.append(Fraction(pt.prec, ring.e))
            continue
        v = pt.valuation()
        if v <= 0:
            raise InvalidParameters("formal points need positive valuation")
        vals.append(v)
    if not vals:
        return ring.zero()
    bound = (series.D + 1) * min(vals)
    if bound < target:
        raise ConvergenceGuard(
            f"truncation at degree {series.D} only controls {float(bound):.2f} digits, {target} requested"
        )
    value = series.evaluate([x, y])
    honest = int(bound * ring.e)
    if honest < value.prec:
        value = ring._make(value.exp, value.coeffs, honest) if not value.is_zero() else ring.zero(honest)
    return value


def log_head(x: TowerElement, p: int, u: ScalarLike) -> TowerElement:
    """x + x^p / pi, the first two terms of the explicit logarithm."""
    ring = x.ring
    pi = ring.coerce(uniformizer(p, u, ring.N))
    return x + x**p / pi
