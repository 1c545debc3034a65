"""Exact symbolic calculus on a single cotangent chart.

Polynomials over the Gaussian rationals in the chart coordinates and the
formal symbol ``hbar``, plus one-forms, two-forms, vector fields, Poisson
brackets, the exterior derivative and pullbacks along polynomial maps.

Sign conventions, fixed once for the whole package:

    omega = sum_i d(alpha_i) ^ d(beta_i)
    X_A   = sum_i (dA/dalpha_i) d/dbeta_i - (dA/dbeta_i) d/dalpha_i
    {A,B} = omega(X_A, X_B)

so that {alpha_i, beta_i} = +1.

All values are immutable after construction and all operations are pure;
floats appear only through the explicit ``evaluate`` shadow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

RationalLike = Union[int, Fraction]


class ChartError(ValueError):
    """Mismatched or malformed chart data."""


class Scalar:
    """A Gaussian rational: exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(x: "Scalar | RationalLike") -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        other = Scalar.coerce(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = Scalar.coerce(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"Scalar({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
MINUS_I = Scalar(0, -1)


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical, re-parseable text form of a Gaussian rational."""
    if not s.im:
        return _frac_str(s.re)
    if not s.re:
        if s.im == 1:
            return "i"
        if s.im == -1:
            return "-i"
        return f"{_frac_str(s.im)}*i"
    im = s.im
    op = "-" if im < 0 else "+"
    im_abs = -im if im < 0 else im
    im_part = "i" if im_abs == 1 else f"{_frac_str(im_abs)}*i"
    return f"({_frac_str(s.re)} {op} {im_part})"


@dataclass(frozen=True)
class ChartSpec:
    """A single cotangent chart with n canonically paired coordinates.

    ``pairs[i] = (alpha_i, beta_i)`` names the i-th momentum/position pair.
    Polynomial variables are ordered ``(hbar, alpha_1..alpha_n,
    beta_1..beta_n)``; covector and vector components follow the same
    coordinate order.
    """

    pairs: tuple[tuple[str, str], ...]
    orientation: str = "alpha-beta"

    def __post_init__(self):
        if len(self.pairs) < 1:
            raise ChartError("chart needs at least one coordinate pair")
        names = [n for p in self.pairs for n in p]
        if len(set(names)) != len(names) or "hbar" in names:
            raise ChartError("coordinate labels must be distinct and not 'hbar'")

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def coords(self) -> tuple[str, ...]:
        """All 2n coordinate names, alphas first."""
        return tuple(p[0] for p in self.pairs) + tuple(p[1] for p in self.pairs)

    @property
    def variables(self) -> tuple[str, ...]:
        return ("hbar",) + self.coords

    def coord_index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise ChartError(f"unknown coordinate {name!r} on chart {self.coords}") from None

    def var_index(self, name: str) -> int:
        if name == "hbar":
            return 0
        return 1 + self.coord_index(name)

    def is_alpha(self, idx: int) -> bool:
        """True when coordinate index idx (0-based over coords) is a momentum."""
        return idx < self.n


def standard_chart(n: int = 1, style: str = "pq") -> ChartSpec:
    """Chart with coordinates p1..pn/q1..qn (style 'pq') or a1../b1.. (style 'ab')."""
    a, b = ("p", "q") if style == "pq" else ("a", "b")
    return ChartSpec(tuple((f"{a}{i}", f"{b}{i}") for i in range(1, n + 1)))


class Poly:
    """Exact multivariate polynomial over the Gaussian rationals.

    Terms map an exponent tuple over ``chart.variables`` to a nonzero
    Scalar.  Polys over the same chart compare equal iff the term maps are
    equal.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: ChartSpec, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        object.__setattr__(self, "chart", chart)
        nv = len(chart.variables)
        clean: dict[tuple[int, ...], Scalar] = {}
        for exp, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if not c:
                continue
            exp = tuple(exp)
            if len(exp) != nv or any(e < 0 for e in exp):
                raise ChartError(f"bad exponent tuple {exp} for chart with {nv} variables")
            clean[exp] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(chart: ChartSpec) -> "Poly":
        return Poly(chart)

    @staticmethod
    def const(chart: ChartSpec, c: Scalar | RationalLike) -> "Poly":
        nv = len(chart.variables)
        return Poly(chart, {(0,) * nv: Scalar.coerce(c)})

    @staticmethod
    def var(chart: ChartSpec, name: str) -> "Poly":
        nv = len(chart.variables)
        i = chart.var_index(name)
        exp = [0] * nv
        exp[i] = 1
        return Poly(chart, {tuple(exp): ONE})

    @staticmethod
    def hbar(chart: ChartSpec) -> "Poly":
        return Poly.var(chart, "hbar")

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def depends_on(self, name: str) -> bool:
        i = self.chart.var_index(name)
        return any(e[i] for e in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction, Scalar)):
                other = Poly.const(self.chart, other)
            else:
                return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartError("chart mismatch in Poly arithmetic")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(self.chart, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Poly(self.chart, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.const(self.chart, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: Scalar | RationalLike) -> "Poly":
        c = Scalar.coerce(c)
        return Poly(self.chart, {e: c * v for e, v in self.terms.items()})

    def div_exact_hbar(self) -> "Poly":
        """Exact division by hbar; raises if any term lacks an hbar factor."""
        terms = {}
        for e, c in self.terms.items():
            if e[0] < 1:
                raise ValueError("polynomial is not divisible by hbar")
            terms[(e[0] - 1,) + e[1:]] = c
        return Poly(self.chart, terms)

    # -- calculus ----------------------------------------------------------

    def partial(self, name: str) -> "Poly":
        """Exact partial derivative with respect to a coordinate or hbar."""
        i = self.chart.var_index(name)
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1 :]
            terms[e2] = terms.get(e2, ZERO) + c * k
        return Poly(self.chart, terms)

    def substitute(self, new_chart: ChartSpec, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Substitute every chart coordinate by a Poly over ``new_chart``.

        ``hbar`` maps to the new chart's hbar automatically.
        """
        images = [Poly.hbar(new_chart)]
        for name in self.chart.coords:
            if name not in mapping:
                raise ChartError(f"substitution missing coordinate {name!r}")
            img = mapping[name]
            if img.chart != new_chart:
                raise ChartError("substitution image lives on the wrong chart")
            images.append(img)
        out = Poly.zero(new_chart)
        for e, c in self.terms.items():
            term = Poly.const(new_chart, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, complex], hbar: complex = 1.0) -> complex:
        """Float shadow: evaluate at complex coordinate values."""
        vals = [complex(hbar)] + [complex(values[name]) for name in self.chart.coords]
        total = 0j
        for e, c in self.terms.items():
            t = c.to_complex()
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
            total += t
        return total

    # -- printing ----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.chart.variables
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(names, e) if k
            )
            cs = format_scalar(c)
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            elif c == Scalar(-1):
                parts.append(f"-{mono}")
            elif c == I:
                parts.append(f"i*{mono}")
            elif c == MINUS_I:
                parts.append(f"-i*{mono}")
            else:
                if "/" in cs and not cs.startswith("("):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Poly({self})"


# -- covector/vector index helpers ------------------------------------------


def covector_names(chart: ChartSpec) -> tuple[str, ...]:
    return tuple(f"d{c}" for c in chart.coords)


class OneForm:
    """A one-form with Poly coefficients over (d alpha_1..d alpha_n, d beta_1..)."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: ChartSpec, comps: Iterable[Poly]):
        comps = tuple(comps)
        if len(comps) != 2 * chart.n:
            raise ChartError("one-form needs 2n coefficient polynomials")
        for c in comps:
            if c.chart != chart:
                raise ChartError("one-form coefficient on the wrong chart")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("OneForm is immutable")

    @staticmethod
    def zero(chart: ChartSpec) -> "OneForm":
        z = Poly.zero(chart)
        return OneForm(chart, [z] * (2 * chart.n))

    @staticmethod
    def from_dict(chart: ChartSpec, entries: Mapping[str, Poly]) -> "OneForm":
        comps = [Poly.zero(chart)] * (2 * chart.n)
        for basis, coeff in entries.items():
            if not basis.startswith("d"):
                raise ChartError(f"covector name {basis!r} must start with 'd'")
            comps[chart.coord_index(basis[1:])] = coeff
        return OneForm(chart, comps)

    def __eq__(self, other):
        return (
            isinstance(other, OneForm)
            and self.chart == other.chart
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.chart, self.comps))

    def __add__(self, other):
        if other.chart != self.chart:
            raise ChartError("chart mismatch")
        return OneForm(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return OneForm(self.chart, [-a for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p: Poly | Scalar | RationalLike) -> "OneForm":
        if isinstance(p, Poly):
            return OneForm(self.chart, [a * p for a in self.comps])
        return OneForm(self.chart, [a.scale(p) for a in self.comps])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __str__(self):
        names = covector_names(self.chart)
        parts = [f"({c})*{nm}" for c, nm in zip(self.comps, names) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class TwoForm:
    """A two-form stored on the canonical ordered basis dx_i ^ dx_j, i < j."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: ChartSpec, comps: Mapping[tuple[int, int], Poly] | None = None):
        clean: dict[tuple[int, int], Poly] = {}
        for (i, j), p in (comps or {}).items():
            if not (0 <= i < j < 2 * chart.n):
                raise ChartError(f"two-form index pair {(i, j)} not in canonical order")
            if p.chart != chart:
                raise ChartError("two-form coefficient on the wrong chart")
            if not p.is_zero():
                clean[(i, j)] = p
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TwoForm is immutable")

    @staticmethod
    def zero(chart: ChartSpec) -> "TwoForm":
        return TwoForm(chart)

    def component(self, i: int, j: int) -> Poly:
        """Coefficient of dx_i ^ dx_j for any index order (antisymmetry built in)."""
        if i == j:
            return Poly.zero(self.chart)
        if i < j:
            return self.comps.get((i, j), Poly.zero(self.chart))
        return -self.comps.get((j, i), Poly.zero(self.chart))

    def __eq__(self, other):
        return (
            isinstance(other, TwoForm)
            and self.chart == other.chart
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.chart, frozenset(self.comps.items())))

    def __add__(self, other):
        if other.chart != self.chart:
            raise ChartError("chart mismatch")
        out = dict(self.comps)
        for k, p in other.comps.items():
            out[k] = out.get(k, Poly.zero(self.chart)) + p
        return TwoForm(self.chart, out)

    def __neg__(self):
        return TwoForm(self.chart, {k: -p for k, p in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p: Poly) -> "TwoForm":
        return TwoForm(self.chart, {k: q * p for k, q in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def pair(self, X: "VectorField", Y: "VectorField") -> Poly:
        """Evaluate on two vector fields."""
        if X.chart != self.chart or Y.chart != self.chart:
            raise ChartError("chart mismatch")
        out = Poly.zero(self.chart)
        for (i, j), c in self.comps.items():
            out = out + c * (X.comps[i] * Y.comps[j] - X.comps[j] * Y.comps[i])
        return out

    def __str__(self):
        names = covector_names(self.chart)
        parts = [
            f"({p})*{names[i]}^{names[j]}"
            for (i, j), p in sorted(self.comps.items())
            if not p.is_zero()
        ]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class VectorField:
    """Vector field with Poly coefficients over (d/dalpha_i, d/dbeta_i)."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: ChartSpec, comps: Iterable[Poly]):
        comps = tuple(comps)
        if len(comps) != 2 * chart.n:
            raise ChartError("vector field needs 2n coefficient polynomials")
        for c in comps:
            if c.chart != chart:
                raise ChartError("vector field coefficient on the wrong chart")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @staticmethod
    def zero(chart: ChartSpec) -> "VectorField":
        z = Poly.zero(chart)
        return VectorField(chart, [z] * (2 * chart.n))

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and self.chart == other.chart
            and self.comps == other.comps
        )

    def __add__(self, other):
        if other.chart != self.chart:
            raise ChartError("chart mismatch")
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def apply(self, p: Poly) -> Poly:
        """Directional derivative of a function."""
        if p.chart != self.chart:
            raise ChartError("chart mismatch")
        out = Poly.zero(self.chart)
        for comp, name in zip(self.comps, self.chart.coords):
            if not comp.is_zero():
                out = out + comp * p.partial(name)
        return out

    def lie_bracket(self, other: "VectorField") -> "VectorField":
        """[X, Y] by coefficient calculus."""
        if other.chart != self.chart:
            raise ChartError("chart mismatch")
        return VectorField(
            self.chart,
            [self.apply(oc) - other.apply(sc) for oc, sc in zip(other.comps, self.comps)],
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __str__(self):
        parts = [
            f"({c})*d/d{nm}"
            for c, nm in zip(self.comps, self.chart.coords)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class SmoothMap:
    """Polynomial map between charts: one source-chart Poly per target coordinate."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: ChartSpec, target: ChartSpec, comps: Iterable[Poly]):
        comps = tuple(comps)
        if len(comps) != 2 * target.n:
            raise ChartError("map needs one component per target coordinate")
        for c in comps:
            if c.chart != source:
                raise ChartError("map components must live on the source chart")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("SmoothMap is immutable")

    @staticmethod
    def identity(chart: ChartSpec) -> "SmoothMap":
        return SmoothMap(chart, chart, [Poly.var(chart, c) for c in chart.coords])

    def coordinate_image(self, target_name: str) -> Poly:
        return self.comps[self.target.coord_index(target_name)]

    def mapping(self) -> dict[str, Poly]:
        return dict(zip(self.target.coords, self.comps))


# -- operations --------------------------------------------------------------


def partial(p: Poly, coord: str) -> Poly:
    return p.partial(coord)


def hamiltonian_vf(A: Poly) -> VectorField:
    """Hamiltonian vector field of A under the package sign convention."""
    chart = A.chart
    n = chart.n
    comps = [Poly.zero(chart)] * (2 * n)
    for i in range(n):
        alpha, beta = chart.pairs[i]
        comps[i] = -A.partial(beta)        # d/dalpha_i component
        comps[n + i] = A.partial(alpha)    # d/dbeta_i component
    return VectorField(chart, comps)


def poisson(A: Poly, B: Poly) -> Poly:
    """{A, B} = omega(X_A, X_B)."""
    if A.chart != B.chart:
        raise ChartError("chart mismatch in Poisson bracket")
    chart = A.chart
    out = Poly.zero(chart)
    for alpha, beta in chart.pairs:
        out = out + A.partial(alpha) * B.partial(beta) - A.partial(beta) * B.partial(alpha)
    return out


def exterior_d(phi: Union[Poly, OneForm]) -> Union[OneForm, TwoForm]:
    """Exterior derivative of a 0-form (Poly) or a one-form."""
    if isinstance(phi, Poly):
        chart = phi.chart
        return OneForm(chart, [phi.partial(c) for c in chart.coords])
    if isinstance(phi, OneForm):
        chart = phi.chart
        coords = chart.coords
        comps: dict[tuple[int, int], Poly] = {}
        for i in range(2 * chart.n):
            for j in range(i + 1, 2 * chart.n):
                c = phi.comps[j].partial(coords[i]) - phi.comps[i].partial(coords[j])
                if not c.is_zero():
                    comps[(i, j)] = c
        return TwoForm(chart, comps)
    raise TypeError("exterior_d expects a Poly or a OneForm")


def contract(theta: OneForm, X: VectorField) -> Poly:
    """Pointwise pairing theta(X)."""
    if theta.chart != X.chart:
        raise ChartError("chart mismatch in contraction")
    out = Poly.zero(theta.chart)
    for a, b in zip(theta.comps, X.comps):
        out = out + a * b
    return out


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    if a.chart != b.chart:
        raise ChartError("chart mismatch in wedge")
    chart = a.chart
    comps: dict[tuple[int, int], Poly] = {}
    for i in range(2 * chart.n):
        for j in range(i + 1, 2 * chart.n):
            c = a.comps[i] * b.comps[j] - a.comps[j] * b.comps[i]
            if not c.is_zero():
                comps[(i, j)] = c
    return TwoForm(chart, comps)


def standard_symplectic(chart: ChartSpec) -> TwoForm:
    """omega = sum_i dalpha_i ^ dbeta_i."""
    n = chart.n
    one = Poly.const(chart, 1)
    return TwoForm(chart, {(i, n + i): one for i in range(n)})


def standard_potential(chart: ChartSpec) -> OneForm:
    """theta = sum_i alpha_i dbeta_i, a potential of the standard omega."""
    n = chart.n
    comps = [Poly.zero(chart)] * (2 * n)
    for i in range(n):
        comps[n + i] = Poly.var(chart, chart.pairs[i][0])
    return OneForm(chart, comps)


def pullback_form(m: SmoothMap, phi: Union[Poly, OneForm, TwoForm]):
    """Pullback of a function, one-form or two-form along a polynomial map."""
    src, tgt = m.source, m.target
    mapping = m.mapping()
    if isinstance(phi, Poly):
        if phi.chart != tgt:
            raise ChartError("pullback argument must live on the target chart")
        return phi.substitute(src, mapping)
    if isinstance(phi, OneForm):
        if phi.chart != tgt:
            raise ChartError("pullback argument must live on the target chart")
        out = OneForm.zero(src)
        for comp, coeff in zip(m.comps, phi.comps):
            if coeff.is_zero():
                continue
            pulled = coeff.substitute(src, mapping)
            out = out + exterior_d(comp).scale(pulled)
        return out
    if isinstance(phi, TwoForm):
        if phi.chart != tgt:
            raise ChartError("pullback argument must live on the target chart")
        out = TwoForm.zero(src)
        for (i, j), coeff in phi.comps.items():
            pulled = coeff.substitute(src, mapping)
            dxi = exterior_d(m.comps[i])
            dxj = exterior_d(m.comps[j])
            out = out + wedge(dxi, dxj).scale(pulled)
        return out
    raise TypeError("pullback_form expects a Poly, OneForm or TwoForm")
