"""Exact polynomial algebra for the extremal-graph characteristic polynomials.

Multivariate polynomials live in the fixed variables ``(x, n, s, k, b)``:
``x`` is the eigenvalue variable, ``n`` the order, ``s`` the size of the
joined clique, ``k`` the degree bound and ``b`` the excess budget.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Sequence

from .errors import NoRootError, ScopeError

VARS = ("x", "n", "s", "k", "b")
_NV = len(VARS)
_ZERO = (0,) * _NV


def _unit(i: int) -> tuple[int, ...]:
    e = [0] * _NV
    e[i] = 1
    return tuple(e)


class MultiPoly:
    """Sparse polynomial over (x, n, s, k, b) with exact coefficients.

    Terms map exponent tuples to nonzero coefficients; equality is termwise.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for exps, c in (terms or {}).items():
            if c != 0:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def var(cls, name: str) -> MultiPoly:
        return cls({_unit(VARS.index(name)): 1})

    @classmethod
    def const(cls, c) -> MultiPoly:
        return cls({_ZERO: c})

    @staticmethod
    def _lift(other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, Number):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            raise ValueError("only nonnegative integer powers")
        out = MultiPoly.const(1)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self.terms.items(), reverse=True)

    def degree(self, name: str) -> int:
        i = VARS.index(name)
        return max((e[i] for e in self.terms), default=0)

    def variables(self) -> set[str]:
        return {VARS[i] for e in self.terms for i in range(_NV) if e[i]}

    def substitute(self, **values) -> MultiPoly:
        """Replace named variables by numbers or polynomials."""
        idx = {VARS.index(name): val for name, val in values.items()}
        out = MultiPoly()
        for e, c in self.terms.items():
            kept = list(e)
            factor = MultiPoly.const(c)
            for i, val in idx.items():
                if e[i]:
                    kept[i] = 0
                    factor = factor * (val ** e[i] if isinstance(val, MultiPoly) else MultiPoly.const(val ** e[i]))
            out = out + factor * MultiPoly({tuple(kept): 1})
        return out

    def evaluate(self, **values):
        """Full evaluation; exact for int/Fraction inputs, float otherwise."""
        missing = self.variables() - set(values)
        if missing:
            raise ValueError(f"no value for {sorted(missing)}")
        vals = [values.get(name, 0) for name in VARS]
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, p in zip(vals, e):
                if p:
                    term = term * v ** p
            total = total + term
        return total

    def to_unipoly(self, name: str = "x") -> UniPoly:
        others = self.variables() - {name}
        if others:
            raise ValueError(f"variables {sorted(others)} still free")
        i = VARS.index(name)
        coeffs = [0] * (self.degree(name) + 1)
        for e, c in self.terms.items():
            coeffs[e[i]] += c
        return UniPoly(coeffs)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{VARS[i]}^{p}" if p > 1 else VARS[i] for i, p in enumerate(e) if p)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


x, n, s, k, b = (MultiPoly.var(v) for v in VARS)


class UniPoly:
    """Univariate polynomial, coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Rational) for c in self.coeffs)

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        quo = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = Fraction(other.coeffs[-1])
        d = other.degree
        while len(rem) - 1 >= d and any(rem):
            shift = len(rem) - 1 - d
            q = rem[-1] / lead
            quo[shift] = q
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= q * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(quo), UniPoly(rem)

    def __repr__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# ---------------------------------------------------------------------------
# characteristic polynomials
# ---------------------------------------------------------------------------

CHARPOLY_MAX_DIM = 12


def _faddeev_leverrier(A: Sequence[Sequence]) -> list[Fraction]:
    m = len(A)
    A = [[Fraction(v) for v in row] for row in A]
    coeffs = [Fraction(0)] * (m + 1)
    coeffs[m] = Fraction(1)
    M = [[Fraction(0)] * m for _ in range(m)]
    for step in range(1, m + 1):
        AM = [[sum(A[i][t] * M[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
        for i in range(m):
            AM[i][i] += coeffs[m - step + 1]
        M = AM
        trace = sum(sum(A[i][t] * M[t][i] for t in range(m)) for i in range(m))
        coeffs[m - step] = -trace / step
    return coeffs


def char_poly_exact(M: Sequence[Sequence[int]]) -> UniPoly:
    """``det(xI - M)`` for a square integer matrix via Faddeev-LeVerrier."""
    rows = [list(r) for r in M]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix is not square")
    if m > CHARPOLY_MAX_DIM:
        raise ScopeError(f"exact characteristic polynomial limited to dimension {CHARPOLY_MAX_DIM}")
    for r in rows:
        for v in r:
            if Fraction(v).denominator != 1:
                raise ValueError("matrix entries must be integers")
    coeffs = _faddeev_leverrier(rows)
    assert all(c.denominator == 1 for c in coeffs)
    return UniPoly(int(c) for c in coeffs)


def _det(M: list[list[MultiPoly]]) -> MultiPoly:
    if len(M) == 1:
        return M[0][0]
    total = MultiPoly()
    for j, entry in enumerate(M[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = entry * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def char_poly_symbolic(template: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """``det(xI - M)`` by cofactor expansion for a small polynomial matrix."""
    m = len(template)
    A = [[(x if i == j else MultiPoly()) - MultiPoly._lift(template[i][j]) for j in range(m)] for i in range(m)]
    return _det(A)


# ---------------------------------------------------------------------------
# the extremal-family quotient matrices and their polynomials
# ---------------------------------------------------------------------------


def b1_template() -> list[list[MultiPoly]]:
    """Quotient of K_s v (K_{n-(k-1)s-b-2} u ((k-2)s+b+2)K_1), cells in that order."""
    big = n - (k - 1) * s - b - 2
    indep = (k - 2) * s + b + 2
    zero = MultiPoly()
    return [[s - 1, big, indep], [s, big - 1, zero], [s, zero, zero]]


def b2_template() -> list[list[MultiPoly]]:
    """Quotient of K_s v ((k-2)s+b+3)K_1."""
    return [[s - 1, (k - 2) * s + b + 3], [s, MultiPoly()]]


def bstar_template() -> list[list[MultiPoly]]:
    """Quotient of K_1 v (K_{n-k-b-1} u (k+b)K_1)."""
    zero = MultiPoly()
    return [[zero, n - k - b - 1, k + b], [MultiPoly.const(1), n - k - b - 2, zero], [MultiPoly.const(1), zero, zero]]


def instantiate(template, **values) -> list[list[int]]:
    return [[int(MultiPoly._lift(e).evaluate(**values)) if not MultiPoly._lift(e).is_zero() else 0
             for e in row] for row in template]


def phi_B1() -> MultiPoly:
    return (x ** 3 + (-n + (k - 2) * s + b + 4) * x ** 2
            - (n + (k - 2) * s ** 2 - (k - b - 4) * s - b - 3) * x
            + (k - 2) * s ** 2 * n + (b + 2) * s * n - (k - 2) * (k - 1) * s ** 3
            - (2 * b * k + 5 * k - 3 * b - 8) * s ** 2 - (b + 2) * (b + 3) * s)


def phi_B2() -> MultiPoly:
    return x ** 2 - (s - 1) * x - s * ((k - 2) * s + b + 3)


def phi_Bstar() -> MultiPoly:
    return (x ** 3 + (-n + k + b + 2) * x ** 2 - (n - 1) * x
            + (k + b) * n - k ** 2 - 2 * b * k - 2 * k - b ** 2 - 2 * b)


def f1() -> MultiPoly:
    """Cofactor of ``s - 1`` in ``phi_Bstar - phi_B1``."""
    return (-(k - 2) * x ** 2 + ((k - 2) * s + b + 2) * x - (k - 2) * s * n - (k + b) * n
            + (k - 2) * (k - 1) * s ** 2 + (k ** 2 + 2 * b * k + 2 * k - 3 * b - 6) * s
            + k ** 2 + 2 * b * k + b ** 2 + 2 * k + 2 * b)


@dataclass(frozen=True)
class IdentityResult:
    holds: bool
    difference: MultiPoly

    def __bool__(self):
        return self.holds


def verify_difference_identity(f1_poly: MultiPoly | None = None) -> IdentityResult:
    """Check ``phi_Bstar - phi_B1 == (s - 1) * f1`` exactly.

    ``difference`` is ``(s - 1) * f1 - (phi_Bstar - phi_B1)``, zero when the
    identity holds.
    """
    g = f1() if f1_poly is None else f1_poly
    diff = (s - 1) * g - (phi_Bstar() - phi_B1())
    return IdentityResult(diff.is_zero(), diff)


def closed_form_rho(s_: int, k_: int, b_: int) -> float:
    """Largest root of phi_B2: spectral radius of K_s v ((k-2)s+b+3)K_1."""
    if s_ < 1 or k_ < 2 or b_ < 0:
        raise ValueError("need s >= 1, k >= 2, b >= 0")
    radicand = (4 * k_ - 7) * s_ ** 2 + (4 * b_ + 10) * s_ + 1
    assert radicand > 0
    return (s_ - 1 + math.sqrt(radicand)) / 2


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        _, r = seq[-2].divmod(seq[-1])
        if not r.coeffs:
            break
        seq.append(UniPoly([-c for c in r.coeffs]))
    return seq


def _sign_changes(seq: list[UniPoly], t) -> int:
    signs = [v for v in (q(t) for q in seq) if v != 0]
    return sum(1 for a, c in zip(signs, signs[1:]) if (a > 0) != (c > 0))


def count_real_roots(p: UniPoly, lo, hi) -> int:
    """Distinct real roots in ``(lo, hi]`` (exact coefficients required)."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def _fsign(p: UniPoly, t: float) -> int:
    v = p(t)
    return (v > 0) - (v < 0)


def _bisect(p: UniPoly, lo: float, hi: float, tol: float) -> tuple[float, float]:
    slo = _fsign(p, lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        sm = _fsign(p, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def largest_real_root(p: UniPoly, hi: float, tol: float = 1e-12, refinements: int = 12) -> float:
    """Largest real root in ``[0, hi]``.

    Scans downward from ``hi`` for a sign change, halving the step when none
    is seen, then bisects. With exact coefficients a Sturm count confirms no
    root was skipped above the answer.
    """
    if p.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    fp = UniPoly(float(c) for c in p.coeffs)
    exact = p.is_exact
    steps = 64
    for _ in range(refinements):
        h = hi / steps
        top = hi
        s_top = _fsign(fp, top)
        if s_top == 0:
            return float(hi)
        root = None
        for i in range(1, steps + 1):
            low = hi - i * h if i < steps else 0.0
            s_low = _fsign(fp, low)
            if s_low == 0:
                root, upper = low, low
                break
            if s_low != s_top:
                a, c = _bisect(fp, low, top, tol)
                root, upper = 0.5 * (a + c), c
                break
            top = low
        if root is not None:
            if not exact or upper >= hi or count_real_roots(p, Fraction(upper) + Fraction(tol), hi) == 0:
                return root
        steps *= 2
    raise NoRootError("no real root in bracket")


# ---------------------------------------------------------------------------
# sign scan of f1 at the largest root of phi_B1
# ---------------------------------------------------------------------------


def theorem_hypotheses(s_: int, k_: int, b_: int, n_: int) -> str | None:
    """Reason a grid point is outside the proof's hypotheses, or None."""
    if s_ < 2:
        return "s < 2"
    if b_ < 0:
        return "b < 0"
    if k_ < max(5, b_ + 3):
        return "k < max(5, b+3)"
    if (b_, k_) == (2, 5):
        return "(b,k) = (2,5) excluded"
    if n_ < (k_ - 1) * s_ + b_ + 3:
        return "n < (k-1)s+b+3"
    return None


def f1_at_rho1(s_: int, k_: int, b_: int, n_: int) -> tuple[float, float]:
    """(rho1, f1(rho1)) where rho1 is the largest root of phi_B1 instantiated."""
    p = phi_B1().substitute(n=n_, s=s_, k=k_, b=b_).to_unipoly()
    rho1 = largest_real_root(p, hi=float(n_))
    val = f1().evaluate(x=rho1, n=n_, s=s_, k=k_, b=b_)
    return rho1, float(val)


@dataclass(frozen=True)
class F1Row:
    s: int
    k: int
    b: int
    n: int
    rho1: float
    f1_value: float

    @property
    def sign(self) -> str:
        return "negative" if self.f1_value < 0 else ("zero" if self.f1_value == 0 else "positive")


@dataclass
class F1Report:
    rows: list[F1Row] = field(default_factory=list)
    skipped: list[tuple[tuple[int, int, int, int], str, float | None]] = field(default_factory=list)

    @property
    def max_value(self) -> float:
        return max(r.f1_value for r in self.rows)

    @property
    def all_negative(self) -> bool:
        return all(r.f1_value < 0 for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "k", "b", "n", "rho1", "f1_value", "sign"])
        for r in self.rows:
            w.writerow([r.s, r.k, r.b, r.n, repr(r.rho1), repr(r.f1_value), r.sign])
        return buf.getvalue()


def f1_grid(s_values, k_values, b_values=None, n_offsets=(0, 5)):
    """Grid points (s, k, b, n) with n = (k-1)s + b + 3 + offset.

    ``b_values`` defaults to ``0..k-3`` for each k.
    """
    for s_ in s_values:
        for k_ in k_values:
            bs = range(0, k_ - 2) if b_values is None else b_values
            for b_ in bs:
                for off in n_offsets:
                    yield s_, k_, b_, (k_ - 1) * s_ + b_ + 3 + off


def check_f1_negativity(points: Iterable[tuple[int, int, int, int]]) -> F1Report:
    """Evaluate f1(rho1) over grid points, skipping those outside the hypotheses.

    Skipped points whose polynomial still makes sense (e.g. the excluded
    (b, k) = (2, 5)) carry their value for the record; nothing is asserted
    about them.
    """
    report = F1Report()
    for s_, k_, b_, n_ in points:
        reason = theorem_hypotheses(s_, k_, b_, n_)
        if reason is None:
            rho1, val = f1_at_rho1(s_, k_, b_, n_)
            report.rows.append(F1Row(s_, k_, b_, n_, rho1, val))
        else:
            val = None
            if s_ >= 1 and k_ >= 2 and b_ >= 0 and n_ >= (k_ - 1) * s_ + b_ + 3:
                val = f1_at_rho1(s_, k_, b_, n_)[1]
            report.skipped.append(((s_, k_, b_, n_), reason, val))
    return report
