"""Real pencils of quadrics in four variables: inertia, spectrahedra, real roots on lines.

Everything is exact over the rationals.  A pencil ``V`` is four symmetric
4x4 matrices ``q_0..q_3``; its determinantal quartic is
``X = {x : det(sum x_i q_i) = 0}`` in projective 3-space.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import det, fraction_to_str, inertia, parse_fraction, rank

Matrix = tuple[tuple[Fraction, ...], ...]


class PencilError(ValueError):
    pass


class NoSpectrahedralPointError(PencilError):
    pass


def _matrix(m) -> Matrix:
    out = tuple(tuple(Fraction(x) for x in row) for row in m)
    if len(out) != 4 or any(len(r) != 4 for r in out):
        raise PencilError("quadrics must be 4x4")
    if any(out[i][j] != out[j][i] for i in range(4) for j in range(4)):
        raise PencilError("quadric matrix is not symmetric")
    return out


@dataclass(frozen=True)
class QuadricPencil:
    q: tuple[Matrix, Matrix, Matrix, Matrix]

    def __init__(self, q: Sequence):
        if len(q) != 4:
            raise PencilError("a pencil has four quadrics")
        mats = tuple(_matrix(m) for m in q)
        if all(x == 0 for m in mats for row in m for x in row):
            raise PencilError("all quadrics vanish")
        object.__setattr__(self, "q", mats)

    def member(self, x: Sequence) -> Matrix:
        x = [Fraction(v) for v in x]
        if len(x) != 4:
            raise PencilError("points have four coordinates")
        return tuple(tuple(sum(x[k] * self.q[k][i][j] for k in range(4)) for j in range(4))
                     for i in range(4))

    def det(self, x: Sequence) -> Fraction:
        return Fraction(det(self.member(x)))

    def is_degenerate(self, points: int = 35, seed: int = 0) -> bool:
        """True if det vanishes at ``points`` pseudo-random rational points.

        A nonzero quartic form in four variables is not killed by 35 points
        in general position, and random points are in general position with
        probability one.
        """
        rng = random.Random(seed)
        for _ in range(points):
            x = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(4)]
            if self.det(x) != 0:
                return False
        return True

    def to_json(self) -> dict:
        return {"q": [[[fraction_to_str(x) for x in row] for row in m] for m in self.q]}

    @classmethod
    def from_json(cls, data) -> "QuadricPencil":
        try:
            mats = data["q"] if isinstance(data, dict) else data
            return cls([[[parse_fraction(x) for x in row] for row in m] for m in mats])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise PencilError(f"malformed pencil: {exc}") from exc

    @classmethod
    def load(cls, path) -> "QuadricPencil":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise PencilError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_json(data)


def random_pencil(seed: int, entries: int = 5, definite_member: bool = True) -> QuadricPencil:
    """``q_0 = I`` (if requested) and three random small-integer symmetric matrices."""
    rng = random.Random(seed)
    mats = []
    for k in range(4):
        if k == 0 and definite_member:
            mats.append([[int(i == j) for j in range(4)] for i in range(4)])
            continue
        m = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                m[i][j] = m[j][i] = rng.randint(-entries, entries)
        mats.append(m)
    return QuadricPencil(mats)


# ---------------------------------------------------------------------------
# inertia


def index(M: Sequence[Sequence]) -> int:
    """Negative inertia index (number of strictly negative squares)."""
    return inertia(M)[1]


def corank(M: Sequence[Sequence]) -> int:
    return len(M) - rank(M)


def spectrahedron_contains(V: QuadricPencil, x: Sequence) -> bool:
    if all(Fraction(v) == 0 for v in x):
        raise PencilError("the zero vector is not a point")
    M = V.member(x)
    pos, neg, zero = inertia(M)
    return zero == 0 and neg in (0, 4)


# ---------------------------------------------------------------------------
# polynomials


class RationalUnivariatePolynomial:
    """Dense polynomial, coefficients from the constant term up, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    def __repr__(self):
        return f"RationalUnivariatePolynomial({[fraction_to_str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        return isinstance(other, RationalUnivariatePolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1   # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "RationalUnivariatePolynomial":
        return RationalUnivariatePolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "RationalUnivariatePolynomial":
        lead = self.coeffs[-1]
        return RationalUnivariatePolynomial(c / lead for c in self.coeffs)

    def __mul__(self, other):
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalUnivariatePolynomial(out)

    def __neg__(self):
        return RationalUnivariatePolynomial(-c for c in self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs) + 1
        q = [Fraction(0)] * max(dq, 0)
        lead = other.coeffs[-1]
        for k in range(dq - 1, -1, -1):
            f = r[k + len(other.coeffs) - 1] / lead
            q[k] = f
            for i, b in enumerate(other.coeffs):
                r[k + i] -= f * b
        return RationalUnivariatePolynomial(q), RationalUnivariatePolynomial(r)

    def to_json(self):
        return [fraction_to_str(c) for c in self.coeffs]


Poly = RationalUnivariatePolynomial


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_factors(p: Poly) -> list[Poly]:
    """Yun's algorithm: ``[f_1, f_2, ...]`` with ``p = c * prod f_i^i``, each f_i squarefree."""
    if p.is_zero():
        raise PencilError("zero polynomial")
    out = []
    a = p.monic()
    b = poly_gcd(a, a.derivative())
    c = a.divmod(b)[0]
    while c.degree > 0:
        y = poly_gcd(b, c)
        out.append(c.divmod(y)[0])
        c = y
        b = b.divmod(y)[0]
    return out


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    return seq[:-1]


def _variations(signs: Iterable[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_count(p: Poly) -> int:
    """Number of distinct real roots of ``p`` (any p, roots counted once)."""
    if p.is_zero():
        raise PencilError("zero polynomial")
    seq = sturm_sequence(p)
    at_pinf = [_sign(q.coeffs[-1]) for q in seq]
    at_minf = [_sign(q.coeffs[-1]) * (-1) ** q.degree for q in seq]
    return _variations(at_minf) - _variations(at_pinf)


def count_real_roots(p: Poly) -> tuple[int, int]:
    """``(distinct, with multiplicity)`` real roots."""
    if p.is_zero():
        raise PencilError("zero polynomial")
    factors = squarefree_factors(p)
    counts = [sturm_count(f) if f.degree > 0 else 0 for f in factors]
    return sum(counts), sum((i + 1) * c for i, c in enumerate(counts))


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every root has absolute value below it."""
    lead = abs(p.coeffs[-1])
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _taylor_shift_scale(p: Poly, a: Fraction, w: Fraction) -> Poly:
    """``p(a + w x)``, by Horner's rule on coefficient lists."""
    out: list[Fraction] = []
    for c in reversed(p.coeffs):
        # out <- out * (a + w x) + c
        nxt = [Fraction(0)] * (len(out) + 1)
        for i, o in enumerate(out):
            nxt[i] += a * o
            nxt[i + 1] += w * o
        nxt[0] += c
        out = nxt
    return Poly(out)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _descartes_01(p: Poly) -> int:
    """Sign variations of ``(1+x)^n p(1/(1+x))``: bounds the roots of p in (0, 1)."""
    n = p.degree
    rev = Poly(reversed(list(p.coeffs) + [0] * (n + 1 - len(p.coeffs))))
    q = _taylor_shift_scale(rev, Fraction(1), Fraction(1))
    return _variations(_sign(c) for c in q.coeffs)


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Open isolating intervals for the distinct real roots, in increasing order.

    Bisection driven by Descartes' rule on the squarefree part; a degenerate
    interval ``(r, r)`` marks an exact rational root.
    """
    if p.is_zero():
        raise PencilError("zero polynomial")
    f = Poly([1])
    for g in squarefree_factors(p):
        f = f * g
    if f.degree <= 0:
        return []
    B = root_bound(f)
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        v = _descartes_01(_taylor_shift_scale(f, a, b - a))
        if v == 0:
            continue
        if v == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if f(m) == 0:
            out.append((m, m))
        stack.append((a, m))
        stack.append((m, b))
    return sorted(out)


def bisection_count(p: Poly) -> tuple[int, int]:
    """Independent count of ``(distinct, with multiplicity)`` real roots by isolation."""
    factors = squarefree_factors(p)
    counts = [len(isolate_real_roots(f)) if f.degree > 0 else 0 for f in factors]
    return sum(counts), sum((i + 1) * c for i, c in enumerate(counts))


# ---------------------------------------------------------------------------
# lines


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    out = Poly([0])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = Poly([yi])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Poly([-xj / (xi - xj), 1 / (xi - xj)])
        out = Poly(a + b for a, b in _zip_pad(out.coeffs, term.coeffs))
    return out


def restrict_to_line(V: QuadricPencil, a: Sequence, b: Sequence) -> Poly:
    """``t -> det(sum (a_i + t b_i) q_i)``, exact, by interpolation at five points."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if rank([a, b]) < 2:
        raise PencilError("a and b must be linearly independent")
    ts = [Fraction(k) for k in range(5)]
    ys = [V.det([ai + t * bi for ai, bi in zip(a, b)]) for t in ts]
    return _interpolate(ts, ys)


@dataclass
class LineReport:
    direction: tuple[Fraction, ...]
    inside_quartic: bool
    finite_roots: int = 0
    at_infinity: int = 0
    real_with_multiplicity: int = 0
    jumps_ok: bool = True
    jumps: list = None

    def to_json(self):
        return {"direction": [fraction_to_str(x) for x in self.direction],
                "inside_quartic": self.inside_quartic,
                "finite_roots": self.finite_roots, "at_infinity": self.at_infinity,
                "real_with_multiplicity": self.real_with_multiplicity,
                "jumps_ok": self.jumps_ok, "jumps": self.jumps}


def _random_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def find_spectrahedral_point(V: QuadricPencil, seed: int = 0, tries: int = 200) -> tuple[Fraction, ...]:
    """A rational point whose member is definite (index 0 lift is returned)."""
    cands = [tuple(Fraction(int(i == k)) for i in range(4)) for k in range(4)]
    rng = random.Random(seed)
    cands += [tuple(_random_rational(rng, 10) for _ in range(4)) for _ in range(tries)]
    for x in cands:
        if any(x) and spectrahedron_contains(V, x):
            return x if index(V.member(x)) == 0 else tuple(-v for v in x)
    raise NoSpectrahedralPointError("no rational point with a definite member was found")


def _between(intervals, lo_pad=Fraction(1)) -> list[Fraction]:
    """Rational points separating consecutive isolating intervals, plus one on each end."""
    if not intervals:
        return [Fraction(0)]
    pts = [intervals[0][0] - lo_pad]
    for (a1, b1), (a2, b2) in zip(intervals, intervals[1:]):
        pts.append((b1 + a2) / 2)
    pts.append(intervals[-1][1] + lo_pad)
    return pts


def _refine(f: Poly, a: Fraction, b: Fraction, others: Sequence[Poly]) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of f until no other factor has a root in it."""
    while a != b and not all(_no_root_in(g, a, b) for g in others):
        a, b = _halve(f, a, b)
    return a, b


def _no_root_in(g: Poly, a: Fraction, b: Fraction) -> bool:
    if g.degree <= 0:
        return True
    if a == b:
        return g(a) != 0
    return g(a) != 0 and g(b) != 0 and _descartes_01(_taylor_shift_scale(g, a, b - a)) == 0


def index_profile(V: QuadricPencil, a: Sequence, b: Sequence, p: Poly) -> list[dict]:
    """Index jumps of ``a + t b`` at each real root of ``p``, with its multiplicity."""
    factors = squarefree_factors(p)
    roots = []   # (interval, multiplicity)
    for i, f in enumerate(factors):
        if f.degree <= 0:
            continue
        others = [g for j, g in enumerate(factors) if j != i and g.degree > 0]
        for lo, hi in isolate_real_roots(f):
            roots.append((_refine(f, lo, hi, others), i + 1, f))
    roots.sort(key=lambda r: r[0])
    # make the intervals pairwise disjoint by refining overlapping neighbours
    changed = True
    while changed:
        changed = False
        for k in range(len(roots) - 1):
            (a1, b1), m1, f1 = roots[k]
            (a2, b2), m2, f2 = roots[k + 1]
            if b1 >= a2:
                roots[k] = (_halve(f1, a1, b1), m1, f1)
                roots[k + 1] = (_halve(f2, a2, b2), m2, f2)
                roots.sort(key=lambda r: r[0])
                changed = True
    pts = _between([r[0] for r in roots])

    def ind(t):
        return index(V.member([ai + t * bi for ai, bi in zip(a, b)]))

    out = []
    for k, (iv, m, f) in enumerate(roots):
        before, after = ind(pts[k]), ind(pts[k + 1])
        d = after - before
        out.append({"interval": [fraction_to_str(iv[0]), fraction_to_str(iv[1])],
                    "multiplicity": m, "before": before, "after": after,
                    "ok": abs(d) <= m and (d - m) % 2 == 0})
    return out


def _halve(f: Poly, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    if a == b:
        return a, b
    m = (a + b) / 2
    if f(m) == 0:
        return m, m
    # the open interval holds exactly one root of f; Descartes says which half
    return (a, m) if _descartes_01(_taylor_shift_scale(f, a, m - a)) else (m, b)


def check_line(V: QuadricPencil, a: Sequence, b: Sequence, jumps: bool = True) -> LineReport:
    p = restrict_to_line(V, a, b)
    rep = LineReport(tuple(Fraction(x) for x in b), p.is_zero())
    if rep.inside_quartic:
        return rep
    _, finite = count_real_roots(p)
    # the point b itself (t = infinity) is real; it absorbs the missing degree
    rep.finite_roots = finite
    rep.at_infinity = 4 - p.degree
    rep.real_with_multiplicity = finite + rep.at_infinity
    if jumps:
        rep.jumps = index_profile(V, a, b, p)
        rep.jumps_ok = all(j["ok"] for j in rep.jumps)
    return rep


def verify_x4(V: QuadricPencil, samples: int = 100, seed: int = 0, bound: int = 1000,
              jumps: bool = True) -> dict:
    """Every real line through a spectrahedral point meets X in four real points.

    Lines through the point found by ``find_spectrahedral_point`` in
    ``samples`` pseudo-random rational directions (numerators and
    denominators up to ``bound``).  Lines contained in X are counted apart.
    """
    if V.is_degenerate(seed=seed):
        raise PencilError("det vanishes identically on the pencil")
    a = find_spectrahedral_point(V, seed)
    rng = random.Random(seed)
    lines = []
    for _ in range(samples):
        while True:
            b = tuple(_random_rational(rng, bound) for _ in range(4))
            if rank([a, b]) == 2:
                break
        lines.append(check_line(V, a, b, jumps))
    proper = [r for r in lines if not r.inside_quartic]
    four = sum(1 for r in proper if r.real_with_multiplicity == 4)
    return {
        "point": [fraction_to_str(x) for x in a],
        "samples": samples,
        "seed": seed,
        "lines_inside_quartic": len(lines) - len(proper),
        "four_real": four,
        "histogram": _histogram(r.real_with_multiplicity for r in proper),
        "jumps_ok": all(r.jumps_ok for r in proper),
        "pass": four == len(proper) and all(r.jumps_ok for r in proper),
    }


def _histogram(values) -> dict:
    out: dict = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return dict(sorted(out.items()))


def node_candidate_check(V: QuadricPencil, x: Sequence) -> dict:
    """Corank of the member at x and whether x lies on the boundary of the spectrahedron.

    Boundary points are exactly the singular semidefinite members: they are
    roots of det on the segment from an interior point, approached through
    definite members.
    """
    if all(Fraction(v) == 0 for v in x):
        raise PencilError("the zero vector is not a point")
    M = V.member(x)
    pos, neg, zero = inertia(M)
    kind = {0: "off the quartic", 1: "smooth point", 2: "node"}.get(zero, "higher corank")
    return {"corank": zero, "kind": kind,
            "onSpectraBoundary": zero > 0 and (pos == 0 or neg == 0)}


# ---------------------------------------------------------------------------
# constants


def quadric_space_dimension(n: int) -> int:
    """``N(n) = n(n+3)/2``: dimension of the space of quadrics in n-space."""
    return n * (n + 3) // 2


def constants_table() -> dict:
    return {
        "N": {n: quadric_space_dimension(n) for n in range(1, 5)},
        "deg_Delta": 4,
        "deg_Delta_prime": 10,
        "dim_Qu": quadric_space_dimension(3),
        "dim_Delta": 8,
        "dim_Delta_prime": 6,
        "dim_Delta_second": 3,
    }
