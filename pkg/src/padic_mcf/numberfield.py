"""Exact arithmetic in Q(theta) and p-adic embeddings.

A NumberField is defined by a monic irreducible polynomial over Q; its
elements are coefficient vectors reduced modulo that polynomial.  Roots of
the polynomial inside Q_p are located by Newton-polygon slope analysis
(only integer slopes can carry Q_p roots) followed by Hensel lifting of
simple residues, with a recursive disc subdivision for residues that are
not simple modulo p.  An embedding fixes one such root and evaluates
coefficient vectors at it to any requested precision.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import (
    AmbiguousSelection,
    FieldMismatch,
    InsufficientPrecision,
    LiftingObstruction,
    NoRoot,
)
from .padic import PAdicApprox, PLUS_INFINITY, require_odd_prime, valuation

# ---------------------------------------------------------------------------
# dense polynomials over Q, little-endian coefficient tuples
# ---------------------------------------------------------------------------


def _pstrip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _pstrip(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    )


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _pstrip(out)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    while len(a) >= len(b) and any(x != 0 for x in a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] * inv
        q[k] = f
        for i, y in enumerate(b):
            a[k + i] -= f * y
        a.pop()
    return _pstrip(q), _pstrip(a)


def _pgcdext(a, b):
    """Extended gcd in Q[x]: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = _pstrip(a), _pstrip(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pmul((Fraction(-1),), _pmul(q, s1)))
        t0, t1 = t1, _padd(t0, _pmul((Fraction(-1),), _pmul(q, t1)))
    if r0:
        lead = r0[-1]
        r0 = tuple(c / lead for c in r0)
        s0 = tuple(c / lead for c in s0)
        t0 = tuple(c / lead for c in t0)
    return r0, s0, t0


def _peval(c, x):
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _pderiv(c):
    return _pstrip([i * c[i] for i in range(1, len(c))])


# ---------------------------------------------------------------------------
# number fields and their elements
# ---------------------------------------------------------------------------


class NumberField:
    """Q(theta) for theta a root of a monic irreducible polynomial.

    Coefficients may be given with a non-unit leading coefficient; the
    polynomial is normalised to monic form.  Irreducibility over Q is
    verified at construction (exact factorisation via sympy); pass
    check_irreducible=False to skip the check for a polynomial known to be
    irreducible.
    """

    def __init__(self, coeffs, check_irreducible: bool = True):
        c = _pstrip([Fraction(x) for x in coeffs])
        if len(c) < 3:
            raise ValueError("defining polynomial must have degree >= 2")
        lead = c[-1]
        self.minpoly: tuple[Fraction, ...] = tuple(x / lead for x in c)
        if check_irreducible and not _is_irreducible(self.minpoly):
            raise ValueError("defining polynomial is reducible over Q")

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"NumberField({poly_str(self.minpoly)})"

    def element(self, coeffs) -> "AlgebraicNumber":
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            raise ValueError(f"need at most {self.degree} coefficients")
        c += [Fraction(0)] * (self.degree - len(c))
        return AlgebraicNumber(self, tuple(c))

    def generator(self) -> "AlgebraicNumber":
        return self.element([0, 1])

    def one(self) -> "AlgebraicNumber":
        return self.element([1])

    def zero(self) -> "AlgebraicNumber":
        return self.element([])


def _is_irreducible(monic: tuple[Fraction, ...]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(monic)
    )
    return sympy.Poly(expr, x, domain="QQ").is_irreducible


def poly_str(coeffs) -> str:
    """Human-readable form of a little-endian coefficient tuple."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            term = str(c)
        else:
            xi = "x" if i == 1 else f"x^{i}"
            if c == 1:
                term = xi
            elif c == -1:
                term = f"-{xi}"
            else:
                term = f"{c}*{xi}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


class AlgebraicNumber:
    """Element of a NumberField as a length-degree coefficient vector.

    Equality is exact coefficient-wise equality.  Arithmetic reduces modulo
    the defining polynomial; inversion goes through the extended polynomial
    gcd over Q.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple[Fraction, ...]):
        if len(coeffs) != field.degree:
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicNumber is immutable")

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise FieldMismatch("elements of different number fields")
            return other
        return self.field.element([Fraction(other)])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"({poly_str(self.coeffs)})"

    def __add__(self, other):
        other = self._coerce(other)
        return AlgebraicNumber(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        prod = _pmul(self.coeffs, other.coeffs)
        _, rem = _pdivmod(prod, self.field.minpoly)
        return self.field.element(rem)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, u, _ = _pgcdext(_pstrip(self.coeffs), self.field.minpoly)
        if len(g) != 1:
            # cannot happen for an irreducible modulus
            raise ArithmeticError("defining polynomial is not irreducible")
        _, rem = _pdivmod(tuple(c / g[0] for c in u), self.field.minpoly)
        return self.field.element(rem)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc


# ---------------------------------------------------------------------------
# Newton polygon and Hensel lifting
# ---------------------------------------------------------------------------


def newton_polygon_slopes(coeffs, p: int):
    """Lower-hull segments of the valuation polygon of a polynomial.

    Returns a list of (root_valuation, length) pairs, where root_valuation
    is a Fraction (the negated slope) and length counts the roots carrying
    that valuation in an algebraic closure.
    """
    pts = [(i, valuation(c, p)) for i, c in enumerate(coeffs) if c != 0]
    if len(pts) < 2:
        return []
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull points lying on or above the new candidate edge
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        out.append((-slope, x2 - x1))
    return out


def _int_poly_mod(coeffs, p: int, k: int):
    """Reduce p-integral rational coefficients modulo p**k to integers."""
    mod = p**k
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError("coefficient is not p-integral")
        out.append(c.numerator % mod * pow(c.denominator % mod, -1, mod) % mod)
    return out


def _hensel_lift(coeffs, p: int, r: int, k: int) -> int:
    """Lift a simple root r of a p-integral polynomial from mod p to mod p**k."""
    have = 1
    root = r % p
    while have < k:
        have = min(2 * have, k)
        ic = _int_poly_mod(coeffs, p, have)
        dc = [(i * ic[i]) for i in range(1, len(ic))]
        mod = p**have
        fx = 0
        for c in reversed(ic):
            fx = (fx * root + c) % mod
        dfx = 0
        for c in reversed(dc):
            dfx = (dfx * root + c) % mod
        root = (root - fx * pow(dfx, -1, mod)) % mod
    return root


def _zp_roots(coeffs, p: int, k: int, depth: int = 0):
    """All roots in Z_p of a squarefree p-integral polynomial, mod p**k.

    Returns integers r with f(r) == 0 mod p**k, one per genuine Z_p root.
    Residues that are not simple modulo p are separated recursively; failure
    to separate raises LiftingObstruction.
    """
    if depth > 64:
        raise LiftingObstruction("root separation did not stabilise")
    vals = [valuation(c, p) for c in coeffs if c != 0]
    if not vals:
        return []
    shift = min(vals)
    work = tuple(Fraction(c) / Fraction(p) ** shift for c in coeffs)
    fp = _int_poly_mod(work, p, 1)
    if all(c == 0 for c in fp):  # cannot happen after normalisation
        raise LiftingObstruction("polynomial vanishes mod p")
    dfp = [(i * fp[i]) % p for i in range(1, len(fp))]
    roots = []
    for r in range(p):
        fr = 0
        for c in reversed(fp):
            fr = (fr * r + c) % p
        if fr != 0:
            continue
        dfr = 0
        for c in reversed(dfp):
            dfr = (dfr * r + c) % p
        if dfr % p != 0:
            roots.append(_hensel_lift(work, p, r, k))
        else:
            # shift into the residue disc r + p*Z_p and recurse
            sub = _compose_affine(work, r, p)
            for z in _zp_roots(sub, p, max(k - 1, 1), depth + 1):
                roots.append((r + p * z) % p**k)
    return roots


def _compose_affine(coeffs, r: int, p: int):
    """Coefficients of f(r + p*z) as a polynomial in z."""
    acc = ()
    lin = (Fraction(r), Fraction(p))
    for c in reversed(coeffs):
        acc = _padd(_pmul(acc, lin), (Fraction(c),))
    return acc


def _val_at_least(x, p: int, n: int) -> bool:
    """Whether v_p(x) >= n, via a single exact reduction (no digit loop)."""
    x = Fraction(x)
    if x == 0:
        return True
    if n <= 0:
        shifted = x * p ** (-n)
        return shifted.denominator % p != 0
    return (x / p**n).denominator % p != 0


def padic_roots(field_or_coeffs, p: int, precision: int):
    """All roots of the defining polynomial inside Q_p.

    Each root is returned with at least `precision` known digits, and its
    stored representative x satisfies v(f(x)) >= precision; when the
    derivative at the root has negative valuation this forces extra digits
    beyond the request, which are kept.  Only Newton-polygon segments with
    integer slopes can carry Q_p roots; the list may legitimately be empty.
    """
    require_odd_prime(p)
    if precision < 1:
        raise ValueError("precision must be >= 1")
    coeffs = (
        field_or_coeffs.minpoly
        if isinstance(field_or_coeffs, NumberField)
        else _pstrip([Fraction(c) for c in field_or_coeffs])
    )
    roots = []
    for w, _count in newton_polygon_slopes(coeffs, p):
        if w.denominator != 1:
            continue
        w = int(w)
        # substitute x = p^w * y and renormalise: unit roots y remain
        scaled = [c * Fraction(p) ** (w * i) for i, c in enumerate(coeffs)]
        shift = min(valuation(c, p) for c in scaled if c != 0)
        h = tuple(c / Fraction(p) ** shift for c in scaled)
        k = max(precision - w, 1)
        attempts = 0
        while True:
            attempts += 1
            if attempts > 12:
                raise LiftingObstruction("residual did not reach requested precision")
            deficit = 0
            found = []
            for y in _zp_roots(h, p, k):
                if y % p == 0:
                    continue  # belongs to a different slope segment
                x = Fraction(p) ** w * y
                if not _val_at_least(_peval(coeffs, x), p, precision):
                    deficit = max(deficit, 2)
                    break
                found.append(PAdicApprox(p, w, y, w + k))
            if deficit == 0:
                roots.extend(found)
                break
            # lifting more digits raises the residual valuation one-for-one
            k += max(precision - (w + k), 0) + deficit + 2
    roots.sort(key=lambda r: (r.val, r.unit))
    return roots


def select_largest_root(roots) -> PAdicApprox:
    """The unique root of maximal p-adic norm (minimal valuation)."""
    if not roots:
        raise NoRoot("no roots in Q_p")
    best = min(r.val for r in roots)
    top = [r for r in roots if r.val == best]
    if len(top) > 1:
        raise AmbiguousSelection(
            f"{len(top)} roots share the maximal norm p^{-best}"
        )
    return top[0]


# ---------------------------------------------------------------------------
# embeddings into Q_p
# ---------------------------------------------------------------------------


class PAdicEmbedding:
    """A choice of root of a number field's polynomial inside Q_p.

    The root is cached at some achieved precision and transparently re-lifted
    (by doubling) when more digits are needed.  Refinement is serialised with
    a lock; concurrent reads are safe.
    """

    def __init__(self, field: NumberField, prime: int, root: PAdicApprox):
        self.field = field
        self.prime = require_odd_prime(prime)
        self._root = root
        self._lock = threading.Lock()

    @classmethod
    def create(
        cls,
        field: NumberField,
        prime: int,
        precision: int = 32,
        select: str = "largest",
    ) -> "PAdicEmbedding":
        if select != "largest":
            raise ValueError("only 'largest' root selection is supported")
        root = select_largest_root(padic_roots(field, prime, precision))
        return cls(field, prime, root)

    @property
    def root(self) -> PAdicApprox:
        return self._root

    @property
    def achieved_precision(self) -> int:
        return self._root.precision

    def refine_to(self, precision: int) -> PAdicApprox:
        with self._lock:
            if self._root.precision >= precision:
                return self._root
            target = max(precision, 2 * self._root.precision)
            roots = padic_roots(self.field, self.prime, target)
            old = self._root
            for r in roots:
                if r.val == old.val and (r.unit - old.unit) % self.prime ** (
                    old.precision - old.val
                ) == 0:
                    self._root = r
                    return self._root
            raise LiftingObstruction("refined roots no longer match the cached root")

    def embed(self, x: "AlgebraicNumber", precision: int) -> PAdicApprox:
        return embed(x, self, precision)

    def __call__(self, x: "AlgebraicNumber") -> "EmbeddedAlgebraic":
        if x.field != self.field:
            raise FieldMismatch("element belongs to a different field")
        return EmbeddedAlgebraic(x, self)


def embed(x: AlgebraicNumber, emb: PAdicEmbedding, precision: int) -> PAdicApprox:
    """Evaluate the coefficient vector at the embedded root, correct modulo
    p**precision.  The root is re-lifted as needed."""
    if x.field != emb.field:
        raise FieldMismatch("element belongs to a different field")
    p = emb.prime
    if x.is_rational():
        return PAdicApprox.from_rational(x.coeffs[0], p, precision)
    root_val = emb.root.val
    pad = max(0, -root_val) * max(1, x.field.degree - 1)
    pad += max((max(0, -valuation(c, p)) for c in x.coeffs if c != 0), default=0)
    work = precision + pad + 1
    for _ in range(12):
        root = emb.refine_to(work)
        acc = PAdicApprox.from_rational(x.coeffs[-1], p, work + max(0, -root_val))
        for c in reversed(x.coeffs[:-1]):
            acc = acc * root + c
        achieved = acc.precision
        if achieved >= precision:
            return acc.with_precision(precision)
        work += precision - achieved + pad + 1
    raise InsufficientPrecision("embedding did not reach the requested precision")


class EmbeddedAlgebraic:
    """An AlgebraicNumber together with a p-adic embedding of its field.

    Behaves as an exact p-adic value: field arithmetic is exact, digit
    queries go through the embedding at whatever precision they need.
    """

    __slots__ = ("alg", "emb")

    def __init__(self, alg: AlgebraicNumber, emb: PAdicEmbedding):
        if alg.field != emb.field:
            raise FieldMismatch("element belongs to a different field")
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "emb", emb)

    def __setattr__(self, *a):
        raise AttributeError("EmbeddedAlgebraic is immutable")

    @property
    def prime(self) -> int:
        return self.emb.prime

    def is_zero(self) -> bool:
        return self.alg.is_zero()

    def to_approx(self, precision: int) -> PAdicApprox:
        return embed(self.alg, self.emb, precision)

    def valuation(self):
        """Exact valuation, found by raising the embedding precision until a
        nonzero digit appears.  PLUS_INFINITY for the exact zero."""
        if self.alg.is_zero():
            return PLUS_INFINITY
        if self.alg.is_rational():
            return valuation(self.alg.as_fraction(), self.prime)
        n = 8  # independent of the cached root precision: most values are
        # far from zero, and starting large would ratchet the cache up
        for _ in range(20):
            a = self.to_approx(n)
            if not a.is_zero_at_precision():
                return a.val
            n *= 2
        raise InsufficientPrecision("valuation not resolved; value too close to zero")

    def _wrap(self, alg: AlgebraicNumber) -> "EmbeddedAlgebraic":
        return EmbeddedAlgebraic(alg, self.emb)

    def _unwrap(self, other):
        if isinstance(other, EmbeddedAlgebraic):
            if other.emb is not self.emb and (
                other.emb.field != self.emb.field or other.emb.prime != self.emb.prime
            ):
                raise FieldMismatch("values use different embeddings")
            return other.alg
        return other

    def __add__(self, other):
        return self._wrap(self.alg + self._unwrap(other))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.alg)

    def __sub__(self, other):
        return self._wrap(self.alg - self._unwrap(other))

    def __rsub__(self, other):
        return self._wrap(self._unwrap(other) - self.alg)

    def __mul__(self, other):
        return self._wrap(self.alg * self._unwrap(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.alg / self._unwrap(other))

    def __rtruediv__(self, other):
        return self._wrap(self._unwrap(other) / self.alg)

    def __eq__(self, other):
        if isinstance(other, EmbeddedAlgebraic):
            return self.prime == other.prime and self.alg == other.alg
        return self.alg == other

    def __hash__(self):
        return hash((self.prime, self.alg))

    def __repr__(self):
        return f"{self.alg!r}@Q_{self.prime}"


# ---------------------------------------------------------------------------
# exact linear algebra over Q
# ---------------------------------------------------------------------------


def rational_linear_dependence(values):
    """A nonzero rational vector c with sum(c_j * values_j) == 0, or None.

    Values may be Fractions, ints, AlgebraicNumbers of one common field, or
    EmbeddedAlgebraic wrappers thereof.  The kernel is computed exactly on
    the coefficient matrix; the returned vector is scaled to coprime
    integers with a positive leading entry.
    """
    vecs = []
    field = None
    raw = [v.alg if isinstance(v, EmbeddedAlgebraic) else v for v in values]
    for v in raw:
        if isinstance(v, AlgebraicNumber):
            if field is None:
                field = v.field
            elif v.field != field:
                raise FieldMismatch("values in different number fields")
    for v in raw:
        if isinstance(v, AlgebraicNumber):
            vecs.append(list(v.coeffs))
        else:
            q = Fraction(v)
            if field is None:
                vecs.append([q])
            else:
                vecs.append([q] + [Fraction(0)] * (field.degree - 1))
    d = len(vecs[0])
    k = len(vecs)
    # rows of the homogeneous system: one per coordinate
    rows = [[vecs[j][i] for j in range(k)] for i in range(d)]
    pivots = {}
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, d) if rows[i][col] != 0), None)
        if piv is None:
            # free column: build the kernel vector supported on pivots seen so far
            c = [Fraction(0)] * k
            c[col] = Fraction(1)
            for pc, pr in pivots.items():
                c[pc] = -rows[pr][col] / rows[pr][pc]
            return _normalize_dependency(c)
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(d):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    return None


def _normalize_dependency(c):
    from math import gcd

    lcm = 1
    for x in c:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in c]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)
