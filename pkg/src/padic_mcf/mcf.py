"""Formal multidimensional continued fractions.

An MCF of dimension m is m+1 sequences of rational partial quotients
a_n^(1), ..., a_n^(m+1); convergents Q_n^(i) = A_n^(i)/A_n^(m+1) follow the
depth-(m+1) linear recurrence A_n^(i) = sum_j a_n^(j) A_{n-j}^(i) seeded
with Kronecker deltas.  This module provides the rolling convergent table,
determinant identities of the step matrices, p-adic convergence-condition
checks, weight rescaling (which preserves all convergents), finite
evaluation through two independent routes, and the strong-convergence
quantities V_n^(i) = A_n^(i) - target_i * A_n^(m+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InternalMismatch,
    PrecisionExhausted,
    ZeroDenominatorConvergent,
    ZeroIntermediate,
    ZeroWeight,
)
from .padic import PLUS_INFINITY, require_odd_prime, valuation


class MCF:
    """A finite block of partial quotients, stored as per-step rows.

    Row n is the tuple (a_n^(1), ..., a_n^(m+1)).  The first row must have
    a_0^(m+1) = 1 and no row may have a vanishing last entry.  `finite`
    records whether the block is a complete expansion (as opposed to the
    prefix of a truncated or periodic one).
    """

    __slots__ = ("m", "rows", "finite")

    def __init__(self, m: int, rows, finite: bool = True):
        if m < 1:
            raise ValueError("dimension must be >= 1")
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if not rows:
            raise ValueError("need at least one row of partial quotients")
        for row in rows:
            if len(row) != m + 1:
                raise ValueError(f"rows must have {m + 1} entries")
            if row[m] == 0:
                raise ValueError("partial quotients a_n^(m+1) must be nonzero")
        if rows[0][m] != 1:
            raise ValueError("a_0^(m+1) must equal 1")
        self.m = m
        self.rows = rows
        self.finite = finite

    @classmethod
    def from_sequences(cls, seqs, finite: bool = True) -> "MCF":
        """Build from m+1 per-index sequences (the transposed layout)."""
        seqs = [list(s) for s in seqs]
        if len(seqs) < 2:
            raise ValueError("need at least two sequences")
        if len({len(s) for s in seqs}) != 1:
            raise ValueError("sequences must share one length")
        rows = list(zip(*seqs))
        return cls(len(seqs) - 1, rows, finite)

    @classmethod
    def unit_from_sequences(cls, seqs, finite: bool = True) -> "MCF":
        """Build from the first m sequences, filling a_n^(m+1) = 1."""
        seqs = [list(s) for s in seqs]
        ones = [Fraction(1)] * len(seqs[0])
        return cls.from_sequences(seqs + [ones], finite)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def last_index(self) -> int:
        return len(self.rows) - 1

    def sequences(self):
        return tuple(tuple(row[i] for row in self.rows) for i in range(self.m + 1))

    def is_unit(self) -> bool:
        return all(row[self.m] == 1 for row in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, MCF)
            and (self.m, self.rows, self.finite) == (other.m, other.rows, other.finite)
        )

    def __repr__(self):
        seqs = ", ".join(
            "(" + ", ".join(str(x) for x in s) + ")" for s in self.sequences()
        )
        return f"MCF[m={self.m}; {seqs}]"

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "a": [[format_rational(x) for x in seq] for seq in self.sequences()],
            "finite": self.finite,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "MCF":
        seqs = [[Fraction(x) for x in seq] for seq in d["a"]]
        if len(seqs) != d["m"] + 1:
            raise ValueError("'a' must hold m+1 sequences")
        return cls.from_sequences(seqs, bool(d.get("finite", True)))


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ConvergentsTable:
    """Rolling window of the convergent numerators/denominators.

    Seeded with A_{-j}^(i) = delta_ij for j = 1..m+1; each push advances one
    index through the recurrence.  Only the last m+1 columns are retained
    unless record=True, which keeps the whole history (needed for the
    strong-convergence quantities).
    """

    def __init__(self, m: int, record: bool = False):
        if m < 1:
            raise ValueError("dimension must be >= 1")
        self.m = m
        self.n = -1
        # newest first: columns n, n-1, ..., n-m
        self._window = [
            tuple(Fraction(1) if i == j else Fraction(0) for i in range(m + 1))
            for j in range(m + 1)
        ]
        self.record = record
        self._history = list(reversed(self._window)) if record else None
        self._rows = [] if record else None

    def column(self, back: int = 0):
        """Column A_{n-back}^(i); back may reach m."""
        return self._window[back]

    def history_column(self, n: int):
        """Recorded column at index n >= -(m+1); requires record=True."""
        if self._history is None:
            raise ValueError("table was created without record=True")
        return self._history[n + self.m + 1]

    @property
    def recorded_rows(self):
        if self._rows is None:
            raise ValueError("table was created without record=True")
        return tuple(self._rows)

    def push(self, row) -> None:
        """Advance by one index with the partial-quotient tuple row."""
        row = tuple(Fraction(x) for x in row)
        if len(row) != self.m + 1:
            raise ValueError(f"need {self.m + 1} partial quotients")
        if row[self.m] == 0:
            raise ValueError("a_n^(m+1) must be nonzero")
        if self.n == -1 and row[self.m] != 1:
            raise ValueError("a_0^(m+1) must equal 1")
        new = tuple(
            sum((row[j] * self._window[j][i] for j in range(self.m + 1)), Fraction(0))
            for i in range(self.m + 1)
        )
        self._window = [new] + self._window[: self.m]
        self.n += 1
        if self.record:
            self._history.append(new)
            self._rows.append(row)

    def denominator(self):
        return self._window[0][self.m]

    def convergents(self):
        """Q_n^(i) for i = 1..m; raises while the denominator vanishes."""
        den = self.denominator()
        if den == 0:
            raise ZeroDenominatorConvergent(f"A_{self.n}^({self.m + 1}) = 0")
        return tuple(self._window[0][i] / den for i in range(self.m))

    def try_convergents(self):
        try:
            return self.convergents()
        except ZeroDenominatorConvergent:
            return None


def push_partial_quotients(table: ConvergentsTable, row):
    """Push one row and return the convergents, or None while undefined."""
    table.push(row)
    return table.try_convergents()


def convergents_of(mcf: MCF):
    """All defined convergents Q_n, as a list with None at zero denominators."""
    t = ConvergentsTable(mcf.m)
    out = []
    for row in mcf.rows:
        out.append(push_partial_quotients(t, row))
    return out


# ---------------------------------------------------------------------------
# step matrices and determinant identity
# ---------------------------------------------------------------------------


def step_matrix(row):
    """The (m+1)x(m+1) matrix with first column the partial quotients and a
    shifted identity on the right; products of these accumulate the
    convergent columns."""
    m1 = len(row)
    return [
        [Fraction(row[i])] + [Fraction(1) if j == i + 1 else Fraction(0) for j in range(1, m1)]
        for i in range(m1)
    ]


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]


def _det(mat):
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def determinant_check(mcf: MCF, n: int):
    """Exact determinant of the product of the first n+1 step matrices and
    whether it matches the closed form (-1)**(m*(n+1)) * prod(a_j^(m+1)).

    Each step matrix has determinant (-1)**m * a_n^(m+1): expanding along
    its bottom row crosses an m-cycle permutation.
    """
    if not 0 <= n <= mcf.last_index:
        raise ValueError("n outside the stored range")
    prod = step_matrix(mcf.rows[0])
    for row in mcf.rows[1 : n + 1]:
        prod = _mat_mul(prod, step_matrix(row))
    det = _det(prod)
    expected = Fraction(-1) ** (mcf.m * (n + 1))
    for row in mcf.rows[: n + 1]:
        expected *= row[mcf.m]
    return det, det == expected


# ---------------------------------------------------------------------------
# convergence conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the partial-quotient norm conditions for n = 1..upto.

    In the general form the requirements are |a_n^(1)| >= 1 and
    |a_n^(i)| < |a_n^(1)| for i = 2..m+1; with unit_numerators the first
    becomes strict (> 1) and the second ranges over i = 2..m only.
    """

    unit_numerators: bool
    ok: bool
    first_violation: int | None
    per_index: tuple[tuple[int, bool, bool], ...]  # (n, cond1, cond2)

    def to_json_dict(self) -> dict:
        return {
            "unit_numerators": self.unit_numerators,
            "ok": self.ok,
            "first_violation": self.first_violation,
            "per_index": [list(t) for t in self.per_index],
        }


def check_convergence_conditions(
    mcf: MCF, p: int, upto: int | None = None, unit_numerators: bool = False
) -> ConditionReport:
    require_odd_prime(p)
    if upto is None:
        upto = mcf.last_index
    if not 0 <= upto <= mcf.last_index:
        raise ValueError("upto outside the stored range")
    entries = []
    first = None
    for n in range(1, upto + 1):
        row = mcf.rows[n]
        v1 = valuation(row[0], p)
        cond1 = v1 < 0 if unit_numerators else v1 <= 0
        hi = mcf.m if unit_numerators else mcf.m + 1
        cond2 = all(valuation(row[i], p) > v1 for i in range(1, hi))
        entries.append((n, cond1, cond2))
        if first is None and not (cond1 and cond2):
            first = n
    return ConditionReport(unit_numerators, first is None, first, tuple(entries))


# ---------------------------------------------------------------------------
# rescaling
# ---------------------------------------------------------------------------


def rescale(mcf: MCF, weights) -> MCF:
    """Transform a_n^(i) -> (w_{n-i}/w_n) a_n^(i) with w_k = 1 for k < 0.

    All convergents are unchanged; the numerator/denominator columns scale
    by w_n.  Requires w_0 = 1 so the transformed quotients keep
    a_0^(m+1) = 1.
    """
    w = [Fraction(x) for x in weights]
    if len(w) < len(mcf.rows):
        raise ValueError("need one weight per stored index")
    for i, x in enumerate(w):
        if x == 0:
            raise ZeroWeight(f"w_{i} = 0")
    if w[0] != 1:
        raise ValueError("w_0 must equal 1 to preserve a_0^(m+1) = 1")

    def wat(k: int) -> Fraction:
        return w[k] if k >= 0 else Fraction(1)

    rows = [
        tuple(wat(n - (i + 1)) / w[n] * row[i] for i in range(mcf.m + 1))
        for n, row in enumerate(mcf.rows)
    ]
    return MCF(mcf.m, rows, mcf.finite)


def dehomogenize(mcf: MCF) -> MCF:
    """Rescale with w_n = a_n^(m+1) * w_{n-(m+1)} so every a_n^(m+1) becomes 1.

    Convergents are preserved; the norm conditions need not be.
    """
    w = []
    for n, row in enumerate(mcf.rows):
        if n == 0:
            w.append(Fraction(1))
        else:
            prev = w[n - (mcf.m + 1)] if n - (mcf.m + 1) >= 0 else Fraction(1)
            w.append(row[mcf.m] * prev)
    out = rescale(mcf, w)
    assert out.is_unit()
    return out


# ---------------------------------------------------------------------------
# finite evaluation
# ---------------------------------------------------------------------------


def evaluate_finite(mcf: MCF):
    """Exact value (alpha_0^(1), ..., alpha_0^(m)) of a finite MCF.

    Computed twice: backward substitution through the defining relations
    with alpha_r^(i) = a_r^(i), and the final convergent column; the two
    must agree exactly.
    """
    if not mcf.finite:
        raise ValueError("only finite MCFs have a value")
    r = mcf.last_index
    m = mcf.m
    alphas = list(mcf.rows[r][:m])
    for n in range(r - 1, -1, -1):
        nxt = alphas + [mcf.rows[n + 1][m]]  # alpha_{n+1}^(m+1) = a_{n+1}^(m+1)
        lead = nxt[0]
        if lead == 0:
            raise ZeroIntermediate(f"alpha_{n + 1}^(1) = 0 during backward evaluation")
        alphas = [mcf.rows[n][i] + nxt[i + 1] / lead for i in range(m)]
    backward = tuple(alphas)

    table = ConvergentsTable(m)
    for row in mcf.rows:
        table.push(row)
    forward = table.convergents()

    if backward != forward:
        raise InternalMismatch(
            f"backward value {backward} != final convergent {forward}"
        )
    return backward


def reconstruct_initial(table: ConvergentsTable, alphas):
    """Recover the starting tuple from the complete quotients at the current
    index and the last m+1 convergent columns.

    With the table advanced through index n-1 and alphas the complete
    quotients (alpha_n^(1), ..., alpha_n^(m), alpha_n^(m+1)), returns the
    exact (alpha_0^(1), ..., alpha_0^(m)).
    """
    m = table.m
    if len(alphas) != m + 1:
        raise ValueError("need the m+1 complete quotients at the current index")
    den = sum(
        (alphas[j] * table.column(j)[m] for j in range(m + 1)),
        start=alphas[0] * 0,
    )
    out = []
    for i in range(m):
        num = sum(
            (alphas[j] * table.column(j)[i] for j in range(m + 1)),
            start=alphas[0] * 0,
        )
        out.append(num / den)
    return tuple(out)


# ---------------------------------------------------------------------------
# strong convergence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StrongConvergenceSeq:
    """V_n^(i) = A_n^(i) - target_i * A_n^(m+1) for n = -m .. last index.

    `values[k]` is the tuple at index n = k - m; `valuations` carries the
    matching p-adic valuations (PLUS_INFINITY for exact zeros).
    """

    m: int
    prime: int
    values: tuple
    valuations: tuple

    def at(self, n: int):
        return self.values[n + self.m]

    def valuation_at(self, n: int):
        return self.valuations[n + self.m]

    @property
    def last_index(self) -> int:
        return len(self.values) - 1 - self.m


def _value_valuation(x, p: int):
    from .errors import InsufficientPrecision

    if isinstance(x, (int, Fraction)):
        return valuation(x, p)
    if hasattr(x, "is_zero_at_precision"):  # truncated backend
        if x.is_zero_at_precision():
            raise PrecisionExhausted(
                f"norm undetermined: value is 0 mod p^{x.precision}"
            )
        return x.valuation
    try:
        return x.valuation()  # embedded algebraic backend
    except InsufficientPrecision as exc:
        raise PrecisionExhausted(str(exc)) from None


def strong_convergence_sequence(
    table: ConvergentsTable, targets, p: int
) -> StrongConvergenceSeq:
    """Strong-convergence quantities for a fully recorded table.

    Targets are exact values (Fraction or embedded algebraic).  The linear
    recurrence V_n = sum_j a_n^(j) V_{n-j} is re-checked exactly for every
    recorded index as a self-test.
    """
    require_odd_prime(p)
    if not table.record:
        raise ValueError("table must be created with record=True")
    m = table.m
    if len(targets) != m:
        raise ValueError("need one target per dimension")
    rows = table.recorded_rows
    values = []
    for n in range(-m, table.n + 1):
        col = table.history_column(n)
        row_v = []
        for i in range(m):
            if isinstance(col[m], (int, Fraction)) and col[m] == 0:
                row_v.append(col[i])  # exact: the target contributes nothing
            else:
                row_v.append(col[i] - targets[i] * col[m])
        values.append(tuple(row_v))
    for n in range(0, table.n + 1):
        row = rows[n]
        for i in range(m):
            acc = None
            for j in range(1, m + 2):
                idx = n - j
                if idx >= -m:
                    term = row[j - 1] * values[idx + m][i]
                else:
                    # idx = -(m+1): the seed column is e_{m+1}, so
                    # V_{-(m+1)}^(i) = -target_i
                    term = row[j - 1] * (Fraction(0) - targets[i])
                acc = term if acc is None else acc + term
            if not _exact_eq_zero(acc - values[n + m][i]):
                raise InternalMismatch(f"V recurrence failed at n={n}, i={i + 1}")
    vals = tuple(
        tuple(_value_valuation(x, p) for x in row_v) for row_v in values
    )
    return StrongConvergenceSeq(m, p, tuple(values), vals)


def _exact_eq_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero_at_precision"):
        # truncated backend: indistinguishable-from-zero is the best check
        return x.is_zero_at_precision()
    return x.is_zero()
