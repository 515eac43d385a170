"""The p-adic Jacobi-Perron expansion and its Euclidean form.

Starting from an m-tuple of p-adic values, each step emits the Browkin
truncations of the complete quotients and inverts the last difference:

    a_n^(i) = s(alpha_n^(i))
    alpha_{n+1}^(1) = 1 / (alpha_n^(m) - a_n^(m))
    alpha_{n+1}^(i) = alpha_{n+1}^(1) * (alpha_n^(i-1) - a_n^(i-1))

The run stops exactly when alpha_n^(m) - a_n^(m) = 0.  The equivalent
generalized Euclidean form iterates on an (m+1)-tuple, dividing everything
by the last coordinate.  Rational inputs always terminate; exact algebraic
inputs can repeat a complete-quotient tuple, which is detected as
periodicity by exact equality.  Truncated p-adic inputs never claim
periodicity or termination: an undecidable zero test raises
InsufficientPrecision instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DigitMapViolation, InsufficientPrecision, VerificationFailed
from .mcf import MCF, check_convergence_conditions, evaluate_finite
from .numberfield import EmbeddedAlgebraic, rational_linear_dependence
from .padic import (
    PAdicApprox,
    browkin_s,
    in_browkin_range,
    require_odd_prime,
    valuation,
)

PAdicValue = Union[Fraction, EmbeddedAlgebraic, PAdicApprox]

DEFAULT_MAX_STEPS = 10_000


@dataclass(frozen=True)
class JPState:
    """Complete quotients at one step of an expansion."""

    prime: int
    alphas: tuple
    n: int

    @property
    def m(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class StepResult:
    """One emitted quotient tuple; next_state is None exactly on termination."""

    quotients: tuple
    next_state: JPState | None


@dataclass(frozen=True)
class ExpansionResult:
    """Outcome of an expansion run.

    status is one of "finite", "truncated", "periodic".  For periodic runs,
    the stored MCF holds the preperiod plus one full period, witness gives
    the two step indices whose complete-quotient tuples coincided, and
    witness_state is the repeated state itself.  period_candidate is
    advisory only (truncated backends).
    """

    mcf: MCF
    status: str
    steps: int
    preperiod: int | None = None
    period: int | None = None
    witness: tuple | None = None
    witness_state: JPState | None = None
    period_candidate: tuple | None = None

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "preperiod": self.preperiod,
            "period": self.period,
            "quotients": self.mcf.to_json_dict(),
            "steps": self.steps,
        }


def _coerce_value(x, p: int):
    if isinstance(x, (PAdicApprox, EmbeddedAlgebraic)):
        if x.prime != p:
            raise ValueError("value carries a different prime")
        return x
    return Fraction(x)


def _is_exact_zero(x) -> bool:
    """Exact zero test; undecidable for truncated values."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, PAdicApprox):
        if x.is_zero_at_precision():
            raise InsufficientPrecision(
                f"cannot distinguish 0 from O(p^{x.precision})"
            )
        return False
    return x.is_zero()


def _value_valuation(x, p: int):
    if isinstance(x, (int, Fraction)):
        return valuation(x, p)
    if isinstance(x, PAdicApprox):
        return x.valuation
    return x.valuation()


def _validated_digit(digit_map, alpha, p: int) -> Fraction:
    """Apply a pluggable digit map and enforce its runtime contract.

    The emitted digit must lie in Z[1/p] intersected with (-p/2, p/2), must
    satisfy |alpha - digit| < 1, and for |alpha| >= 1 must carry the same
    norm as alpha.  (For |alpha| < 1 the shipped truncation returns 0, so
    only |alpha - digit| <= |alpha| is enforceable there.)
    """
    a = Fraction(digit_map(alpha, p))
    try:
        zero = _is_exact_zero(alpha)
    except InsufficientPrecision:
        zero = False
    if zero:
        if a != 0:
            raise DigitMapViolation("digit map must send 0 to 0")
        return a
    if not in_browkin_range(a, p):
        raise DigitMapViolation(f"digit {a} outside Z[1/p] ∩ (-p/2, p/2)")
    v_alpha = _value_valuation(alpha, p)
    v_diff = _diff_valuation(alpha, a, p)
    if v_diff < 1:
        raise DigitMapViolation(f"|alpha - digit| >= 1 (valuation {v_diff})")
    if v_alpha <= 0:
        if a == 0 or valuation(a, p) != v_alpha:
            raise DigitMapViolation("digit must match the norm of alpha when |alpha| >= 1")
    return a


def _diff_valuation(alpha, a: Fraction, p: int):
    diff = alpha - a
    try:
        if _is_exact_zero(diff):
            return float("inf")
    except InsufficientPrecision:
        return diff.precision  # lower bound is all we know; fine for >= 1 checks
    return _value_valuation(diff, p)


def jp_step(state: JPState, digit_map=None) -> StepResult:
    """One iteration: emit quotients, terminate or build the next state.

    Termination happens exactly when alpha_n^(m) - a_n^(m) = 0; vanishing
    differences in coordinates i < m are legal and propagate as exact
    zeros.
    """
    p = state.prime
    if digit_map is None:
        quotients = tuple(browkin_s(a, p) for a in state.alphas)
    else:
        quotients = tuple(_validated_digit(digit_map, a, p) for a in state.alphas)
    last = state.alphas[-1] - quotients[-1]
    if _is_exact_zero(last):
        return StepResult(quotients, None)
    lead = 1 / last
    nxt = (lead,) + tuple(
        lead * (state.alphas[i] - quotients[i]) for i in range(state.m - 1)
    )
    return StepResult(quotients, JPState(p, nxt, state.n + 1))


def _state_key(state: JPState):
    out = []
    for a in state.alphas:
        if isinstance(a, Fraction):
            out.append(a)
        elif isinstance(a, EmbeddedAlgebraic):
            # canonicalise rational elements so that a value hopping between
            # the Fraction and the constant-vector representation still keys
            # identically
            out.append(a.alg.as_fraction() if a.alg.is_rational() else a.alg.coeffs)
        else:
            return None  # truncated backend: no exact key
    return tuple(out)


def jp_expand(
    inputs,
    p: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    detect_period: bool = False,
    digit_map=None,
) -> ExpansionResult:
    """Run the expansion on an m-tuple of p-adic values.

    Returns a unit-numerator MCF together with the run status.  Periodicity
    is reported only for exact backends, by exact equality of complete
    quotient tuples; truncated backends may at most get an advisory
    period_candidate over the emitted quotients.
    """
    require_odd_prime(p)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    alphas = tuple(_coerce_value(x, p) for x in inputs)
    if not alphas:
        raise ValueError("need at least one input value")
    state = JPState(p, alphas, 0)
    exact = _state_key(state) is not None
    seen = {_state_key(state): 0} if detect_period and exact else None
    rows = []
    while True:
        res = jp_step(state, digit_map)
        rows.append(res.quotients + (Fraction(1),))
        if res.next_state is None:
            return ExpansionResult(
                MCF(state.m, rows, finite=True), "finite", len(rows)
            )
        state = res.next_state
        if seen is not None:
            key = _state_key(state)
            if key in seen:
                first = seen[key]
                return ExpansionResult(
                    MCF(state.m, rows, finite=False),
                    "periodic",
                    len(rows),
                    preperiod=first,
                    period=state.n - first,
                    witness=(first, state.n),
                    witness_state=state,
                )
            seen[key] = state.n
        if len(rows) >= max_steps:
            return ExpansionResult(
                MCF(state.m, rows, finite=False),
                "truncated",
                len(rows),
                period_candidate=None if exact else _quotient_period_candidate(rows),
            )


def _quotient_period_candidate(rows):
    """Smallest (preperiod, period) making the emitted rows eventually
    periodic with at least two full repetitions; advisory only."""
    n = len(rows)
    for period in range(1, n // 2 + 1):
        for pre in range(0, n - 2 * period + 1):
            if all(rows[i] == rows[i + period] for i in range(pre, n - period)):
                return (pre, period)
    return None


def euclid_expand(xs, p: int, max_steps: int = DEFAULT_MAX_STEPS):
    """Generalized Euclidean form on an (m+1)-tuple.

    Iterates x_{n+1}^(1) = x_n^(m+1), x_{n+1}^(i) = x_n^(i-1) -
    a_n^(i-1) x_n^(m+1) with a_n^(i) = s(x_n^(i) / x_n^(m+1)), stopping when
    the last coordinate vanishes.  Returns the expansion result plus the
    full trace of tuples; the produced MCF is identical to jp_expand on the
    coordinate ratios.
    """
    require_odd_prime(p)
    xs = tuple(_coerce_value(x, p) for x in xs)
    if len(xs) < 2:
        raise ValueError("need an (m+1)-tuple with m >= 1")
    m = len(xs) - 1
    if _is_exact_zero(xs[-1]):
        raise ZeroDivisionError("last coordinate must be nonzero")
    trace = [xs]
    rows = []
    status = "truncated"
    while len(rows) < max_steps:
        last = xs[-1]
        quotients = tuple(browkin_s(xs[i] / last, p) for i in range(m))
        rows.append(quotients + (Fraction(1),))
        nxt = (last,) + tuple(xs[i] - quotients[i] * last for i in range(m))
        trace.append(nxt)
        xs = nxt
        if _is_exact_zero(xs[-1]):
            status = "finite"
            break
    return (
        ExpansionResult(MCF(m, rows, finite=status == "finite"), status, len(rows)),
        trace,
    )


def lift_to_integer_tuple(ratios):
    """Scale an m-tuple of rationals by the lcm of denominators, returning
    the (m+1)-tuple of integers whose ratios reproduce it."""
    from math import gcd

    ratios = [Fraction(x) for x in ratios]
    ell = 1
    for x in ratios:
        ell = ell * x.denominator // gcd(ell, x.denominator)
    return tuple(x.numerator * (ell // x.denominator) for x in ratios) + (ell,)


def verify_termination_dependence(result: ExpansionResult, inputs):
    """For a finite run on exact inputs, exhibit rationals (c_1, ..., c_{m+1})
    with c_1 alpha^(1) + ... + c_m alpha^(m) + c_{m+1} = 0.

    Such a dependence must exist whenever the run terminated; failure to
    find one is reported as VerificationFailed (a defect signal, not a
    legitimate outcome).
    """
    if not result.is_finite:
        raise ValueError("dependence is only guaranteed for finite runs")
    values = [x.alg if isinstance(x, EmbeddedAlgebraic) else Fraction(x) for x in inputs]
    values.append(values[0] * 0 + 1)
    dep = rational_linear_dependence(values)
    if dep is None:
        raise VerificationFailed("finite run but inputs are Q-linearly independent")
    acc = None
    for c, v in zip(dep, values):
        term = c * v
        acc = term if acc is None else acc + term
    if not (acc == 0 or (hasattr(acc, "is_zero") and acc.is_zero())):
        raise VerificationFailed("dependency vector does not annihilate the inputs")
    return dep


@dataclass(frozen=True)
class ReexpandReport:
    """Whether re-expanding the value of a finite MCF reproduces it.

    failed_hypotheses lists which uniqueness hypotheses the block violates
    (digit range, norm conditions, unit numerators) whenever the quotients
    do not match.
    """

    matches: bool
    failed_hypotheses: tuple[str, ...]
    value: tuple
    reexpansion: ExpansionResult

    def __bool__(self) -> bool:
        return self.matches


def reexpand_check(mcf: MCF, p: int, max_steps: int = DEFAULT_MAX_STEPS) -> ReexpandReport:
    """Evaluate a finite MCF exactly and expand its value again.

    Under the uniqueness hypotheses (unit numerators, digits in
    Z[1/p] ∩ (-p/2, p/2), norm conditions from index 1 on) the re-expansion
    must reproduce the quotients exactly.
    """
    require_odd_prime(p)
    failed = []
    if not mcf.is_unit():
        failed.append("unit_numerators")
    for n, row in enumerate(mcf.rows):
        if not all(in_browkin_range(a, p) for a in row[: mcf.m]):
            failed.append(f"digit_range@n={n}")
            break
    rep = check_convergence_conditions(mcf, p, unit_numerators=True)
    if not rep.ok:
        failed.append(f"norm_conditions@n={rep.first_violation}")
    value = evaluate_finite(mcf)
    re = jp_expand(value, p, max_steps=max_steps)
    matches = re.is_finite and re.mcf.rows == mcf.rows
    return ReexpandReport(matches, tuple(failed), value, re)
