"""Decision oracle for m-modular Hadamard matrix existence.

decide(n, m) stacks the cheap necessary conditions, the small-case
quadratic test, the construction planner and (optionally) exhaustive
search into one auditable verdict.  Every Exists verdict carries a
certificate; every NotExists names the test that fired.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import search as search_mod
from .constructions import (
    CapExceeded,
    family10_params,
    materialize,
    plan,
    recipe_to_json,
)
from .matrices import verify_mh
from .numtheory import euler_phi, is_perfect_square, is_prime, is_quadratic_residue

__all__ = [
    "NotApplicable",
    "SmallCaseReport",
    "Verdict",
    "check_gcd_bound",
    "decide",
    "small_case_test",
    "small_even_reduction",
    "special_case_2m_plus_1",
    "threshold_note",
    "verdict_to_json",
]


class NotApplicable(ValueError):
    """The test's preconditions do not hold for this (n, m)."""


@dataclass(frozen=True)
class Verdict:
    n: int
    m: int
    status: str
    reason: str = None
    certificate: object = None
    conjecture_prediction: bool = None
    threshold_note: str = None


@dataclass(frozen=True)
class SmallCaseReport:
    n: int
    m: int
    Delta: int
    sqrt_Delta: int
    d_plus: Fraction
    d_minus: Fraction
    admissible: bool
    row_profile: tuple


def _gcd_divisibility(n, m):
    g = gcd(m, 4)
    if n % g:
        return "gcd(m,4) = %d does not divide n = %d" % (g, n)
    return None


def _gcd_size(n, m):
    if n % 2 == 0 or n % m == 0:
        return None
    r = pow(2, euler_phi(m) - 2, m) * n % m
    if n < 4 * r:
        return "r = %d forces n >= %d, but n = %d" % (r, 4 * r, n)
    return None


def check_gcd_bound(n, m):
    """Both halves of the gcd necessary condition; None when they pass.

    Part one: gcd(m,4) must divide n.  Part two: for odd n not divisible
    by m, the residue r = 2^(phi(m)-2) n mod m forces n >= 4r.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    return _gcd_divisibility(n, m) or _gcd_size(n, m)


def small_case_test(n, m):
    """Quadratic feasibility test for odd n < 3m.

    The row-counting argument pins the number of rows of each inner
    product sign to a root of a quadratic with discriminant Delta; the
    matrix can only exist when Delta is a perfect square and a root is a
    nonnegative integer.
    """
    if m % 2 == 0:
        raise NotApplicable("even modulus")
    if n % 2 == 0 or n >= 3 * m or gcd(n, m) != 1:
        raise NotApplicable("need odd n < 3m with gcd(n,m) = 1")
    delta = (
        36 * m**4
        + m**3 * (4 - 28 * n)
        + m**2 * (5 * n**2 - 2 * n + 1)
        + 2 * m * n * (n**2 - 1)
        + (n - 1) ** 2 * n**2
    )
    root = isqrt(delta) if delta >= 0 else None
    square = root is not None and root * root == delta
    base = 14 * m**2 - m * n - m - n**2 + n
    d_plus = d_minus = None
    admissible = False
    chosen = None
    if square:
        d_plus = Fraction(base + root, 8 * m)
        d_minus = Fraction(base - root, 8 * m)
        for d in (d_plus, d_minus):
            if d.denominator == 1 and d >= 0:
                admissible = True
                if chosen is None:
                    chosen = int(d)
    profile = None
    if admissible:
        profile = (
            chosen,
            n - 1 - chosen,
            Fraction(n - m, 4),
            Fraction((n - m) * (n - m - 1), 4 * m),
        )
    return SmallCaseReport(
        n, m, delta, root if square else None, d_plus, d_minus, admissible, profile
    )


def special_case_2m_plus_1(m):
    """Feasibility of n = 2m + 1: m^2 + (m+1)^2 must be a perfect square."""
    if m < 3 or m % 2 == 0:
        raise NotApplicable("need odd m >= 3")
    return is_perfect_square(m * m + (m + 1) * (m + 1)) is not None


def small_even_reduction(n, m):
    """For odd m and even n < 2m, only exact Hadamard matrices qualify.

    Off-diagonal inner products are even multiples of m in (-2m, 2m),
    hence zero, so 4 must divide n.  Returns a reason string or None.
    """
    if m % 2 == 0 or n % 2:
        return None
    if n < 2 * m and n % 4:
        return "an exact Hadamard matrix of order %d cannot exist" % n
    return None


_CLASS_2_MOD_7_BOUND = 52565
_CLASS_10_MOD_14_BOUND = 683294
_CLASS_12_MOD_14_BOUND = 4481157543653329008412788039740507382
_MENON_CHAIN_START = 43
_PALEY11_CHAIN_STARTS = {48: 0, 34: 1, 20: 2, 6: 3, 76: 4, 62: 5}


def threshold_note(n, m):
    """Which stated cutoff keeps (n, m) out of the construction chains."""
    if m != 7:
        return None
    r14 = n % 14
    if r14 == 1 and n < _MENON_CHAIN_START:
        return "n = 1 (mod 14) but n < %d" % _MENON_CHAIN_START
    if r14 == 6:
        lo = 48 + 70 * _PALEY11_CHAIN_STARTS[n % 84]
        if n < lo:
            return "n = 6 (mod 14) but n < %d" % lo
    if n % 7 == 2 and n < _CLASS_2_MOD_7_BOUND:
        return "n = 2 (mod 7) but n < %d" % _CLASS_2_MOD_7_BOUND
    if r14 == 10 and n < _CLASS_10_MOD_14_BOUND:
        return "n = 10 (mod 14) but n < %d" % _CLASS_10_MOD_14_BOUND
    if r14 == 12:
        if n < _CLASS_12_MOD_14_BOUND:
            return "n = 12 (mod 14) but n < %d" % _CLASS_12_MOD_14_BOUND
        giant = family10_params(29, 5, 6)
        return (
            "n = 26 (mod 28) but no extension base of order n - %d is available"
            % (giant.v - 1)
        )
    return None


def _conjecture(n, m):
    prime, _ = is_prime(m)
    if m % 2 == 0 or not prime:
        return None
    if n % 2 == 0 or n % m == 0:
        return True
    return is_quadratic_residue(n % m, m)


def decide(n, m, search_cap=None, materialize_cap=None):
    """Existence verdict for an MH(n, m).

    search_cap enables the exhaustive-search fallback for n up to that
    bound; materialize_cap limits certificate materialization (the
    certificate stays symbolic past it).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if m < 2:
        raise ValueError("need m >= 2")
    prediction = _conjecture(n, m)

    def verdict(status, reason=None, certificate=None, note=None):
        return Verdict(n, m, status, reason, certificate, prediction, note)

    if _gcd_divisibility(n, m):
        return verdict("NotExists", "GcdBound")
    if n % 2 and m % 2 and gcd(n, m) == 1:
        if not is_quadratic_residue(n % m, m):
            return verdict("NotExists", "QuadNonResidue")
    if _gcd_size(n, m):
        return verdict("NotExists", "GcdBound")
    if small_even_reduction(n, m):
        return verdict("NotExists", "SmallEvenRealHadamard")

    recipe = plan(n, m)
    if recipe is None and m % 2 and n % 2 and n < 3 * m and gcd(n, m) == 1:
        # quadratic row-count test, consulted only when no construction
        # is known: a verified matrix always outranks it
        if not small_case_test(n, m).admissible:
            return verdict("NotExists", "SmallOddDelta")
    if recipe is not None:
        cap = materialize_cap
        try:
            mat = materialize(recipe, cap)
        except CapExceeded:
            # symbolic certificate: the recipe constructors validated
            # every residue condition, the matrix is too big to build
            pass
        else:
            if not verify_mh(mat, m).verdict:
                raise RuntimeError("certificate failed verification")
        return verdict("Exists", "Constructed", recipe)

    outcome = _search_fallback(n, m, search_cap)
    if outcome is not None:
        if outcome.found is not None:
            return verdict("Exists", "SearchFound", outcome.found)
        if outcome.exhausted:
            return verdict("NotExists", "SearchExhausted")
    return verdict("Unknown", "ThresholdNotMet", note=threshold_note(n, m))


def _search_fallback(n, m, cap):
    if cap is None or n > cap:
        return None
    restricted = (
        m % 2 and n % 2 and n < 3 * m and gcd(n, m) == 1
        and n <= search_mod.MAX_N_RESTRICTED
    )
    if restricted:
        problem = search_mod.SearchProblem(n, m, "restricted", "exhaust")
    elif n <= search_mod.MAX_N_GENERIC:
        problem = search_mod.SearchProblem(n, m, "generic", "exhaust")
    else:
        return None
    return search_mod.run(problem)


def verdict_to_json(v):
    out = {"n": v.n, "m": v.m, "status": v.status}
    if v.reason is not None:
        out["reason"] = v.reason
    if v.threshold_note is not None:
        out["threshold_note"] = v.threshold_note
    if v.conjecture_prediction is not None:
        out["conjecture_prediction"] = v.conjecture_prediction
    if v.certificate is not None:
        cert = v.certificate
        if hasattr(cert, "node"):
            out["certificate"] = {"kind": "recipe", "recipe": recipe_to_json(cert)}
        else:
            out["certificate"] = {
                "kind": "matrix",
                "order": cert.n,
                "rows": [
                    "".join("-" if (row >> j) & 1 else "+" for j in range(cert.n))
                    for row in cert.rows
                ],
            }
    return out
