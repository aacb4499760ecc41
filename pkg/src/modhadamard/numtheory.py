"""Exact integer and modular arithmetic primitives.

Everything here is arbitrary precision; nothing ever overflows silently.
Primality is deterministic below 2**64 and probabilistic (flagged) above.
"""

import math
import random
from dataclasses import dataclass

__all__ = [
    "NotInvertible",
    "NotCoprime",
    "Condition1Error",
    "Condition1Witness",
    "euler_phi",
    "factorize",
    "mod_inverse",
    "half_pow_coeff",
    "is_quadratic_residue",
    "is_prime",
    "is_prime_power",
    "is_perfect_square",
    "is_primitive_root",
    "repunit",
    "condition1_verify",
    "condition1_search",
]


class NotInvertible(ValueError):
    """Element has no inverse at this modulus."""


class NotCoprime(ValueError):
    """Arguments share a common factor where coprimality is required."""


class Condition1Error(ValueError):
    """A named witness invariant failed; .invariant holds the name."""

    def __init__(self, invariant, message):
        super().__init__(message)
        self.invariant = invariant


# Deterministic for n < 2**64 with these bases.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS_BIG = 64

_SMALL_PRIMES = []
_sieve_limit = 10000
_sieve = bytearray([1]) * (_sieve_limit + 1)
_sieve[0:2] = b"\x00\x00"
for _i in range(2, int(_sieve_limit**0.5) + 1):
    if _sieve[_i]:
        _sieve[_i * _i :: _i] = bytearray(len(_sieve[_i * _i :: _i]))
for _i in range(2, _sieve_limit + 1):
    if _sieve[_i]:
        _SMALL_PRIMES.append(_i)


def _miller_rabin_round(n, a, d, s):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n):
    """Primality test.

    Returns (prime, probabilistic). Deterministic Miller-Rabin bases cover
    n < 2**64; larger inputs get trial division then 64 rounds with bases
    drawn from a generator seeded by n, so results are reproducible.
    """
    if n < 2:
        return False, False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == p:
            return True, False
        if n % p == 0:
            return False, False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        for a in _MR_BASES_64:
            if not _miller_rabin_round(n, a, d, s):
                return False, False
        return True, False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return False, False
    rng = random.Random(n & ((1 << 64) - 1))
    for _ in range(_MR_ROUNDS_BIG):
        a = rng.randrange(2, n - 1)
        if not _miller_rabin_round(n, a, d, s):
            return False, False
    return True, True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError("factorization failed for %d" % n)


def factorize(n):
    """Prime factorization as a sorted dict {prime: exponent}. n >= 1."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        if p * p > n:
            break
    if n > 1:
        stack = [n]
        while stack:
            x = stack.pop()
            prime, _ = is_prime(x)
            if prime:
                out[x] = out.get(x, 0) + 1
                continue
            r = is_perfect_square(x)
            if r is not None:
                stack.extend([r, r])
                continue
            d = _pollard_rho(x)
            stack.extend([d, x // d])
    return dict(sorted(out.items()))


def euler_phi(m):
    """Euler totient via factorization."""
    if m < 1:
        raise ValueError("euler_phi needs m >= 1")
    out = m
    for p in factorize(m):
        out -= out // p
    return out


def mod_inverse(a, m):
    """Inverse of a mod m, in [0, m). Raises NotInvertible if gcd(a,m) != 1."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    g = math.gcd(a, m)
    if g != 1:
        raise NotInvertible("gcd(%d, %d) = %d" % (a, m, g))
    return pow(a, -1, m)


def half_pow_coeff(m):
    """2**(phi(m)-2) mod m for odd m >= 3; equals the inverse of 4 mod m."""
    if m < 3 or m % 2 == 0:
        raise ValueError("need odd m >= 3")
    phi = euler_phi(m)
    if phi >= 2:
        return pow(2, phi - 2, m)
    return mod_inverse(4, m)


def _is_qr_odd_prime_power(n, p, k):
    # q coprime to p: residue mod p^k iff residue mod p
    return pow(n % p, (p - 1) // 2, p) == 1


def _is_qr_power_of_two(n, k):
    if k == 1:
        return True
    if k == 2:
        return n % 4 == 1
    return n % 8 == 1


def is_quadratic_residue(n, m):
    """True iff x*x == n (mod m) has a solution, for gcd(n, m) = 1.

    Composite m is split into prime powers; a residue mod m is exactly one
    that is a residue mod every component (Chinese remainders recombine the
    square roots).
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(n, m) != 1:
        raise NotCoprime("gcd(%d, %d) != 1" % (n, m))
    for p, k in factorize(m).items():
        if p == 2:
            if not _is_qr_power_of_two(n, k):
                return False
        elif not _is_qr_odd_prime_power(n, p, k):
            return False
    return True


def is_perfect_square(x):
    """Integer square root when x is a perfect square, else None."""
    if x < 0:
        return None
    r = math.isqrt(x)
    return r if r * r == x else None


def _iroot(x, e):
    # floor of the e-th root, Newton on ints
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + e - 1) // e)
    while True:
        nr = ((e - 1) * r + x // r ** (e - 1)) // e
        if nr >= r:
            break
        r = nr
    while r**e > x:
        r -= 1
    return r


@dataclass(frozen=True)
class PrimePower:
    base: int
    exponent: int
    probabilistic: bool = False


def is_prime_power(x):
    """Decompose x = b**e with b prime, or None.

    The result carries a probabilistic flag when the base's primality was
    only established by randomized rounds (x >= 2**64 territory).
    """
    if x < 2:
        raise ValueError("need x >= 2")
    for p in _SMALL_PRIMES:
        if x % p == 0:
            # base forced: x must be a power of p
            e = 0
            y = x
            while y % p == 0:
                y //= p
                e += 1
            return PrimePower(p, e, False) if y == 1 else None
    # no factor below the sieve limit, so any base exceeds it and the
    # exponent is at most bit_length/13; it suffices to peel prime
    # exponents and recurse on the root
    max_e = x.bit_length() // 13 + 1
    for e in range(2, max_e + 1):
        if e <= _sieve_limit and not _sieve[e]:
            continue
        b = _iroot(x, e)
        if b**e == x:
            inner = is_prime_power(b)
            if inner is None:
                return None
            return PrimePower(inner.base, inner.exponent * e, inner.probabilistic)
    prime, prob = is_prime(x)
    return PrimePower(x, 1, prob) if prime else None


def is_primitive_root(a, p):
    """True iff a generates the multiplicative group mod prime p."""
    prime, _ = is_prime(p)
    if not prime:
        raise ValueError("%d is not prime" % p)
    if math.gcd(a, p) != 1:
        raise NotCoprime("gcd(%d, %d) != 1" % (a, p))
    if p == 2:
        return a % 2 == 1
    for q in factorize(p - 1):
        if pow(a, (p - 1) // q, p) == 1:
            return False
    return True


def repunit(q, d):
    """1 + q + ... + q**(d-1), exactly."""
    if q < 2 or d < 1:
        raise ValueError("need q >= 2, d >= 1")
    return (q**d - 1) // (q - 1)


@dataclass(frozen=True)
class Condition1Witness:
    p: int
    delta: int
    q: int
    d: int
    r: int
    r_base: int
    r_exponent: int
    probabilistic: bool


def condition1_verify(p, q, d):
    """Check one (p, q, d) row and return its witness.

    Required: q an odd prime power, q = 1 mod p, d = delta mod p with
    1 <= delta < p, and r = (q**d - 1)/(q - 1) a prime power with
    r = 1 mod 4. Each failure raises Condition1Error naming the invariant.
    """
    prime, _ = is_prime(p)
    if not prime or p == 2:
        raise ValueError("p must be an odd prime")
    if q < 3 or q % 2 == 0 or is_prime_power(q) is None:
        raise Condition1Error("q_odd_prime_power", "q=%d is not an odd prime power" % q)
    if q % p != 1:
        raise Condition1Error("q_congruent_1_mod_p", "q=%d != 1 mod %d" % (q, p))
    if d < 1:
        raise Condition1Error("d_positive", "d=%d" % d)
    delta = d % p
    if delta == 0:
        raise Condition1Error("delta_range", "d=%d is 0 mod %d" % (d, p))
    r = repunit(q, d)
    if r % 4 != 1:
        raise Condition1Error("r_congruent_1_mod_4", "r = %d mod 4" % (r % 4))
    pp = is_prime_power(r) if r >= 2 else None
    if pp is None:
        raise Condition1Error("r_prime_power", "r=%d is not a prime power" % r)
    return Condition1Witness(p, delta, q, d, r, pp.base, pp.exponent, pp.probabilistic)


def _odd_prime_powers_congruent(residue, modulus, limit):
    for q in range(3, limit + 1, 2):
        if q % modulus == residue and is_prime_power(q) is not None:
            yield q


def condition1_search(p, delta, q_limit, d_limit):
    """Smallest (q, d) witness for the class delta, scanning q then d.

    Deterministic: q ascends over odd prime powers = 1 mod p, and for each
    q the exponent d ascends over d = delta mod p. Returns None on
    exhaustion.
    """
    if not 1 <= delta < p:
        raise ValueError("need 1 <= delta < p")
    for q in _odd_prime_powers_congruent(1, p, q_limit):
        d = delta
        while d <= d_limit:
            if d >= 1:
                try:
                    return condition1_verify(p, q, d)
                except Condition1Error:
                    pass
            d += p
    return None
