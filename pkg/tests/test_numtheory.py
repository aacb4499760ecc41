import math
import random

import pytest

from modhadamard import (
    Condition1Error,
    NotInvertible,
    condition1_search,
    condition1_verify,
    euler_phi,
    factorize,
    half_pow_coeff,
    is_perfect_square,
    is_prime,
    is_prime_power,
    is_primitive_root,
    is_quadratic_residue,
    mod_inverse,
    repunit,
)

from conftest import SEED


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        flag, probabilistic = is_prime(n)
        assert flag == (n in primes)
        assert probabilistic is False


def test_is_prime_medium():
    assert is_prime(292561) == (True, False)
    assert is_prime(292561 * 292561)[0] is False
    # 2^61 - 1 is a Mersenne prime, still below the deterministic cutoff
    assert is_prime(2**61 - 1) == (True, False)


def test_is_prime_large_is_probabilistic():
    flag, probabilistic = is_prime(2**89 - 1)
    assert flag is True
    assert probabilistic is True


def test_factorize():
    assert factorize(1) == {}
    assert factorize(12) == {2: 2, 3: 1}
    assert factorize(292561) == {292561: 1}
    assert factorize(2 * 3 * 5 * 7 * 11 * 13) == {2: 1, 3: 1, 5: 1, 7: 1, 11: 1, 13: 1}


def test_euler_phi():
    assert euler_phi(1) == 1
    assert euler_phi(7) == 6
    assert euler_phi(9) == 6
    assert euler_phi(10) == 4
    assert euler_phi(36) == 12


def test_mod_inverse():
    assert mod_inverse(4, 7) == 2
    assert mod_inverse(3, 10) == 7
    with pytest.raises(NotInvertible):
        mod_inverse(6, 9)


def test_half_pow_coeff_equals_inverse_of_four():
    for m in range(3, 200, 2):
        assert half_pow_coeff(m) == mod_inverse(4, m)


def test_is_perfect_square_returns_root():
    assert is_perfect_square(0) == 0
    assert is_perfect_square(1) == 1
    assert is_perfect_square(169) == 13
    assert is_perfect_square(168) is None
    assert is_perfect_square(-4) is None
    assert is_perfect_square(88592) is None
    assert is_perfect_square(24400) is None


def test_is_perfect_square_random_roots():
    rng = random.Random(SEED)
    for _ in range(1000):
        x = rng.randint(1, 10**40)
        assert is_perfect_square(x * x) == x
        # consecutive squares differ by more than 1 out here
        assert is_perfect_square(x * x + 1) is None


def test_is_quadratic_residue_brute_force():
    """Agreement with direct enumeration of squares, all moduli up to 500."""
    for m in range(2, 501):
        squares = {(x * x) % m for x in range(m)}
        for n in range(1, m):
            if math.gcd(n, m) != 1:
                continue
            assert is_quadratic_residue(n, m) == (n in squares), (n, m)


def test_is_primitive_root():
    assert is_primitive_root(2, 11) is True
    assert is_primitive_root(2, 7) is False  # order 3
    assert is_primitive_root(3, 7) is True
    assert is_primitive_root(2, 3) is True


def test_is_prime_power():
    pp = is_prime_power(27)
    assert (pp.base, pp.exponent) == (3, 3)
    assert pp.probabilistic is False
    pp = is_prime_power(7)
    assert (pp.base, pp.exponent) == (7, 1)
    assert is_prime_power(12) is None
    assert is_prime_power(36) is None
    pp = is_prime_power(2**10)
    assert (pp.base, pp.exponent) == (2, 10)
    with pytest.raises(ValueError):
        is_prime_power(1)


def test_repunit():
    assert repunit(2, 5) == 31
    assert repunit(10, 4) == 1111
    assert repunit(23, 5) == 292561
    assert repunit(3, 1) == 1
    with pytest.raises(ValueError):
        repunit(1, 3)
    with pytest.raises(ValueError):
        repunit(5, 0)


def test_repunit_residues():
    # for q = 1 mod 4 the repunit is d mod 4; for q = 1 mod p it is d mod p
    rng = random.Random(SEED)
    for _ in range(200):
        d = rng.randint(1, 50)
        q = 4 * rng.randint(1, 300) + 1
        assert repunit(q, d) % 4 == d % 4
    for p in (3, 7, 11, 13):
        for _ in range(50):
            d = rng.randint(1, 40)
            q = p * rng.randint(1, 100) + 1
            assert repunit(q, d) % p == d % p


def test_repunit_binomial_expansion():
    """repunit(r, e) = sum of (r-1)^b * C(e, b+1) over b, for r = 1 mod 4."""
    rng = random.Random(SEED)
    for _ in range(120):
        r = 4 * rng.randint(1, 2500) + 1
        e = rng.randint(1, 12)
        total = sum((r - 1) ** b * math.comb(e, b + 1) for b in range(e))
        assert repunit(r, e) == total


def test_condition1_verify_known_row():
    w = condition1_verify(11, 23, 5)
    assert w.p == 11
    assert w.delta == 5
    assert w.r == 292561
    assert w.r_base == 292561
    assert w.r_exponent == 1
    assert w.r % 4 == 1
    assert w.probabilistic is False
    assert is_prime(w.r)[0]


def test_condition1_verify_rejects_bad_rows():
    with pytest.raises(Condition1Error):
        condition1_verify(11, 24, 5)  # q not a prime power
    with pytest.raises(Condition1Error):
        condition1_verify(11, 23, 4)  # repunit lands in the wrong class mod 4
    with pytest.raises(Condition1Error):
        condition1_verify(11, 13, 5)  # q not 1 mod p
    with pytest.raises(ValueError):
        condition1_verify(9, 23, 5)  # p must be an odd prime


def test_condition1_search_finds_smallest_witness():
    w = condition1_search(11, 5, 100, 20)
    assert (w.q, w.d) == (23, 5)
    assert w.r == 292561


def test_condition1_search_exhausts_to_none():
    assert condition1_search(3, 1, 5, 1) is None


def test_condition1_search_rejects_bad_delta():
    with pytest.raises(ValueError):
        condition1_search(11, 0, 100, 20)
    with pytest.raises(ValueError):
        condition1_search(11, 11, 100, 20)
