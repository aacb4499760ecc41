import random

import pytest

from modhadamard import (
    SignMatrix,
    materialize,
    paley_hadamard,
    plan,
    verify_mh,
)

SEED = 20260822


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_sign_matrix(rng, n):
    mask = (1 << n) - 1
    return SignMatrix(n, tuple(rng.randint(0, mask) for _ in range(n)))


def flip_rows_cols(H, rng):
    """Negate a random subset of rows and columns; preserves the Gram residues."""
    n = H.n
    rowflip = rng.randint(0, (1 << n) - 1)
    colflip = rng.randint(0, (1 << n) - 1)
    rows = []
    for i in range(n):
        r = H.rows[i] ^ colflip
        if (rowflip >> i) & 1:
            r ^= (1 << n) - 1
        rows.append(r)
    return SignMatrix(n, tuple(rows))


def verified_pool():
    """A spread of (matrix, modulus) pairs with verify_mh true, for property tests."""
    pairs = [
        (3, 3), (5, 5), (7, 7), (7, 3), (9, 5), (11, 7), (13, 3), (6, 2),
        (10, 2), (12, 4), (16, 8), (20, 5), (22, 7), (24, 12), (36, 6),
    ]
    pool = []
    for n, m in pairs:
        H = materialize(plan(n, m))
        assert verify_mh(H, m).verdict
        pool.append((H, m))
    for q in (7, 11, 19):
        pool.append((paley_hadamard(q), 0))
    return pool
