"""Construction recipes for modular Hadamard matrices.

A Recipe is a small tree of seed and combinator nodes.  Every node knows
the order and natural modulus of the matrix (or design) it denotes, both
computed bottom-up without building anything, so recipes for
astronomically large orders stay cheap to handle.  materialize() builds
the actual matrix and re-verifies it.  plan() picks a recipe for a
requested (order, modulus) pair whenever one of the known construction
chains covers it.
"""

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import gcd

from .matrices import (
    DesignParams,
    IncidenceMatrix,
    SignMatrix,
    all_ones,
    core_to_design,
    design_to_mh,
    direct_sum,
    dsum_check,
    j_minus_2i,
    kronecker,
    mh_modulus_of_exact_design,
    normalize,
    verify_design,
    verify_mh,
)
from .numtheory import euler_phi, is_prime, is_prime_power, repunit

__all__ = [
    "CapExceeded",
    "Family10Params",
    "Family11Params",
    "MaterializeError",
    "Recipe",
    "catalog_design",
    "catalog_names",
    "check_constraints_1_to_4",
    "direct_sum_with_design",
    "double",
    "family10_params",
    "family11_params",
    "find_difference_set",
    "iterate",
    "kron",
    "materialize",
    "materialize_design",
    "paley_design",
    "paley_hadamard",
    "plan",
    "recipe_design_params",
    "recipe_from_json",
    "recipe_to_json",
    "seed_all_ones",
    "seed_catalog",
    "seed_j_minus_2i",
    "seed_paley",
    "seed_paley_design",
    "seed_param_design",
    "seed_two_circulant",
    "two_circulant",
]

DEFAULT_MATERIALIZE_CAP = 64 * 1024 * 1024


class CapExceeded(Exception):
    """Materializing would exceed the byte budget.  The recipe stays usable."""

    def __init__(self, order, cap):
        self.order = order
        self.cap = cap
        bits = order * order
        super().__init__(
            "order %s needs about %s packed bytes, cap is %d"
            % (order, (bits + 7) // 8, cap)
        )


class MaterializeError(Exception):
    """The recipe node is parameter-level only and has no stored matrix."""


# ---------------------------------------------------------------------------
# bundled data


@lru_cache(maxsize=None)
def _load_json(name):
    path = resources.files("modhadamard.data").joinpath(name)
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _group_elements(mods):
    return list(itertools.product(*[range(x) for x in mods]))


def _develop(mods, subset):
    """Incidence matrix of the translates of subset in prod Z_mods."""
    elements = _group_elements(mods)
    index = {e: i for i, e in enumerate(elements)}
    v = len(elements)
    chosen = set(subset)
    rows = []
    for e in elements:
        bits = 0
        for j, f in enumerate(elements):
            diff = tuple((a - b) % m for a, b, m in zip(f, e, mods))
            if index[diff] in chosen:
                bits |= 1 << j
        rows.append(bits)
    return IncidenceMatrix(v, tuple(rows))


def catalog_names():
    return sorted(_load_json("catalog.json"))


@lru_cache(maxsize=None)
def catalog_design(name):
    """Load one bundled design, verify it, return (IncidenceMatrix, DesignParams).

    Parameters come back with modulus 0: the incidence matrix satisfies its
    equations exactly, hence at every modulus.
    """
    table = _load_json("catalog.json")
    if name not in table:
        raise ValueError("unknown catalog design %r" % name)
    entry = table[name]
    v, k, lam = entry["v"], entry["k"], entry["lambda"]
    group = entry["group"]
    if group is None:
        rows = []
        for line in entry["elements"]:
            if len(line) != v:
                raise ValueError("catalog %s: bad row length" % name)
            bits = 0
            for j, ch in enumerate(line):
                if ch == "1":
                    bits |= 1 << j
                elif ch != "0":
                    raise ValueError("catalog %s: bad character %r" % (name, ch))
            rows.append(bits)
        if len(rows) != v:
            raise ValueError("catalog %s: bad row count" % name)
        mat = IncidenceMatrix(v, tuple(rows))
    else:
        mods = tuple(group)
        elements = entry["elements"]
        subset = []
        for e in elements:
            t = (e,) if isinstance(e, int) else tuple(e)
            if len(t) != len(mods):
                raise ValueError("catalog %s: element rank mismatch" % name)
            subset.append(t)
        all_elems = _group_elements(mods)
        index = {e: i for i, e in enumerate(all_elems)}
        mat = _develop(mods, [index[t] for t in subset])
    params = DesignParams(v, k, lam, 0)
    if not verify_design(mat, params):
        raise ValueError("catalog design %s fails verification" % name)
    return mat, params


@lru_cache(maxsize=None)
def two_circulant(name):
    """Sign matrix [[A, B], [B^T, -A^T]] from bundled circulant first rows.

    Returns (SignMatrix, modulus); the matrix is verified at that modulus
    on load and corrupt data is a hard error.
    """
    table = _load_json("two_circulant.json")
    if name not in table:
        raise ValueError("unknown two-circulant entry %r" % name)
    entry = table[name]
    b = entry["block_size"]
    m = entry["modulus"]
    first = []
    for line in entry["first_rows"]:
        if len(line) != b:
            raise ValueError("two-circulant %s: bad row length" % name)
        first.append([1 if ch == "+" else -1 for ch in line])
    a_row, b_row = first
    n = 2 * b
    entries = [[0] * n for _ in range(n)]
    for i in range(b):
        for j in range(b):
            entries[i][j] = a_row[(j - i) % b]
            entries[i][b + j] = b_row[(j - i) % b]
            entries[b + i][j] = b_row[(i - j) % b]
            entries[b + i][b + j] = -a_row[(i - j) % b]
    mat = SignMatrix.from_entries(entries)
    if not verify_mh(mat, m).verdict:
        raise ValueError("two-circulant %s fails verification" % name)
    return mat, m


# ---------------------------------------------------------------------------
# Paley constructions


@lru_cache(maxsize=None)
def paley_hadamard(q):
    """Hadamard matrix of order q + 1 from the quadratic character mod q.

    q must be a prime with q % 4 == 3.  The result is exact (modulus 0)
    and already normalized: first row and column all +1.
    """
    prime, _ = is_prime(q)
    if not prime or q % 4 != 3:
        raise ValueError("need a prime q with q %% 4 == 3, got %r" % (q,))
    squares = {x * x % q for x in range(1, q)}
    rows = [0]
    for i in range(q):
        bits = 0
        for j in range(q):
            if i == j or (i - j) % q not in squares:
                bits |= 1 << (j + 1)
        rows.append(bits)
    mat = SignMatrix(q + 1, tuple(rows))
    if not verify_mh(mat, 0).verdict:
        raise RuntimeError("paley matrix failed self-check at q=%d" % q)
    return mat


# GF(p^k) support for paley_design.  Elements are coefficient tuples,
# low degree first; addition is componentwise, multiplication reduces by
# a monic irreducible found by search.


def _poly_mul(a, b, p, modpoly):
    k = len(modpoly) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce: x^k = -(lower part of modpoly)
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * modpoly[j]) % p
    out = out[:k]
    out += [0] * (k - len(out))
    return tuple(out)


def _poly_pow_frobenius(base, p, modpoly, times):
    """base ** (p ** times) mod modpoly, by repeated p-th powers."""
    x = base
    for _ in range(times):
        y = (1,) + (0,) * (len(x) - 1)
        e = p
        sq = x
        while e:
            if e & 1:
                y = _poly_mul(y, sq, p, modpoly)
            sq = _poly_mul(sq, sq, p, modpoly)
            e >>= 1
        x = y
    return x


def _poly_gcd_is_unit(a, b, p):
    # a, b as lists, arbitrary degree; returns True iff gcd is constant
    a = list(a)
    b = list(b)

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            if c:
                shift = len(a) - len(b)
                for i, y in enumerate(b):
                    a[shift + i] = (a[shift + i] - c * y) % p
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) == 1


def _is_irreducible(modpoly, p):
    """Rabin test for the monic poly x^k + ... given as low-first coeffs."""
    k = len(modpoly) - 1
    x = (0, 1) + (0,) * (k - 2) if k > 1 else (0,)
    if k == 1:
        return True
    xpk = _poly_pow_frobenius(x, p, modpoly, k)
    if xpk != x:
        return False
    for t in {f for f in _prime_divisors(k)}:
        xq = _poly_pow_frobenius(x, p, modpoly, k // t)
        diff = [(a - b) % p for a, b in zip(xq, x)]
        full = list(modpoly)
        if not _poly_gcd_is_unit(full, diff, p):
            return False
    return True


def _prime_divisors(k):
    out = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


@lru_cache(maxsize=None)
def _field_modpoly(p, k):
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if cand[0] == 0:
            continue
        if _is_irreducible(cand, p):
            return cand
    raise RuntimeError("no irreducible polynomial found for GF(%d^%d)" % (p, k))


@lru_cache(maxsize=None)
def paley_design(q):
    """Quadratic-residue design on GF(q): (q, (q-1)/2, (q-3)/4), q = 4t + 3.

    q may be any prime power in the right residue class.  Returns
    (IncidenceMatrix, DesignParams) with modulus 0.
    """
    pp = is_prime_power(q)
    if pp is None or q % 4 != 3:
        raise ValueError("need a prime power q with q %% 4 == 3, got %r" % (q,))
    p, k = pp.base, pp.exponent
    if k == 1:
        elements = list(range(q))
        sub = lambda a, b: (a - b) % q
        squares = {x * x % q for x in range(1, q)}
    else:
        modpoly = _field_modpoly(p, k)
        elements = [tuple(t) for t in itertools.product(range(p), repeat=k)]
        sub = lambda a, b: tuple((x - y) % p for x, y in zip(a, b))
        squares = {_poly_mul(e, e, p, modpoly) for e in elements}
        squares.discard((0,) * k)
    rows = []
    for e in elements:
        bits = 0
        for j, f in enumerate(elements):
            if sub(f, e) in squares:
                bits |= 1 << j
        rows.append(bits)
    mat = IncidenceMatrix(q, tuple(rows))
    params = DesignParams(q, (q - 1) // 2, (q - 3) // 4, 0)
    if not verify_design(mat, params):
        raise RuntimeError("paley design failed self-check at q=%d" % q)
    return mat, params


# ---------------------------------------------------------------------------
# difference set search


def find_difference_set(group, k, lam):
    """Exhaustive search for a (v, k, lam) difference set.

    group lists cyclic factor orders, e.g. (7,) or (6, 6); v is their
    product and is capped at 40.  The identity is forced into the set,
    which loses no generality up to translation.  Returns
    (subset, IncidenceMatrix) for the first set found in lexicographic
    order, or None.
    """
    mods = tuple(int(x) for x in group)
    if not mods or any(x < 1 for x in mods):
        raise ValueError("group factors must be positive")
    v = 1
    for x in mods:
        v *= x
    if v > 40:
        raise ValueError("group order %d exceeds the search cap of 40" % v)
    if not 0 < k <= v:
        raise ValueError("need 0 < k <= v")
    if k * (k - 1) != lam * (v - 1):
        raise ValueError("k(k-1) != lam(v-1)")

    elements = _group_elements(mods)
    index = {e: i for i, e in enumerate(elements)}
    sub = [
        [index[tuple((a - b) % m for a, b, m in zip(x, y, mods))] for y in elements]
        for x in elements
    ]
    counts = [0] * v
    chosen = [0]

    def place(x, undo):
        for s in chosen:
            for d in (sub[x][s], sub[s][x]):
                if counts[d] == lam:
                    for e in undo:
                        counts[e] -= 1
                    return False
                counts[d] += 1
                undo.append(d)
        return True

    def extend(start):
        if len(chosen) == k:
            return True
        for x in range(start, v - (k - len(chosen)) + 1):
            undo = []
            if place(x, undo):
                chosen.append(x)
                if extend(x + 1):
                    return True
                chosen.pop()
                for e in undo:
                    counts[e] -= 1
        return False

    if not extend(1):
        return None
    # every pairwise difference landed without exceeding lam and their
    # total is lam (v - 1), so each difference count is exactly lam
    mat = _develop(mods, chosen)
    if not verify_design(mat, DesignParams(v, k, lam, 0)):
        raise RuntimeError("difference set development failed verification")
    if len(mods) == 1:
        subset = tuple(elements[i][0] for i in chosen)
    else:
        subset = tuple(elements[i] for i in chosen)
    return subset, mat


# ---------------------------------------------------------------------------
# parameter families


@dataclass(frozen=True)
class Family10Params:
    q: int
    d: int
    e: int
    r: int
    v: int
    k: int
    lam: int
    r_is_prime_power: bool


@dataclass(frozen=True)
class Family11Params:
    q: int
    e: int
    v: int
    k: int
    lam: int


def family10_params(q, d, e):
    """Menon-type parameter triple built from the repunit r = (q^d-1)/(q-1).

    Needs q a prime power and d >= 2 (d = 1 degenerates to r = 1).  The
    r_is_prime_power flag records whether the construction behind the
    parameters is actually available.
    """
    if q < 2 or is_prime_power(q) is None:
        raise ValueError("q must be a prime power, got %r" % (q,))
    if d < 2 or e < 1:
        raise ValueError("need d >= 2 and e >= 1")
    r = repunit(q, d)
    v = 1 + q * r * repunit(r, e)
    k = r**e
    lam_num = r ** (e - 1) * (r - 1)
    if lam_num % q:
        raise RuntimeError("q does not divide r^(e-1)(r-1)")
    return Family10Params(q, d, e, r, v, k, lam_num // q, is_prime_power(r) is not None)


def family11_params(q, e):
    """Parameter triple (1 + 2q(q^e-1)/(q-1), q^e, q^(e-1)(q-1)/2) for odd q."""
    if q < 3 or q % 2 == 0 or is_prime_power(q) is None:
        raise ValueError("q must be an odd prime power, got %r" % (q,))
    if e < 1:
        raise ValueError("need e >= 1")
    v = 1 + 2 * q * repunit(q, e)
    k = q**e
    return Family11Params(q, e, v, k, q ** (e - 1) * (q - 1) // 2)


def check_constraints_1_to_4(params, p, n, parity=(4, 3)):
    """Residue conditions a companion design must meet to extend an MH(n, p).

    parity is a (modulus, residue) pair for the v congruence; the three
    modular conditions ask v = 1, k = 1 and lam = 2^(phi(p)-2) (4 - n),
    all mod p.  Returns a dict of four booleans.
    """
    pm, pr = parity
    c = pow(2, euler_phi(p) - 2, p)
    return {
        "parity": params.v % pm == pr % pm,
        "v_mod_p": params.v % p == 1 % p,
        "k_mod_p": params.k % p == 1 % p,
        "lambda_mod_p": (params.lam - c * (4 - n)) % p == 0,
    }


# ---------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class Recipe:
    """One node of a construction tree.

    kind is "mh" for matrix-valued nodes and "design" for design-valued
    ones.  order is the matrix order (or v), modulus the natural modulus
    (0 = exact) computed from the children, both without materializing.
    """

    node: str
    args: tuple
    children: tuple
    order: int
    modulus: int
    kind: str


def seed_all_ones(n):
    if n < 1:
        raise ValueError("need n >= 1")
    return Recipe("AllOnes", (n,), (), n, 0 if n == 1 else n, "mh")


def seed_j_minus_2i(n):
    if n < 2:
        raise ValueError("need n >= 2")
    if n in (3, 5):
        raise ValueError("order %d gives modulus 1, which is useless" % n)
    return Recipe("JMinus2I", (n,), (), n, abs(n - 4), "mh")


def seed_paley(q):
    prime, _ = is_prime(q)
    if not prime or q % 4 != 3:
        raise ValueError("need a prime q with q %% 4 == 3, got %r" % (q,))
    return Recipe("PaleyHadamard", (q,), (), q + 1, 0, "mh")


def seed_paley_design(q):
    pp = is_prime_power(q)
    if pp is None or q % 4 != 3:
        raise ValueError("need a prime power q with q %% 4 == 3, got %r" % (q,))
    return Recipe("PaleyDesign", (q,), (), q, 0, "design")


def seed_catalog(name, kind="mh"):
    _, params = catalog_design(name)
    if kind == "design":
        return Recipe("CatalogDesign", (name,), (), params.v, 0, "design")
    if kind != "mh":
        raise ValueError("kind must be 'mh' or 'design'")
    mod = mh_modulus_of_exact_design(params)
    if mod == 1:
        raise ValueError("catalog design %s has no useful matrix reading" % name)
    return Recipe("CatalogDesign", (name,), (), params.v, mod, "mh")


def seed_two_circulant(name):
    mat, m = two_circulant(name)
    return Recipe("TwoCirculant", (name,), (), mat.n, m, "mh")


def seed_param_design(v, k, lam):
    """Design known only at parameter level; it cannot be materialized."""
    if v < 2 or not 0 <= k <= v or lam < 0:
        raise ValueError("bad design parameters")
    if k * (k - 1) != lam * (v - 1):
        raise ValueError("k(k-1) != lam(v-1)")
    return Recipe("ParamDesign", (v, k, lam), (), v, 0, "design")


def recipe_design_params(recipe):
    if recipe.kind != "design":
        raise ValueError("not a design recipe")
    if recipe.node == "CatalogDesign":
        return catalog_design(recipe.args[0])[1]
    if recipe.node == "PaleyDesign":
        q = recipe.args[0]
        return DesignParams(q, (q - 1) // 2, (q - 3) // 4, 0)
    if recipe.node == "ParamDesign":
        v, k, lam = recipe.args
        return DesignParams(v, k, lam, 0)
    raise ValueError("unknown design node %r" % recipe.node)


def _require_mh(recipe, who):
    if recipe.kind != "mh":
        raise ValueError("%s needs a matrix recipe, got %s" % (who, recipe.node))
    if recipe.modulus == 1:
        raise ValueError("%s cannot use a modulus-1 child" % who)


def kron(r1, r2):
    """Kronecker product; modulus follows gcd(m1 m2, n1 m2, n2 m1)."""
    _require_mh(r1, "kron")
    _require_mh(r2, "kron")
    m = gcd(r1.modulus * r2.modulus, r1.order * r2.modulus, r2.order * r1.modulus)
    return Recipe("Kron", (), (r1, r2), r1.order * r2.order, m, "mh")


def double(recipe):
    """Kronecker with the exact order-2 matrix; doubles order and modulus."""
    _require_mh(recipe, "double")
    return Recipe("Double", (), (recipe,), 2 * recipe.order, 2 * recipe.modulus, "mh")


def _companion_ok(base_order, m, dp):
    c = pow(2, euler_phi(m) - 2, m)
    return (
        (dp.v - 1) % m == 0
        and (dp.k - 1) % m == 0
        and (dp.lam - c * (4 - base_order)) % m == 0
    )


def _check_extension(base, design, m, who):
    _require_mh(base, who)
    if design.kind != "design":
        raise ValueError("%s needs a design recipe as companion" % who)
    if m < 3 or m % 2 == 0:
        raise ValueError("%s works at odd moduli >= 3 only" % who)
    if base.modulus != 0 and base.modulus % m:
        raise ValueError("base modulus %d is not divisible by %d" % (base.modulus, m))
    if base.order < 3:
        raise ValueError("base order %d is too small to take a core" % base.order)
    if gcd(base.order, m) != 1:
        raise ValueError("base order shares a factor with the modulus")
    dp = recipe_design_params(design)
    if not _companion_ok(base.order, m, dp):
        raise ValueError("companion design fails the residue conditions")
    return dp


def direct_sum_with_design(base, design, modulus):
    """Extend base by a companion design: order grows by v - 1."""
    if isinstance(design, str):
        design = seed_catalog(design, kind="design")
    dp = _check_extension(base, design, modulus, "direct_sum_with_design")
    return Recipe(
        "DirectSumWithDesign",
        (),
        (base, design),
        base.order + dp.v - 1,
        modulus,
        "mh",
    )


def iterate(base, design, l, modulus=None):
    """Apply the direct-sum extension l times; l = 0 returns base unchanged."""
    if isinstance(design, str):
        design = seed_catalog(design, kind="design")
    if not isinstance(l, int) or l < 0:
        raise ValueError("need an integer l >= 0")
    if l == 0:
        return base
    m = base.modulus if modulus is None else modulus
    dp = _check_extension(base, design, m, "iterate")
    # v = 1 mod m keeps the base order residue fixed, so one residue
    # check covers every round
    return Recipe("Iterate", (l,), (base, design), base.order + l * (dp.v - 1), m, "mh")


# ---------------------------------------------------------------------------
# serialization


def recipe_to_json(recipe):
    # integers past exact double range go out as decimal strings
    args = [
        str(a) if isinstance(a, int) and not -(2**53) < a < 2**53 else a
        for a in recipe.args
    ]
    return {
        "node": recipe.node,
        "args": args,
        "order": str(recipe.order),
        "modulus": recipe.modulus,
        "children": [recipe_to_json(c) for c in recipe.children],
    }


def recipe_from_json(obj, kind="mh"):
    node = obj["node"]
    args = obj.get("args", [])
    ch = obj.get("children", [])
    if node == "AllOnes":
        r = seed_all_ones(int(args[0]))
    elif node == "JMinus2I":
        r = seed_j_minus_2i(int(args[0]))
    elif node == "PaleyHadamard":
        r = seed_paley(int(args[0]))
    elif node == "PaleyDesign":
        r = seed_paley_design(int(args[0]))
    elif node == "CatalogDesign":
        r = seed_catalog(str(args[0]), kind=kind)
    elif node == "TwoCirculant":
        r = seed_two_circulant(str(args[0]))
    elif node == "ParamDesign":
        r = seed_param_design(int(args[0]), int(args[1]), int(args[2]))
    elif node == "Kron":
        r = kron(recipe_from_json(ch[0]), recipe_from_json(ch[1]))
    elif node == "Double":
        r = double(recipe_from_json(ch[0]))
    elif node == "DirectSumWithDesign":
        r = direct_sum_with_design(
            recipe_from_json(ch[0]),
            recipe_from_json(ch[1], kind="design"),
            int(obj["modulus"]),
        )
    elif node == "Iterate":
        r = iterate(
            recipe_from_json(ch[0]),
            recipe_from_json(ch[1], kind="design"),
            int(args[0]),
            modulus=int(obj["modulus"]),
        )
    else:
        raise ValueError("unknown recipe node %r" % node)
    if r.order != int(obj["order"]) or r.modulus != int(obj["modulus"]):
        raise ValueError("stored order/modulus disagree with the reconstruction")
    return r


# ---------------------------------------------------------------------------
# materialization


def materialize(recipe, size_cap=None):
    """Build the sign matrix for an mh recipe and re-verify it.

    Raises CapExceeded when the packed matrix would not fit in size_cap
    bytes (default 64 MiB), and MaterializeError when the tree contains a
    parameter-level design.
    """
    if recipe.kind != "mh":
        raise ValueError("not a matrix recipe; use materialize_design")
    cap = DEFAULT_MATERIALIZE_CAP if size_cap is None else int(size_cap)
    if (recipe.order * recipe.order + 7) // 8 > cap:
        raise CapExceeded(recipe.order, cap)
    mat = _build(recipe)
    if mat.n != recipe.order:
        raise RuntimeError("materialized order %d, expected %d" % (mat.n, recipe.order))
    if recipe.modulus != 1 and not verify_mh(mat, recipe.modulus).verdict:
        raise RuntimeError(
            "materialized matrix fails verification at modulus %d" % recipe.modulus
        )
    return mat


def materialize_design(recipe):
    """Incidence matrix and exact parameters for a design recipe."""
    if recipe.kind != "design":
        raise ValueError("not a design recipe")
    if recipe.node == "CatalogDesign":
        return catalog_design(recipe.args[0])
    if recipe.node == "PaleyDesign":
        return paley_design(recipe.args[0])
    if recipe.node == "ParamDesign":
        raise MaterializeError(
            "design %s is known at parameter level only" % (recipe.args,)
        )
    raise ValueError("unknown design node %r" % recipe.node)


def _extension_round(mat, m, comp_mat, comp_params):
    base = normalize(mat)
    core, core_params = core_to_design(base, m)
    comp = DesignParams(comp_params.v, comp_params.k, comp_params.lam, m)
    if not dsum_check(core_params, comp):
        raise RuntimeError("direct-sum residue check failed while materializing")
    joined = direct_sum(core, core_params, comp_mat, comp)
    return design_to_mh(joined)


def _build(recipe):
    node = recipe.node
    if node == "AllOnes":
        return all_ones(recipe.args[0])
    if node == "JMinus2I":
        return j_minus_2i(recipe.args[0])
    if node == "PaleyHadamard":
        return paley_hadamard(recipe.args[0])
    if node == "TwoCirculant":
        return two_circulant(recipe.args[0])[0]
    if node == "CatalogDesign":
        return design_to_mh(catalog_design(recipe.args[0])[0])
    if node == "Kron":
        a, b = recipe.children
        mat, m = kronecker(_build(a), a.modulus, _build(b), b.modulus)
        if m != recipe.modulus:
            raise RuntimeError("kronecker modulus drifted from the recipe")
        return mat
    if node == "Double":
        (a,) = recipe.children
        h2 = SignMatrix(2, (0, 2))
        return kronecker(_build(a), a.modulus, h2, 0)[0]
    if node == "DirectSumWithDesign":
        base, design = recipe.children
        comp_mat, comp_params = materialize_design(design)
        return _extension_round(_build(base), recipe.modulus, comp_mat, comp_params)
    if node == "Iterate":
        base, design = recipe.children
        comp_mat, comp_params = materialize_design(design)
        mat = _build(base)
        for _ in range(recipe.args[0]):
            mat = _extension_round(mat, recipe.modulus, comp_mat, comp_params)
        return mat
    raise ValueError("unknown recipe node %r" % node)


# ---------------------------------------------------------------------------
# planning

_REACH_LIMIT = 10**8
_reach_memo = {}


def _exact_order_recipe(n):
    """A modulus-0 recipe of order n from the bundled seeds, if one is known.

    Known pool: order 4, Paley orders q + 1 for prime q = 4t + 3, the
    bundled order-36 design, and closure under doubling and Kronecker
    products.  Misses some orders (28, 52, ...) whose Hadamard matrices
    need other methods.
    """
    if n < 4 or n % 4 or n > _REACH_LIMIT:
        return None
    if n in _reach_memo:
        return _reach_memo[n]
    _reach_memo[n] = None
    r = None
    if n == 4:
        r = seed_j_minus_2i(4)
    elif is_prime(n - 1)[0]:
        r = seed_paley(n - 1)
    elif n == 36:
        r = seed_catalog("menon_36_15_6", kind="mh")
    if r is None and n % 8 == 0:
        half = _exact_order_recipe(n // 2)
        if half is not None:
            r = double(half)
    if r is None:
        d = 8
        while d * d <= n:
            if n % d == 0:
                a = _exact_order_recipe(d)
                b = _exact_order_recipe(n // d) if a is not None else None
                if b is not None:
                    r = kron(a, b)
                    break
            d += 4
    _reach_memo[n] = r
    return r


def _mh_base(n, m):
    # tiny orders below plan()'s domain still occur as chain bases
    if n == 1:
        return seed_all_ones(1)
    if n == 2:
        return double(seed_all_ones(1))
    return plan(n, m)


@lru_cache(maxsize=None)
def _family10_giant():
    return family10_params(29, 5, 6)


_FAMILY12_PARAMS = (52480, 5832, 648)


def plan(n, m):
    """A construction recipe for an MH(n, m), or None when no chain applies.

    The result's modulus is divisible by m (or is 0); it is not
    necessarily equal to m.  Raises on n < 3 and on modulus 1.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if m < 0 or m == 1:
        raise ValueError("modulus must be 0 (exact) or >= 2")

    def hits(x):
        return x == 0 if m == 0 else x % m == 0

    if hits(n):
        return seed_all_ones(n)
    if hits(n - 4) and n != 3 and n != 5:
        return seed_j_minus_2i(n)
    if n % 2 == 0 and hits(n - 8) and n // 2 not in (3, 5):
        return double(seed_j_minus_2i(n // 2))
    if n % 4 == 0:
        r = _exact_order_recipe(n)
        if r is not None:
            return r
        if hits(n - 16) and n // 4 not in (3, 5):
            return double(double(seed_j_minus_2i(n // 4)))
    if m == 5:
        return _plan_mod5(n)
    if m == 7:
        return _plan_mod7(n)
    return None


def _plan_mod5(n):
    comp21 = "comp_21_16_12"
    if n % 2:
        r20 = n % 20
        if r20 == 1:
            if n < 21:
                return None
            base = seed_catalog("pp_21_5_1", kind="mh")
            return iterate(base, comp21, (n - 21) // 20, modulus=5)
        if r20 == 11:
            if n < 31:
                return None
            b31 = iterate(
                double(double(seed_j_minus_2i(4))),
                "biplane_16_6_2",
                1,
                modulus=5,
            )
            return iterate(b31, comp21, (n - 31) // 20, modulus=5)
        # 3 and 7 mod 10 are quadratic nonresidues of 5
        return None
    if n % 10 == 2:
        if n < 22:
            return None
        base = direct_sum_with_design(seed_paley(11), "comp_11_6_3", 5)
        return iterate(base, "comp_11_6_3", (n - 22) // 10, modulus=5)
    if n % 20 == 6:
        if n < 26:
            return None
        base = seed_two_circulant("two_circ_26_5")
        return iterate(base, comp21, (n - 26) // 20, modulus=5)
    return None


def _plan_mod7(n):
    r14 = n % 14
    if r14 == 1:
        if n < 43:
            return None
        k = (n - 43) // 14
        base = double(seed_j_minus_2i(7 * k + 4))
        return direct_sum_with_design(base, "menon_36_15_6", 7)
    if r14 == 6:
        starts = {48: 0, 34: 1, 20: 2, 6: 3, 76: 4, 62: 5}
        l = starts[n % 84]
        if n < 48 + 70 * l:
            return None
        k = (n - 48 - 70 * l) // 84
        base = kron(seed_j_minus_2i(7 * k + 4), seed_paley(11))
        return iterate(base, "ds_71_15_3", l, modulus=7)
    if r14 == 2:
        if n % 28 == 2:
            if n < 86:
                return None
            half = plan(n // 2, 7)
            return None if half is None else double(half)
        return None
    if r14 == 9:
        gate = 52565 if n % 28 == 9 else 52495
        if n < gate:
            return None
        base = plan(n - 52479, 7)
        if base is None:
            return None
        return direct_sum_with_design(base, seed_param_design(*_FAMILY12_PARAMS), 7)
    if r14 == 10:
        if n < 683294:
            return None
        shifts = {0: (0, 0), 42: (1, 0), 70: (0, 1), 28: (1, 1), 56: (0, 2), 14: (1, 2)}
        a, b = shifts[(n - 24) % 84]
        f9 = family11_params(9, 3)
        f23 = family11_params(23, 3)
        t = (n - a * (f9.v - 1) - b * (f23.v - 1)) // 12
        sub = plan(t, 7)
        if sub is None:
            return None
        r = kron(sub, seed_paley(11))
        if a:
            r = iterate(r, seed_param_design(f9.v, f9.k, f9.lam), a, modulus=7)
        if b:
            r = iterate(r, seed_param_design(f23.v, f23.k, f23.lam), b, modulus=7)
        return r
    if r14 == 12:
        if n % 28 == 12:
            f = family10_params(2, 2, 6)
            l = (n // 4) % 5
            t = (n - l * (f.v - 1)) // 20
            if t < 2:
                return None
            sub = _mh_base(t, 7)
            if sub is None:
                return None
            base = kron(sub, seed_paley(19))
            if l == 0:
                return base
            return iterate(base, seed_param_design(f.v, f.k, f.lam), l, modulus=7)
        giant = _family10_giant()
        n0 = n - (giant.v - 1)
        if n0 < 12:
            return None
        base = plan(n0, 7)
        if base is None:
            return None
        return direct_sum_with_design(
            base, seed_param_design(giant.v, giant.k, giant.lam), 7
        )
    # 0, 4, 7, 8, 11 mod 14 are handled by the generic rules above;
    # 3, 5, 13 mod 14 are quadratic nonresidues of 7
    return None
