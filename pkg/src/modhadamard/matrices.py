"""Exact sign-matrix and incidence-matrix types with modular Gram checks.

Rows are bit-packed into Python ints. For a SignMatrix, bit j set means
entry -1 in column j, so the all-plus-one row is the integer 0 and the
inner product of two rows is n - 2*popcount(xor). For an IncidenceMatrix,
bit j set means entry 1.

Modulus 0 means exact: a congruence mod 0 is an equality. gcd follows the
same convention (gcd(0, x) = x), which makes the Kronecker modulus law
degrade gracefully to real Hadamard matrices.
"""

from dataclasses import dataclass, field
from math import gcd

from .numtheory import euler_phi

__all__ = [
    "SignMatrix",
    "IncidenceMatrix",
    "DesignParams",
    "GramReport",
    "residue",
    "verify_mh",
    "verify_design",
    "normalize",
    "kronecker",
    "core_to_design",
    "direct_sum",
    "dsum_check",
    "design_to_mh",
    "det_squared_mod",
    "parse_matrix_text",
    "format_matrix_text",
]


def residue(x, m):
    """Canonical residue of x mod m; identity when m = 0 (exact)."""
    if m == 0:
        return x
    return x % m


def _congruent(x, y, m):
    return x == y if m == 0 else (x - y) % m == 0


@dataclass(frozen=True)
class SignMatrix:
    """Square matrix over {+1, -1}, rows bit-packed (set bit = -1)."""

    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order must be positive")
        if len(self.rows) != self.n:
            raise ValueError("row count != order")
        mask = (1 << self.n) - 1
        for r in self.rows:
            if not 0 <= r <= mask:
                raise ValueError("row bits out of range")

    @classmethod
    def from_entries(cls, entries):
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise ValueError("matrix not square")
            bits = 0
            for j, e in enumerate(row):
                if e == -1:
                    bits |= 1 << j
                elif e != 1:
                    raise ValueError("entries must be +1 or -1")
            rows.append(bits)
        return cls(n, tuple(rows))

    def entry(self, i, j):
        return -1 if (self.rows[i] >> j) & 1 else 1

    def to_entries(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def row_inner(self, i, j):
        return self.n - 2 * (self.rows[i] ^ self.rows[j]).bit_count()


def all_ones(n):
    """The matrix J."""
    return SignMatrix(n, (0,) * n)


def j_minus_2i(n):
    """J - 2I: +1 everywhere except -1 on the diagonal."""
    return SignMatrix(n, tuple(1 << i for i in range(n)))


@dataclass(frozen=True)
class IncidenceMatrix:
    """Square 0/1 matrix, rows bit-packed (set bit = 1)."""

    v: int
    rows: tuple

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("order must be positive")
        if len(self.rows) != self.v:
            raise ValueError("row count != order")
        mask = (1 << self.v) - 1
        for r in self.rows:
            if not 0 <= r <= mask:
                raise ValueError("row bits out of range")

    @classmethod
    def from_entries(cls, entries):
        v = len(entries)
        rows = []
        for row in entries:
            if len(row) != v:
                raise ValueError("matrix not square")
            bits = 0
            for j, e in enumerate(row):
                if e == 1:
                    bits |= 1 << j
                elif e != 0:
                    raise ValueError("entries must be 0 or 1")
            rows.append(bits)
        return cls(v, tuple(rows))

    def entry(self, i, j):
        return (self.rows[i] >> j) & 1

    def row_dot(self, i, j):
        return (self.rows[i] & self.rows[j]).bit_count()

    def row_sum(self, i):
        return self.rows[i].bit_count()

    def column_sum(self, j):
        bit = 1 << j
        return sum(1 for r in self.rows if r & bit)


@dataclass(frozen=True)
class DesignParams:
    """(v, k, lambda; m) parameter record.

    k and lam are kept as exact integers when known; congruence checks
    reduce them at the modulus. modulus 0 means the design is exact.
    """

    v: int
    k: int
    lam: int
    modulus: int

    def __post_init__(self):
        if self.v < 2:
            raise ValueError("v must be >= 2")
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError("modulus must be 0 (exact) or >= 2")

    @property
    def k_residue(self):
        return residue(self.k, self.modulus)

    @property
    def lam_residue(self):
        return residue(self.lam, self.modulus)

    def order_parity_class(self):
        return residue(self.v, 4)


@dataclass(frozen=True)
class GramReport:
    modulus: int
    diagonal_ok: bool
    offdiag_residues: dict = field(compare=False)
    verdict: bool


def verify_mh(H, m):
    """Gram check: does H H^T equal nI at the modulus?

    Returns a GramReport; .verdict is the answer. The off-diagonal residue
    multiset is kept for diagnostics.
    """
    if m < 0 or m == 1:
        raise ValueError("modulus must be 0 (exact) or >= 2")
    n = H.n
    diagonal_ok = True  # <r, r> = n identically for sign rows
    counts = {}
    ok = True
    rows = H.rows
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            p = n - 2 * (ri ^ rows[j]).bit_count()
            r = residue(p, m)
            counts[r] = counts.get(r, 0) + 1
            if r != 0:
                ok = False
    return GramReport(m, diagonal_ok, dict(sorted(counts.items())), diagonal_ok and ok)


def verify_design(D, params):
    """Check D D^T = (k-lam) I + lam J and DJ = JD = kJ at the modulus."""
    if D.v != params.v:
        raise ValueError("dimension mismatch: matrix %d vs params %d" % (D.v, params.v))
    m = params.modulus
    k = params.k
    lam = params.lam
    v = D.v
    for i in range(v):
        if not _congruent(D.row_sum(i), k, m):
            return False
    for j in range(v):
        if not _congruent(D.column_sum(j), k, m):
            return False
    rows = D.rows
    for i in range(v):
        ri = rows[i]
        if not _congruent(ri.bit_count(), k, m):
            return False
        for j in range(i + 1, v):
            if not _congruent((ri & rows[j]).bit_count(), lam, m):
                return False
    return True


def normalize(H):
    """Negate rows and columns until the first row and column are all +1."""
    mask = (1 << H.n) - 1
    colflip = H.rows[0]
    rows = [r ^ colflip for r in H.rows]
    rows = [r ^ mask if r & 1 else r for r in rows]
    return SignMatrix(H.n, tuple(rows))


def is_normalized(H):
    return H.rows[0] == 0 and all(not r & 1 for r in H.rows)


def kronecker(H1, m1, H2, m2):
    """Kronecker product with the modulus law gcd(m1 m2, n1 m2, n2 m1).

    Both inputs are re-verified at their stated moduli first; the output
    order is n1*n2.
    """
    if not verify_mh(H1, m1).verdict:
        raise ValueError("left factor fails verification at modulus %d" % m1)
    if not verify_mh(H2, m2).verdict:
        raise ValueError("right factor fails verification at modulus %d" % m2)
    n1, n2 = H1.n, H2.n
    m = gcd(m1 * m2, n1 * m2, n2 * m1)
    mask2 = (1 << n2) - 1
    out = []
    for i1 in range(n1):
        r1 = H1.rows[i1]
        for i2 in range(n2):
            r2 = H2.rows[i2]
            bits = 0
            for j1 in range(n1):
                block = r2 ^ mask2 if (r1 >> j1) & 1 else r2
                bits |= block << (j1 * n2)
            out.append(bits)
    return SignMatrix(n1 * n2, tuple(out)), m


def core_to_design(H, m):
    """Strip the first row and column of a normalized MH and rescale to 0/1.

    The result is an order n-1 incidence matrix with parameters
    (n-1, 2**(phi(m)-1) (n-2), 2**(phi(m)-2) (n-4)) at the modulus.
    Requires gcd(n, m) = 1 and n, m >= 3.
    """
    n = H.n
    if m < 3 or n < 3:
        raise ValueError("need n >= 3 and m >= 3")
    if gcd(n, m) != 1:
        raise ValueError("gcd(%d, %d) != 1" % (n, m))
    if not is_normalized(H):
        raise ValueError("matrix is not normalized")
    if not verify_mh(H, m).verdict:
        raise ValueError("matrix fails verification at modulus %d" % m)
    rows = []
    mask = (1 << (n - 1)) - 1
    for i in range(1, n):
        # entry +1 maps to 1, entry -1 maps to 0
        rows.append((H.rows[i] >> 1) ^ mask)
    phi = euler_phi(m)  # phi(m) >= 2 whenever m >= 3
    k = pow(2, phi - 1, m) * (n - 2) % m
    lam = pow(2, phi - 2, m) * (n - 4) % m
    D = IncidenceMatrix(n - 1, tuple(rows))
    return D, DesignParams(n - 1, k, lam, m)


def direct_sum(D1, p1, D2, p2):
    """Block matrix [[D1, J], [J^T, D2]] of order v1 + v2."""
    if p1.modulus != p2.modulus:
        raise ValueError("modulus mismatch: %d vs %d" % (p1.modulus, p2.modulus))
    v1, v2 = D1.v, D2.v
    ones2 = (1 << v2) - 1
    ones1 = (1 << v1) - 1
    rows = [r | (ones2 << v1) for r in D1.rows]
    rows += [ones1 | (r << v1) for r in D2.rows]
    return IncidenceMatrix(v1 + v2, tuple(rows))


def dsum_check(p1, p2):
    """The direct-sum compatibility congruences.

    v1+v2, 4(k1-lam1), 4(k2-lam2) and 2(k1+k2) must all agree at the
    common modulus for 2(D1 (+) D2) - J to be modular Hadamard.
    """
    if p1.modulus != p2.modulus:
        raise ValueError("modulus mismatch: %d vs %d" % (p1.modulus, p2.modulus))
    m = p1.modulus
    s = p1.v + p2.v
    vals = (4 * (p1.k - p1.lam), 4 * (p2.k - p2.lam), 2 * (p1.k + p2.k))
    return all(_congruent(s, x, m) for x in vals)


def design_to_mh(D):
    """Entrywise 2D - J: ones become +1, zeros become -1."""
    mask = (1 << D.v) - 1
    return SignMatrix(D.v, tuple(r ^ mask for r in D.rows))


def mh_modulus_of_exact_design(params):
    """The natural modulus of 2D - J for an exact (v, k, lam) design.

    The Gram matrix of 2D - J is 4(k-lam) I + (v - 4(k-lam)) J, so the
    sign matrix is modular Hadamard exactly at divisors of v - 4(k-lam);
    0 means it is a real Hadamard matrix.
    """
    return abs(params.v - 4 * (params.k - params.lam))


def det_squared_mod(H, m):
    """(det H)^2 at the modulus, det computed exactly. Orders above 20 are
    rejected; Bareiss elimination keeps every intermediate an integer."""
    n = H.n
    if n > 20:
        raise ValueError("order %d too large for exact determinant" % n)
    a = [[H.entry(i, j) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return residue(0, m)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = sign * a[n - 1][n - 1]
    return residue(det * det, m)


def parse_matrix_text(text):
    """Read the shared text format.

    Header 'n m' followed by n rows of +- characters gives a SignMatrix;
    header 'v k lambda m' followed by 01 rows gives an IncidenceMatrix
    with params. Blank lines and inner whitespace are ignored; ragged
    rows are an error.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty input")
    header = lines[0].split()
    if len(header) == 2:
        n, m = int(header[0]), int(header[1])
        body = _read_rows(lines[1:], n, "+-")
        rows = []
        for ln in body:
            bits = 0
            for j, ch in enumerate(ln):
                if ch == "-":
                    bits |= 1 << j
            rows.append(bits)
        return SignMatrix(n, tuple(rows)), m
    if len(header) == 4:
        v, k, lam, m = (int(x) for x in header)
        body = _read_rows(lines[1:], v, "01")
        rows = []
        for ln in body:
            bits = 0
            for j, ch in enumerate(ln):
                if ch == "1":
                    bits |= 1 << j
            rows.append(bits)
        return IncidenceMatrix(v, tuple(rows)), DesignParams(v, k, lam, m)
    raise ValueError("header must be 'n m' or 'v k lambda m'")


def _read_rows(lines, n, alphabet):
    if len(lines) != n:
        raise ValueError("expected %d rows, got %d" % (n, len(lines)))
    out = []
    for ln in lines:
        ln = "".join(ln.split())
        if len(ln) != n:
            raise ValueError("ragged row: %r" % ln)
        if any(ch not in alphabet for ch in ln):
            raise ValueError("bad character in row %r" % ln)
        out.append(ln)
    return out


def format_matrix_text(M, m=None, params=None):
    """Inverse of parse_matrix_text."""
    if isinstance(M, SignMatrix):
        if m is None:
            raise ValueError("sign matrix needs a modulus")
        head = "%d %d" % (M.n, m)
        body = [
            "".join("-" if (M.rows[i] >> j) & 1 else "+" for j in range(M.n))
            for i in range(M.n)
        ]
    else:
        p = params
        head = "%d %d %d %d" % (p.v, p.k, p.lam, p.modulus)
        body = [
            "".join("1" if (M.rows[i] >> j) & 1 else "0" for j in range(M.v))
            for i in range(M.v)
        ]
    return "\n".join([head] + body) + "\n"
