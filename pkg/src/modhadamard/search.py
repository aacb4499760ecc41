"""Exhaustive backtracking oracle for small modular Hadamard instances.

The search works over normalized matrices: the first row is all +1 and
every later row starts with +1 and has entry-sum divisible appropriately.
Row permutations preserve the property, so rows are explored in sorted
order; a completed exhaustive run over this space is a nonexistence proof
for all matrices of that order.

In the restricted regime (n odd, m odd, n < 3m, gcd(n, m) = 1) every
off-diagonal inner product must be exactly +m or -m, which pins the
number of -1 entries per row to (n-m)/2 or (n+m)/2 and shrinks the
candidate set to a few thousand rows.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from .matrices import SignMatrix, verify_mh

__all__ = [
    "LimitExceeded",
    "SearchProblem",
    "SearchOutcome",
    "candidate_rows",
    "run",
]

MAX_N_RESTRICTED = 24
MAX_N_GENERIC = 10


class LimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SearchProblem:
    n: int
    m: int
    mode: str = "generic"
    goal: str = "first"
    symmetry: bool = True

    def __post_init__(self):
        if self.mode not in ("generic", "restricted"):
            raise ValueError("mode must be generic or restricted")
        if self.goal not in ("first", "count", "exhaust"):
            raise ValueError("goal must be first, count or exhaust")
        if self.mode == "restricted":
            n, m = self.n, self.m
            if m % 2 == 0 or n % 2 == 0 or n >= 3 * m or gcd(n, m) != 1:
                raise ValueError(
                    "restricted mode needs odd n < 3m, odd m, gcd(n,m)=1"
                )


@dataclass
class SearchOutcome:
    found: object
    exhausted: bool
    nodes_visited: int
    candidate_row_count: int
    solutions: int = 0
    log: dict = field(default_factory=dict)


def candidate_rows(n, m, mode):
    """Bit-packed rows admissible below an all-ones first row.

    Bit j set means -1 in column j; bit 0 is always clear (leading +1).
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if mode == "restricted":
        SearchProblem(n, m, mode="restricted")  # validate the regime
        weights = {w for w in ((n - m) // 2, (n + m) // 2) if 0 <= w <= n - 1}
        return [
            r << 1
            for r in range((1 << (n - 1)))
            if r.bit_count() in weights
        ]
    if mode != "generic":
        raise ValueError("unknown mode %r" % mode)
    return [
        r << 1
        for r in range(1 << (n - 1))
        if (n - 2 * (r.bit_count())) % m == 0
    ]


def _candidate_digest(cands):
    h = hashlib.sha256()
    for c in cands:
        h.update(c.to_bytes(8, "little"))
    return h.hexdigest()


def _solve_subtree(start, cands, compat, need, allow_repeat, goal, counter):
    """DFS below first-level choice `start`. Returns (witness_rows, count)."""
    k = len(cands)
    all_after = [(1 << k) - 1 >> (i + 1) << (i + 1) for i in range(k)]
    best = None
    count = 0
    # stack entries: (chosen list, allowed mask, floor index)
    stack = [([start], compat[start], start)]
    while stack:
        chosen, allowed, floor = stack.pop()
        counter[0] += 1
        depth = len(chosen)
        if depth == need:
            count += 1
            if best is None:
                best = list(chosen)
                if goal == "first":
                    return best, count
            continue
        rest = allowed & all_after[floor] if not allow_repeat else allowed & (
            all_after[floor] | (1 << floor)
        )
        if rest.bit_count() < need - depth and not (
            allow_repeat and rest
        ):
            continue
        # push in reverse so the smallest candidate pops first
        picks = []
        x = rest
        while x:
            b = x & -x
            picks.append(b.bit_length() - 1)
            x ^= b
        for idx in reversed(picks):
            na = allowed & compat[idx]
            stack.append((chosen + [idx], na, idx))
    return best, count


def run(problem, threads=1, max_n=None, log_branches=False):
    """Execute the search. Deterministic lex-least witness with symmetry on.

    Exhaust and count goals traverse the entire space; first stops at the
    initial witness. Raises LimitExceeded when n is beyond the configured
    bound for the mode.
    """
    n, m = problem.n, problem.m
    cap = max_n if max_n is not None else (
        MAX_N_RESTRICTED if problem.mode == "restricted" else MAX_N_GENERIC
    )
    if n > cap:
        raise LimitExceeded("n=%d exceeds limit %d for %s mode" % (n, cap, problem.mode))
    cands = candidate_rows(n, m, problem.mode)
    k = len(cands)
    need = n - 1
    outcome_log = {"candidate_digest": _candidate_digest(cands)}
    if k == 0 or (k < 1 and need > 0):
        return SearchOutcome(None, True, 0, 0, 0, outcome_log)
    # a row may repeat exactly when it is compatible with itself, i.e.
    # <r, r> = n vanishes at the modulus
    allow_repeat = n % m == 0
    compat = []
    for i in range(k):
        ci = cands[i]
        bits = 0
        for j in range(k):
            p = n - 2 * ((ci ^ cands[j]).bit_count())
            if p % m == 0 and (i != j or allow_repeat):
                bits |= 1 << j
        compat.append(bits)
    counter = [0]
    best = None
    total = 0
    branch_records = []

    def one(start):
        c = [0]
        r = _solve_subtree(start, cands, compat, need, allow_repeat, problem.goal, c)
        return start, r[0], r[1], c[0]

    starts = list(range(k))
    if problem.goal == "first" or threads <= 1:
        results = map(one, starts)
        for start, rows, cnt, nodes in results:
            counter[0] += nodes
            total += cnt
            if rows is not None and best is None:
                best = rows
                if problem.goal == "first":
                    break
            if log_branches:
                branch_records.append({"start": start, "nodes": nodes, "solutions": cnt})
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for start, rows, cnt, nodes in pool.map(one, starts):
                counter[0] += nodes
                total += cnt
                if rows is not None and best is None:
                    best = rows
                if log_branches:
                    branch_records.append({"start": start, "nodes": nodes, "solutions": cnt})
    if log_branches:
        outcome_log["branches"] = branch_records
    found = None
    if best is not None:
        rows = (0,) + tuple(cands[i] for i in best)
        found = SignMatrix(n, rows)
        if not verify_mh(found, m).verdict:
            raise AssertionError("search produced an invalid witness")
    exhausted = problem.goal != "first" or found is None
    return SearchOutcome(found, exhausted, counter[0], k, total, outcome_log)
