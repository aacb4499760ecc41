import pytest

from modhadamard import (
    LimitExceeded,
    SearchProblem,
    candidate_rows,
    j_minus_2i,
    run,
    verify_mh,
)


def test_candidate_counts_restricted():
    # negatives per row are forced to (n-m)/2 or (n+m)/2 past the lead column
    assert len(candidate_rows(15, 7, "restricted")) == 1365
    assert len(candidate_rows(11, 5, "restricted")) == 165


def test_candidate_counts_generic():
    assert len(candidate_rows(4, 2, "generic")) == 8
    assert len(candidate_rows(6, 5, "generic")) == 10


def test_problem_validation():
    with pytest.raises(ValueError):
        SearchProblem(12, 7, "restricted")  # n even
    with pytest.raises(ValueError):
        SearchProblem(11, 4, "restricted")  # m even
    with pytest.raises(ValueError):
        SearchProblem(21, 7, "restricted")  # n >= 3m, gcd > 1
    with pytest.raises(ValueError):
        SearchProblem(5, 5, "other")
    with pytest.raises(ValueError):
        SearchProblem(5, 5, goal="everything")


def test_limits():
    with pytest.raises(LimitExceeded):
        run(SearchProblem(30, 5))
    with pytest.raises(LimitExceeded):
        run(SearchProblem(29, 11, "restricted"))
    # explicit override raises the bar
    out = run(SearchProblem(12, 5), max_n=12)
    assert out.found is not None


def test_exhaust_11_5():
    out = run(SearchProblem(11, 5, "restricted", "exhaust"))
    assert out.exhausted is True
    assert out.found is None
    assert out.solutions == 0
    assert out.candidate_row_count == 165


def test_exhaust_6_5_generic():
    out = run(SearchProblem(6, 5, "generic", "exhaust"))
    assert out.exhausted is True
    assert out.found is None


def test_first_4_2():
    out = run(SearchProblem(4, 2, "generic", "first"))
    assert out.found is not None
    assert verify_mh(out.found, 2).verdict
    assert out.exhausted is False


def test_first_11_7_restricted():
    out = run(SearchProblem(11, 7, "restricted", "first"))
    assert out.found is not None
    H = out.found
    assert verify_mh(H, 7).verdict
    # same Gram profile as J - 2I: every off-diagonal inner product is +-7
    for i in range(H.n):
        for j in range(i + 1, H.n):
            assert H.row_inner(i, j) in (7, -7)
    assert verify_mh(j_minus_2i(11), 7).verdict


def test_row_profile_of_witness():
    """Each witness row in the restricted regime carries one of two weights."""
    out = run(SearchProblem(11, 7, "restricted", "first"))
    H = out.found
    n, m = 11, 7
    for i in range(1, n):
        negs = bin(H.rows[i]).count("1")
        assert negs in ((n - m) // 2, (n + m) // 2)


def test_count_goal():
    out = run(SearchProblem(7, 3, "restricted", "count"))
    assert out.exhausted is True
    assert out.solutions >= 1
    out2 = run(SearchProblem(7, 3, "restricted", "count"))
    assert out2.solutions == out.solutions


def test_determinism_and_digest():
    a = run(SearchProblem(11, 5, "restricted", "exhaust"))
    b = run(SearchProblem(11, 5, "restricted", "exhaust"))
    assert a.log["candidate_digest"] == b.log["candidate_digest"]
    assert a.nodes_visited == b.nodes_visited
    assert a.exhausted == b.exhausted


def test_threads_do_not_change_the_answer():
    single = run(SearchProblem(11, 5, "restricted", "exhaust"), threads=1)
    multi = run(SearchProblem(11, 5, "restricted", "exhaust"), threads=4)
    assert single.exhausted == multi.exhausted is True
    assert single.found is None and multi.found is None

    sf = run(SearchProblem(8, 2, "generic", "first"), threads=1)
    mf = run(SearchProblem(8, 2, "generic", "first"), threads=4)
    assert sf.found is not None and mf.found is not None
    assert verify_mh(mf.found, 2).verdict


def test_symmetry_off_still_sound():
    on = run(SearchProblem(6, 5, "generic", "exhaust", symmetry=True))
    off = run(SearchProblem(6, 5, "generic", "exhaust", symmetry=False))
    assert on.exhausted and off.exhausted
    assert on.found is None and off.found is None
    assert off.nodes_visited >= on.nodes_visited
