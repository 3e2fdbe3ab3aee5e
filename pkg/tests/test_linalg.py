import itertools
import random

import numpy as np
import pytest

from diagfreg.linalg import DimensionMismatch, FpMatrix, Inconsistent, solve_linear


def all_solutions(A, b, p):
    rows, cols = len(A), len(A[0])
    return [
        x
        for x in itertools.product(range(p), repeat=cols)
        if all(sum(A[i][j] * x[j] for j in range(cols)) % p == b[i] % p for i in range(rows))
    ]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_solve_agrees_with_enumeration(p):
    rng = random.Random(p)
    for _ in range(60):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
        b = [rng.randrange(p) for _ in range(rows)]
        sols = all_solutions(A, b, p)
        res = solve_linear(FpMatrix(p, A), b)
        assert res.consistent == bool(sols)
        if sols:
            assert tuple(int(v) for v in res.particular) in sols
            # solution set is particular + span(nullspace): same size
            assert len(sols) == p ** len(res.nullspace)
            M = FpMatrix(p, A)
            for v in res.nullspace:
                assert not np.any(M @ v)


def test_inconsistent_system_raises_on_require():
    res = solve_linear(FpMatrix(2, [[1, 1], [1, 1]]), [0, 1])
    assert not res.consistent
    with pytest.raises(Inconsistent):
        res.require()


def test_large_prime_no_overflow():
    p = 2**31 - 1
    A = FpMatrix(p, [[p - 1, p - 2], [p - 3, p - 5]])
    x = solve_linear(A, [1, 2]).require()
    assert list(A @ x) == [1, 2]


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear(FpMatrix(3, [[1, 2]]), [1, 2])


def test_nullspace_only():
    res = solve_linear(FpMatrix(3, [[1, 1, 1]]))
    assert res.rank == 1 and len(res.nullspace) == 2
