"""Elimination kernels and spans, checked against tiny hand examples and a
brute-force span oracle."""

from itertools import product

from znalg.linal import (
    eliminate_gf2,
    eliminate_modp,
    is_prime,
    rank_gf2,
    rank_modp,
    solve_in_rowspan_gf2,
    solve_in_rowspan_modp,
)


def test_gf2_rank_hand_examples():
    assert rank_gf2([0b01, 0b10]) == 2
    assert rank_gf2([0b01, 0b01]) == 1
    assert rank_gf2([0b11, 0b01, 0b10]) == 2
    assert rank_gf2([0, 0]) == 0


def test_gf2_kernel_combinations():
    rows = [0b11, 0b01, 0b10]
    rank, kernel, _ = eliminate_gf2(rows)
    assert rank == 2 and len(kernel) == 1
    combo = kernel[0]
    # the combination XORs the original rows to zero
    acc = 0
    for i in range(len(rows)):
        if (combo >> i) & 1:
            acc ^= rows[i]
    assert acc == 0 and combo


def test_gf2_solve_in_rowspan():
    rows = [0b011, 0b101]
    combo = solve_in_rowspan_gf2(rows, 0b110)
    assert combo == 0b11  # sum of both rows
    assert solve_in_rowspan_gf2(rows, 0b001) is None


def test_modp_rank_hand_examples():
    assert rank_modp([[1, 2], [2, 4]], 5) == 1
    assert rank_modp([[1, 2], [2, 4]], 7) == 1
    assert rank_modp([[1, 0], [0, 3]], 5) == 2
    assert rank_modp([[0, 0]], 3) == 0


def test_modp_kernel_reassembles():
    p = 3
    rows = [[1, 2, 0], [2, 1, 0], [0, 0, 1], [1, 1, 1]]
    rank, kernel, _ = eliminate_modp(rows, p)
    assert rank + len(kernel) == len(rows)
    for combo in kernel:
        acc = [0, 0, 0]
        for c, row in zip(combo, rows):
            for k, v in enumerate(row):
                acc[k] = (acc[k] + c * v) % p
        assert acc == [0, 0, 0]


def test_modp_solve_against_brute_force():
    p = 3
    rows = [[1, 2, 0], [0, 1, 1]]
    span = set()
    for c1, c2 in product(range(p), repeat=2):
        span.add(tuple((c1 * a + c2 * b) % p for a, b in zip(*rows)))
    for target in product(range(p), repeat=3):
        combo = solve_in_rowspan_modp(rows, list(target), p)
        if target in span:
            assert combo is not None
            acc = [0, 0, 0]
            for c, row in zip(combo, rows):
                for k, v in enumerate(row):
                    acc[k] = (acc[k] + c * v) % p
            assert tuple(acc) == target
        else:
            assert combo is None


def test_is_prime():
    assert [n for n in range(2, 20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert not is_prime(1)
