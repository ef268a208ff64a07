"""Independent brute-force oracles the tests check the package against.

Everything here is deliberately naive (triple loops, permutation
expansions, subset sums) and shares no code path with the package.
"""

from __future__ import annotations

import itertools

import numpy as np

from polaraut import BitMatrix, MonomialSet, generator_matrix
from polaraut.gf2 import BitVec
from polaraut.monomial import CodeSpec


def naive_mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            s = 0
            for k in range(inner):
                s ^= a[i][k] & b[k][j]
            out[i][j] = s
    return out


def leibniz_det(rows: list[list[int]]) -> int:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = 1
        for i in range(n):
            term &= rows[i][perm[i]]
        total ^= term
    return total


def span_rank(masks: list[int]) -> int:
    """log2 of the number of distinct xor-combinations of the rows."""
    span = {0}
    for m in masks:
        span |= {s ^ m for s in span}
    return len(span).bit_length() - 1


def kron_power(n: int) -> np.ndarray:
    h = np.array([[1]], dtype=np.uint8)
    f = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    for _ in range(n):
        h = np.kron(h, f) % 2
    return h


def mobius_direct(truth: list[int]) -> list[int]:
    """ANF coefficients by direct subset sums over points."""
    size = len(truth)
    out = []
    for m in range(size):
        c = 0
        for x in range(size):
            if x & ~m == 0:
                c ^= truth[x]
        out.append(c)
    return out


def divisor_leq(g: int, f: int) -> bool:
    """The two-part order definition taken literally: same-degree rule by
    sorted indices, otherwise existence of a dominating equal-degree
    divisor (all divisors tried)."""

    def same_degree(a: int, b: int) -> bool:
        ia = [k for k in range(a.bit_length()) if (a >> k) & 1]
        ib = [k for k in range(b.bit_length()) if (b >> k) & 1]
        return all(x <= y for x, y in zip(ia, ib))

    if g.bit_count() == f.bit_count():
        return same_degree(g, f)
    if g.bit_count() > f.bit_count():
        return False
    subs = [f]
    k = f
    while True:  # enumerate submasks of f
        k = (k - 1) & f
        subs.append(k)
        if k == 0:
            break
    return any(
        s.bit_count() == g.bit_count() and same_degree(g, s) for s in subs
    )


def bec_z_oracle(n: int, eps: float) -> list[float]:
    """Hand recursion on explicit bit strings, most significant first."""
    out = []
    for i in range(1 << n):
        z = eps
        for pos in reversed(range(n)):
            if (i >> pos) & 1:
                z = z * z
            else:
                z = 2 * z - z * z
        out.append(z)
    return out


def pw_weight_oracle(i: int) -> float:
    beta = 2.0 ** 0.25
    w = 0.0
    k = 0
    while i:
        if i & 1:
            w += beta ** k
        i >>= 1
        k += 1
    return w


def codeword_level_automorphism(perm: list[int], ms: MonomialSet) -> bool:
    """Permute every generator row and test membership via ANF support."""
    from polaraut.monomial import anf_support

    spec = CodeSpec(ms.n, ms)
    if len(ms) == 0:
        return True
    gen = generator_matrix(spec)
    for r in range(gen.rows):
        row = [gen[r, j] for j in range(gen.cols)]
        permuted = BitVec.from_list([row[perm[i]] for i in range(len(perm))])
        if not anf_support(permuted).masks <= ms.masks:
            return False
    return True


def swap_preserves_set(ms: MonomialSet, i: int, j: int) -> bool:
    def swap(m: int) -> int:
        bi, bj = (m >> i) & 1, (m >> j) & 1
        if bi != bj:
            m ^= (1 << i) | (1 << j)
        return m

    return frozenset(swap(m) for m in ms.masks) == ms.masks


def brute_force_matrices(n: int, count: int, seed: int) -> list[BitMatrix]:
    import random

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = BitMatrix([rng.getrandbits(n) for _ in range(n)], n)
        if m.rank() == n:
            out.append(m)
    return out
