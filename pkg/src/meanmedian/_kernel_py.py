"""Pure-Python hot kernels.

Both kernels operate on plain integers over a shared denominator that only
ever doubles: concrete trajectory values live over ``q * 2**k`` and symbolic
chain coefficients over ``2**k``.  Working integrally keeps comparisons and
median updates cheap and defers gcd reduction to the caller's boundary.

The compiled twin in ``_kernel_cy.pyx`` implements the same two functions
with identical semantics; ``_backend`` picks one at import time.
"""
from __future__ import annotations

from bisect import bisect_left, insort


def traj_core(p: int, q: int, threshold: int):
    """Iterate the balance step for x = p/q until the new point equals the
    running median.

    Returns ``(terminated, n, points, medians, k)`` where ``points`` and
    ``medians`` are ``(numerator, exponent)`` pairs denoting
    ``numerator / (q * 2**exponent)`` and ``k`` is the final exponent.
    ``medians`` holds the running median after 3, 4, ... points; on
    termination its last entry is the limit value and equals point ``n``.
    """
    sorted_nums = [0, p, q]
    points = [(0, 0), (p, 0), (q, 0)]
    medians = [(p, 0)]
    s = p + q
    m = p
    k = 0
    for n in range(4, threshold + 1):
        x = n * m - s
        points.append((x, k))
        s += x
        if x == m:
            return True, n, points, medians, k
        insort(sorted_nums, x)
        if n & 1:
            m = sorted_nums[n >> 1]
        else:
            pair = sorted_nums[(n >> 1) - 1] + sorted_nums[n >> 1]
            if pair & 1:
                k += 1
                sorted_nums = [v << 1 for v in sorted_nums]
                s <<= 1
                m = pair
            else:
                m = pair >> 1
        medians.append((m, k))
    return False, threshold, points, medians, k


def replay_core(order):
    """Replay the balance step symbolically along a driving list.

    ``order`` is a permutation of 1..L giving trajectory indices in
    increasing value order.  Entry forms are ``(A, B)`` integer pairs
    denoting ``(A*x + B) / 2**k``.

    Returns ``(chain_a, chain_b, src, k, steps, med_forms)``: the chain
    coefficient lists over the final exponent ``k`` with their source
    indices, plus per-step records ``(A, B, exponent)`` for the inserted
    forms (x4..xL) and for the median in force when each was produced.
    """
    L = len(order)
    rank = [0] * (L + 1)
    for i, v in enumerate(order):
        rank[v] = i
    chain_a = [0, 1, 0]
    chain_b = [0, 0, 1]
    src = [1, 2, 3]
    ranks_sorted = sorted((rank[1], rank[2], rank[3]))
    sa = 1
    sb = 1
    k = 0
    steps = []
    med_forms = []
    for n in range(4, L + 1):
        size = n - 1
        if size & 1:
            ma = chain_a[size >> 1]
            mb = chain_b[size >> 1]
        else:
            ua = chain_a[(size >> 1) - 1] + chain_a[size >> 1]
            ub = chain_b[(size >> 1) - 1] + chain_b[size >> 1]
            if (ua | ub) & 1:
                k += 1
                chain_a = [v << 1 for v in chain_a]
                chain_b = [v << 1 for v in chain_b]
                sa <<= 1
                sb <<= 1
                ma, mb = ua, ub
            else:
                ma, mb = ua >> 1, ub >> 1
        med_forms.append((ma, mb, k))
        xa = n * ma - sa
        xb = n * mb - sb
        steps.append((xa, xb, k))
        sa += xa
        sb += xb
        pos = bisect_left(ranks_sorted, rank[n])
        ranks_sorted.insert(pos, rank[n])
        chain_a.insert(pos, xa)
        chain_b.insert(pos, xb)
        src.insert(pos, n)
    return chain_a, chain_b, src, k, steps, med_forms
