# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernel_py``.

Arithmetic stays on Python big integers (values are exact rationals over a
power-of-two common denominator); Cython removes the interpreter overhead of
the stepping loops, the binary searches and the list bookkeeping.
"""


def traj_core(p, q, long threshold):
    """See ``_kernel_py.traj_core``; identical contract."""
    cdef long n
    cdef Py_ssize_t lo, hi, mid
    cdef long k = 0
    cdef list sorted_nums = [0, p, q]
    cdef list points = [(0, 0), (p, 0), (q, 0)]
    cdef list medians = [(p, 0)]
    s = p + q
    m = p
    for n in range(4, threshold + 1):
        x = n * m - s
        points.append((x, k))
        s = s + x
        if x == m:
            return True, n, points, medians, k
        lo = 0
        hi = len(sorted_nums)
        while lo < hi:
            mid = (lo + hi) >> 1
            if sorted_nums[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        sorted_nums.insert(lo, x)
        if n & 1:
            m = sorted_nums[n >> 1]
        else:
            pair = sorted_nums[(n >> 1) - 1] + sorted_nums[n >> 1]
            if pair & 1:
                k += 1
                sorted_nums = [v << 1 for v in sorted_nums]
                s = s << 1
                m = pair
            else:
                m = pair >> 1
        medians.append((m, k))
    return False, threshold, points, medians, k


def replay_core(order):
    """See ``_kernel_py.replay_core``; identical contract."""
    cdef Py_ssize_t L = len(order)
    cdef Py_ssize_t i, lo, hi, mid
    cdef long n, size
    cdef long k = 0
    cdef list rank = [0] * (L + 1)
    for i in range(L):
        rank[<Py_ssize_t>order[i]] = i
    cdef list chain_a = [0, 1, 0]
    cdef list chain_b = [0, 0, 1]
    cdef list src = [1, 2, 3]
    cdef list ranks_sorted = sorted((rank[1], rank[2], rank[3]))
    sa = 1
    sb = 1
    cdef list steps = []
    cdef list med_forms = []
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
                sa = sa << 1
                sb = sb << 1
                ma = ua
                mb = ub
            else:
                ma = ua >> 1
                mb = ub >> 1
        med_forms.append((ma, mb, k))
        xa = n * ma - sa
        xb = n * mb - sb
        steps.append((xa, xb, k))
        sa = sa + xa
        sb = sb + xb
        key = rank[<Py_ssize_t>n]
        lo = 0
        hi = len(ranks_sorted)
        while lo < hi:
            mid = (lo + hi) >> 1
            if <Py_ssize_t>ranks_sorted[mid] < <Py_ssize_t>key:
                lo = mid + 1
            else:
                hi = mid
        ranks_sorted.insert(lo, key)
        chain_a.insert(lo, xa)
        chain_b.insert(lo, xb)
        src.insert(lo, n)
    return chain_a, chain_b, src, k, steps, med_forms
