# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tree split-search kernels.

Bit-for-bit contract with _pykernels: stable sort per feature, thresholds
only between strictly increasing neighbors, integer squared class counts,
sequential left-sum accumulation, strictly-greater winner selection. See
_pykernels for the full statement.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

cdef double NEG_INF = float("-inf")


cdef void _stable_sort_idx(const double* v, long* idx, long* tmp, Py_ssize_t n) noexcept nogil:
    """Bottom-up mergesort of idx by v[idx]; ties keep incoming order."""
    cdef Py_ssize_t width = 1
    cdef Py_ssize_t lo, mid, hi, a, b, k, i
    cdef long* src = idx
    cdef long* dst = tmp
    cdef long* swap
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width
            if mid > n:
                mid = n
            hi = lo + 2 * width
            if hi > n:
                hi = n
            a = lo
            b = mid
            k = lo
            while a < mid and b < hi:
                if v[src[b]] < v[src[a]]:
                    dst[k] = src[b]
                    b += 1
                else:
                    dst[k] = src[a]
                    a += 1
                k += 1
            while a < mid:
                dst[k] = src[a]
                a += 1
                k += 1
            while b < hi:
                dst[k] = src[b]
                b += 1
                k += 1
            lo = hi
        swap = src
        src = dst
        dst = swap
        width *= 2
    if src != idx:
        for i in range(n):
            idx[i] = src[i]


def best_classification_split(double[:, ::1] values, long[::1] labels, int n_classes):
    """Best Gini split over candidate feature rows; see _pykernels."""
    cdef Py_ssize_t nf = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef long best_feat = -1
    cdef double best_thr = 0.0
    cdef double best_metric = NEG_INF

    cdef long* idx = <long*> malloc(n * sizeof(long))
    cdef long* tmp = <long*> malloc(n * sizeof(long))
    cdef long* cnt_l = <long*> malloc(n_classes * sizeof(long))
    cdef long* cnt_r = <long*> malloc(n_classes * sizeof(long))
    if idx == NULL or tmp == NULL or cnt_l == NULL or cnt_r == NULL:
        free(idx); free(tmp); free(cnt_l); free(cnt_r)
        raise MemoryError()

    cdef Py_ssize_t f, i, k
    cdef const double* row
    cdef long c
    cdef long long ssq_l, ssq_r
    cdef double metric, thr, v_i, v_next
    cdef long n_l, n_r

    try:
        with nogil:
            for f in range(nf):
                row = &values[f, 0]
                for i in range(n):
                    idx[i] = i
                _stable_sort_idx(row, idx, tmp, n)
                if row[idx[n - 1]] <= row[idx[0]]:
                    continue  # constant row, no valid threshold

                memset(cnt_l, 0, n_classes * sizeof(long))
                memset(cnt_r, 0, n_classes * sizeof(long))
                ssq_l = 0
                ssq_r = 0
                for i in range(n):
                    c = labels[i]
                    ssq_r += 2 * cnt_r[c] + 1
                    cnt_r[c] += 1

                for i in range(n - 1):
                    c = labels[idx[i]]
                    ssq_l += 2 * cnt_l[c] + 1
                    cnt_l[c] += 1
                    ssq_r -= 2 * cnt_r[c] - 1
                    cnt_r[c] -= 1
                    v_i = row[idx[i]]
                    v_next = row[idx[i + 1]]
                    if v_next <= v_i:
                        continue
                    n_l = i + 1
                    n_r = n - n_l
                    metric = (<double> ssq_l) / (<double> n_l) + (<double> ssq_r) / (<double> n_r)
                    if metric > best_metric:
                        best_metric = metric
                        best_feat = f
                        thr = (v_i + v_next) * 0.5
                        best_thr = v_i if thr >= v_next else thr
    finally:
        free(idx)
        free(tmp)
        free(cnt_l)
        free(cnt_r)
    return best_feat, best_thr, best_metric


def best_regression_split(double[:, ::1] values, double[::1] targets):
    """Best squared-error split over candidate feature rows; see _pykernels."""
    cdef Py_ssize_t nf = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef long best_feat = -1
    cdef double best_thr = 0.0
    cdef double best_metric = NEG_INF

    cdef long* idx = <long*> malloc(n * sizeof(long))
    cdef long* tmp = <long*> malloc(n * sizeof(long))
    if idx == NULL or tmp == NULL:
        free(idx); free(tmp)
        raise MemoryError()

    cdef Py_ssize_t f, i
    cdef const double* row
    cdef double total, sum_l, sum_r, metric, thr, v_i, v_next
    cdef double n_l, n_r

    try:
        with nogil:
            for f in range(nf):
                row = &values[f, 0]
                for i in range(n):
                    idx[i] = i
                _stable_sort_idx(row, idx, tmp, n)
                if row[idx[n - 1]] <= row[idx[0]]:
                    continue

                total = 0.0
                for i in range(n):
                    total += targets[idx[i]]

                sum_l = 0.0
                for i in range(n - 1):
                    sum_l += targets[idx[i]]
                    v_i = row[idx[i]]
                    v_next = row[idx[i + 1]]
                    if v_next <= v_i:
                        continue
                    n_l = <double> (i + 1)
                    n_r = <double> (n - i - 1)
                    sum_r = total - sum_l
                    metric = (sum_l * sum_l) / n_l + (sum_r * sum_r) / n_r
                    if metric > best_metric:
                        best_metric = metric
                        best_feat = f
                        thr = (v_i + v_next) * 0.5
                        best_thr = v_i if thr >= v_next else thr
    finally:
        free(idx)
        free(tmp)
    return best_feat, best_thr, best_metric
