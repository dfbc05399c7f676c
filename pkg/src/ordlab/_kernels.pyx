# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_kernels_py``; same contracts."""


def first_violation(dom_rank, cod_rank):
    cdef Py_ssize_t n = len(dom_rank)
    cdef Py_ssize_t i, j
    cdef long long di, dj, ci, cj
    cdef long long[:] d = _as_ll(dom_rank)
    cdef long long[:] c = _as_ll(cod_rank)
    for i in range(n):
        di = d[i]
        ci = c[i]
        for j in range(i + 1, n):
            dj = d[j]
            cj = c[j]
            if ((di < dj) != (ci < cj)) or ci == cj:
                return (i, j)
    return None


cdef long long[:] _as_ll(seq):
    import array
    return array.array("q", seq)


def monotone_assign(allowed):
    cdef Py_ssize_t col = -1
    cdef Py_ssize_t m
    cdef list row
    choice = []
    for r in allowed:
        row = r if type(r) is list else list(r)
        m = len(row)
        col += 1
        while col < m and not row[col]:
            col += 1
        if col >= m:
            return None
        choice.append(col)
    return choice
