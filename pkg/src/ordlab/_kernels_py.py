"""Pure-Python reference implementations of the hot kernels."""


def first_violation(dom_rank, cod_rank):
    """First index pair ``(i, j)``, ``i < j``, whose order is not preserved.

    ``dom_rank`` and ``cod_rank`` give the rank of each sampled point and of
    its image in the respective orders.  Returns None when order-preserving.
    """
    n = len(dom_rank)
    for i in range(n):
        di, ci = dom_rank[i], cod_rank[i]
        for j in range(i + 1, n):
            dj, cj = dom_rank[j], cod_rank[j]
            if (di < dj) != (ci < cj) or ci == cj:
                return (i, j)
    return None


def monotone_assign(allowed):
    """Strictly increasing choice of columns, one per row, within ``allowed``.

    Returns the lexicographically least assignment as a list of column
    indices, or None.  Taking the leftmost admissible column in each row is
    optimal: by induction every row's greedy column is the least column any
    assignment can use there, so a greedy failure means none exists.
    """
    choice = []
    col = -1
    for row in allowed:
        col += 1
        m = len(row)
        while col < m and not row[col]:
            col += 1
        if col >= m:
            return None
        choice.append(col)
    return choice
