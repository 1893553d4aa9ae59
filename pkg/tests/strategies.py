from hypothesis import strategies as st

from quartic_lattice.lattice import GramLattice


def int_matrices(rows=st.integers(1, 4), cols=st.integers(1, 4), entries=st.integers(-6, 6)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(entries, min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


def square_matrices(n=st.integers(1, 4), entries=st.integers(-6, 6)):
    return n.flatmap(lambda k: st.lists(st.lists(entries, min_size=k, max_size=k),
                                        min_size=k, max_size=k))


@st.composite
def symmetric_matrices(draw, n=st.integers(1, 5), entries=st.integers(-5, 5)):
    k = draw(n)
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            m[i][j] = m[j][i] = draw(entries)
    return m


@st.composite
def negative_definite_lattices(draw, max_rank=4, even=False):
    """``-(A A^T + I)`` (or ``-2(A A^T + I)`` when even) for a small integer A."""
    k = draw(st.integers(1, max_rank))
    A = draw(st.lists(st.lists(st.integers(-2, 2), min_size=k, max_size=k), min_size=k, max_size=k))
    g = [[-(sum(A[i][t] * A[j][t] for t in range(k)) + (i == j)) for j in range(k)] for i in range(k)]
    if even:
        g = [[2 * x for x in row] for row in g]
    return GramLattice(g)


@st.composite
def unimodular_matrices(draw, n):
    """Product of elementary integer matrices."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 6))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            m[i] = [-x for x in m[i]]
            continue
        c = draw(st.integers(-2, 2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return m
