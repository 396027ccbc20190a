"""Exact clique search on small graphs given as adjacency bitsets.

``adj[v]`` is the bitset of neighbours of ``v``; vertices are ``0..len(adj)-1``.
"""
from .bits import iter_bits


class CliqueCapExceeded(RuntimeError):
    pass


def max_clique(adj, candidates=None, cap=None):
    """Maximum clique inside ``candidates`` by branch and bound with pivoting.

    Returns the clique as a sorted list.  Raises :class:`CliqueCapExceeded` once
    a clique larger than ``cap`` is found.
    """
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    best = []

    def expand(clique, cand, excluded):
        nonlocal best
        if not cand:
            if len(clique) > len(best):
                best = list(clique)
                if cap is not None and len(best) > cap:
                    raise CliqueCapExceeded(f"clique of size {len(best)} exceeds cap {cap}")
            return
        if len(clique) + cand.bit_count() <= len(best):
            return
        # pivot on the vertex that leaves the fewest branches
        pool = cand | excluded
        pivot = max(iter_bits(pool), key=lambda u: (cand & adj[u]).bit_count())
        for v in iter_bits(cand & ~adj[pivot]):
            clique.append(v)
            expand(clique, cand & adj[v], excluded & adj[v])
            clique.pop()
            cand &= ~(1 << v)
            excluded |= 1 << v
            if len(clique) + cand.bit_count() <= len(best):
                return

    expand([], candidates, 0)
    return sorted(best)


def maximal_cliques(adj, candidates=None, budget=None):
    """Yield every maximal clique (as a bitset) inside ``candidates``.

    ``budget`` caps the number of search nodes; exceeding it raises
    :class:`CliqueCapExceeded`.
    """
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    nodes = 0
    stack = [(0, candidates, 0)]
    while stack:
        clique, cand, excluded = stack.pop()
        nodes += 1
        if budget is not None and nodes > budget:
            raise CliqueCapExceeded(f"search exceeded {budget} nodes")
        if not cand:
            if not excluded:
                yield clique
            continue
        pool = cand | excluded
        pivot = max(iter_bits(pool), key=lambda u: (cand & adj[u]).bit_count())
        for v in iter_bits(cand & ~adj[pivot]):
            stack.append((clique | (1 << v), cand & adj[v], excluded & adj[v]))
            cand &= ~(1 << v)
            excluded |= 1 << v
