"""One-line permutations and the index bookkeeping used everywhere else.

A permutation on r points is a tuple p of length r with p[i] the image of
position i, zero based.  "sigma then tau" composes as functions tau o sigma,
so compose_perms(sigma, tau)[i] == tau[sigma[i]].

Grids of size r x s are always flattened with the second index slow:
entry (i, j) sits at flat position j*r + i.
"""

from __future__ import annotations

import itertools


def is_perm(p) -> bool:
    return sorted(p) == list(range(len(p)))


def identity_perm(r: int) -> tuple:
    return tuple(range(r))


def compose_perms(sigma, tau):
    """sigma then tau, i.e. tau o sigma as functions."""
    assert len(sigma) == len(tau)
    return tuple(tau[sigma[i]] for i in range(len(sigma)))


def invert_perm(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def apply_perm(p, items):
    """Place items[i] at position p[i]."""
    assert len(p) == len(items)
    out = [None] * len(items)
    for i, x in enumerate(items):
        out[p[i]] = x
    return tuple(out)


def all_perms(r: int):
    return tuple(itertools.permutations(range(r)))


def block_perm(p, sizes):
    """Permutation of sum(sizes) points moving block i (of sizes[i]) to block position p[i]."""
    assert len(p) == len(sizes)
    starts = [0] * len(sizes)
    acc = 0
    # start offset of each block in the target layout, by target position
    tgt_sizes = apply_perm(p, sizes)
    tgt_starts = []
    for s in tgt_sizes:
        tgt_starts.append(acc)
        acc += s
    out = []
    for i, s in enumerate(sizes):
        base = tgt_starts[p[i]]
        out.extend(base + k for k in range(s))
    return tuple(out)


def grid_transpose(r: int, s: int):
    """Permutation taking the j-slow layout of an r x s grid to the i-slow layout.

    Entry (i, j) moves from position j*r + i to position i*s + j.
    """
    out = [0] * (r * s)
    for j in range(s):
        for i in range(r):
            out[j * r + i] = i * s + j
    return tuple(out)


def delta1_shuffle(r: int, s: int, t: int):
    """The distributivity shuffle in Sigma_{s*(r+t)}.

    Source layout: the j-slow r x s grid followed by the j-slow t x s grid.
    Target layout: the j-slow (r+t) x s grid whose column j lists the r block
    then the t block.
    """
    out = [0] * (s * (r + t))
    for j in range(s):
        for i in range(r):
            out[j * r + i] = j * (r + t) + i
        for k in range(t):
            out[s * r + j * t + k] = j * (r + t) + r + k
    return tuple(out)


def lex_pair_to_index(a: int, b: int, n: int) -> int:
    """(a, b) in [m] x [n] to [m*n], one based: (a-1)*n + b."""
    assert 1 <= b <= n and a >= 1
    return (a - 1) * n + b


def lex_index_to_pair(e: int, n: int):
    """Inverse of lex_pair_to_index, one based."""
    assert e >= 1 and n >= 1
    a = (e - 1) // n + 1
    b = (e - 1) % n + 1
    return a, b
