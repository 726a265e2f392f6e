"""Constructors for the polytope families with closed-form lengths."""

import itertools

from .polytope import LatticePolytope


def standard_simplex(d: int) -> LatticePolytope:
    """conv{0, e_1, .., e_d}."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    verts = [(0,) * d] + [tuple(int(i == k) for i in range(d))
                          for k in range(d)]
    return LatticePolytope(verts)


def coordinate_box(alphas) -> LatticePolytope:
    """[0, a_1] x .. x [0, a_d] for nonnegative integer side lengths."""
    alphas = [int(a) for a in alphas]
    if not alphas or any(a < 0 for a in alphas):
        raise ValueError("side lengths must be nonnegative integers")
    return LatticePolytope(itertools.product(*[(0, a) for a in alphas]))


def lawrence_prism(heights, ambient_dim=None) -> LatticePolytope:
    """The prism over heights 0 < h_1 <= .. <= h_n, optionally iterated into
    a pyramid up to `ambient_dim` by unit apexes."""
    h = [int(x) for x in heights]
    n = len(h)
    if n < 1 or any(x <= 0 for x in h):
        raise ValueError("heights must be positive")
    if any(h[i] > h[i + 1] for i in range(n - 1)):
        raise ValueError("heights must be nondecreasing")
    d = ambient_dim or n
    if d < n:
        raise ValueError("ambient dimension below the prism dimension")

    def unit(k):
        return tuple(int(i == k) for i in range(d))

    verts = [(0,) * d]
    verts += [unit(k) for k in range(n - 1)]
    verts += [tuple(int(i == k) + h[k] * int(i == n - 1) for i in range(d))
              for k in range(n - 1)]
    verts += [tuple(h[n - 1] * int(i == n - 1) for i in range(d))]
    verts += [unit(k) for k in range(n, d)]
    return LatticePolytope(verts)


def degree_one_pyramid(d: int) -> LatticePolytope:
    """Iterated pyramid over conv{(0,0), (2,0), (0,2)} in dimension d."""
    if d < 2:
        raise ValueError("dimension must be >= 2")

    def unit(k):
        return tuple(int(i == k) for i in range(d))

    verts = [(0,) * d,
             tuple(2 * x for x in unit(0)),
             tuple(2 * x for x in unit(1))]
    verts += [unit(k) for k in range(2, d)]
    return LatticePolytope(verts)


def tilted_triangle(k: int) -> LatticePolytope:
    """conv{(0,0), (k,1), (1,k)}: lattice diameter k-1, rational diameter
    k - 1/k, dilation period k."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return LatticePolytope([(0, 0), (k, 1), (1, k)])
