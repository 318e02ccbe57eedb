"""Independent brute-force oracles used by the tests.

Everything here recomputes results by exhaustive enumeration or
textbook algorithms, deliberately sharing no code path with the
library implementations it checks.
"""

import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product


def subgroup_closure(group, elems):
    """All elements generated by elems, via breadth-first closure."""
    seen = {0}  # flat index 0 is the identity in any coordinate group
    frontier = list(seen)
    elems = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for g in elems:
                y = group.add(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def spans_bruteforce(group, elems):
    return len(subgroup_closure(group, elems)) == group.order


def minus_orbit(group, entries):
    """Exhaustive orbit of a tuple under per-entry negation and
    permutation, with flip-parity signs: {(sorted tuple, sign), ...}."""
    n = len(entries)
    out = set()
    for flips in product((0, 1), repeat=n):
        sign = (-1) ** sum(flips)
        t = tuple(group.neg(e) if f else e for e, f in zip(entries, flips))
        for perm in permutations(t):
            out.add((tuple(sorted(perm)), sign))
    return out


def minus_canonical_bruteforce(group, entries):
    """(representative, coefficient) by exhaustive orbit enumeration."""
    orbit = minus_orbit(group, entries)
    rep = min(t for t, _ in orbit)
    signs = {s for t, s in orbit if t == rep}
    if len(signs) == 2:
        return rep, 0
    return rep, signs.pop()


def count_spanning_multisets(N, n):
    """Size-n multisets over Z/N whose entries have gcd 1 with N."""
    count = 0
    for ent in combinations_with_replacement(range(N), n):
        g = N
        for e in ent:
            g = math.gcd(g, e)
        if g == 1:
            count += 1
    return count


def minor_gcd_divisors(A):
    """Elementary divisors via gcds of k x k minors (tiny matrices only)."""
    m, n = len(A), len(A[0])
    divisors = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                sub = [[A[i][j] for j in cols] for i in rows]
                g = math.gcd(g, _det(sub))
        if g == 0:
            break
        divisors.append(g // prev)
        prev = g
    return divisors


def _det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    total = 0
    for j in range(n):
        if A[0][j]:
            minor = [row[:j] + row[j + 1:] for row in A[1:]]
            total += (-1) ** j * A[0][j] * _det(minor)
    return total


def charpoly_interpolation(A, p):
    """Characteristic polynomial mod p by evaluation and Lagrange
    interpolation of det(xI - A) at n+1 points (requires p > n+1)."""
    n = len(A)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        M = [[(x * (i == j) - A[i][j]) % p for j in range(n)]
             for i in range(n)]
        ys.append(_det_mod(M, p))
    # Lagrange interpolation, highest-degree-first coefficient list
    coeffs = [0] * (n + 1)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = [1]
        den = 1
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = _polymul(num, [1, -xj], p)
            den = den * (xi - xj) % p
        scale = yi * pow(den, -1, p) % p
        for k, c in enumerate(num):
            coeffs[k + (n + 1 - len(num))] = \
                (coeffs[k + (n + 1 - len(num))] + scale * c) % p
    return coeffs


def _polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _det_mod(A, p):
    A = [row[:] for row in A]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p


def interior_point(generators, weights=None):
    """A strictly interior point of a simplicial cone."""
    n = len(generators)
    weights = weights or [Fraction(i + 1, n + 1) for i in range(n)]
    dim = len(generators[0])
    return tuple(sum((w * g[j] for w, g in zip(weights, generators)),
                     Fraction(0)) for j in range(dim))


def in_cone(point, generators):
    """Exact membership of a point in the cone spanned by the rows."""
    n = len(generators)
    A = [[Fraction(generators[i][j]) for i in range(n)]
         for j in range(len(point))]
    b = [Fraction(x) for x in point]
    # solve A c = b by elimination
    rows = [A[j] + [b[j]] for j in range(len(b))]
    ncols = n
    r = 0
    piv_cols = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return False  # inconsistent: point outside the span
    coeffs = {}
    for i, c in enumerate(piv_cols):
        coeffs[c] = rows[i][-1]
    return all(coeffs.get(c, Fraction(0)) >= 0 for c in range(n))
