"""Independent brute-force oracles used to freeze and check derived values.

Nothing here imports the algorithms under test; only the plain data types
(group types, graphs) are shared.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, prod


# ---------------------------------------------------------------------------
# integer matrices

def det_exact(rows):
    """Determinant by fraction-free Gaussian elimination on Python ints."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinantal_divisors(rows):
    """gcd of all k x k minors for k = 1..min(m, n), minors memoized by bitmask."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    minors = {(0, 0): 1}
    divisors = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            rmask = sum(1 << i for i in rs)
            rest = rmask & ~(1 << rs[0])
            for cs in itertools.combinations(range(n), k):
                cmask = sum(1 << j for j in cs)
                # Laplace expansion along the first chosen row
                val = 0
                for pos, c in enumerate(cs):
                    entry = rows[rs[0]][c]
                    if entry:
                        sub = minors[(rest, cmask & ~(1 << c))]
                        val += (-1) ** pos * entry * sub
                minors[(rmask, cmask)] = val
                g = gcd(g, val)
        divisors.append(g)
    return divisors


def cokernel_bruteforce(rows, ncols=None):
    """(sorted nontrivial invariant factors, free rank) of Z^n / rowspace(rows)."""
    n = len(rows[0]) if rows else (ncols or 0)
    divs = determinantal_divisors(rows) if rows else []
    factors, prev, rank = [], 1, 0
    for dk in divs:
        if dk == 0:
            break
        factors.append(dk // prev)
        prev = dk
        rank += 1
    return sorted(f for f in factors if f != 1), n - rank


# ---------------------------------------------------------------------------
# finite abelian groups as tuples of cyclic orders

def elements(orders):
    return list(itertools.product(*[range(o) for o in orders]))


def add(orders, x, y):
    return tuple((a + b) % o for a, b, o in zip(x, y, orders))


def homs(src, dst):
    """All homomorphisms Z/src_1 + ... -> dst as images of the standard generators."""
    els = elements(dst)
    cand = []
    for o in src:
        cand.append([y for y in els if all((o * c) % m == 0 for c, m in zip(y, dst))])
    return list(itertools.product(*cand))


def hom_image(src, dst, images):
    out = set()
    for x in elements(src):
        v = tuple(sum(x[i] * images[i][t] for i in range(len(src))) % dst[t] for t in range(len(dst)))
        out.add(v)
    return out


def hom_count(src, dst):
    return len(homs(src, dst))


def sur_count(src, dst):
    total = prod(dst)
    return sum(1 for h in homs(src, dst) if len(hom_image(src, dst, h)) == total)


def aut_count(orders):
    """Injective generator assignments, built one generator at a time with pruning."""
    orders = tuple(orders)
    els = elements(orders)
    zero = tuple(0 for _ in orders)

    def order_of(x):
        k, y = 1, x
        while y != zero:
            y = add(orders, y, x)
            k += 1
        return k

    cand = [[y for y in els if o % order_of(y) == 0] for o in orders]

    def rec(i, image):
        # image: set of images of <e_1..e_i>, injective so far
        if i == len(orders):
            return 1
        total = 0
        for g in cand[i]:
            new = set(image)
            shifted = set(image)
            for _ in range(orders[i] - 1):
                shifted = {add(orders, x, g) for x in shifted}
                new |= shifted
            if len(new) == len(image) * orders[i]:
                total += rec(i + 1, new)
        return total

    return rec(0, {zero})


def subgroups(orders):
    """All subgroups, found by closing every subset of generators of size <= 2 + rank."""
    els = elements(orders)
    zero = tuple(0 for _ in orders)
    found = set()

    def close(gens):
        S = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = add(orders, x, g)
                    if y not in S:
                        S.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(S)

    for k in range(len(orders) + 1):
        for gens in itertools.combinations(els, k):
            found.add(close(gens))
    return found


# ---------------------------------------------------------------------------
# graphs

def spanning_tree_count(n, edges):
    """Spanning trees of an undirected multigraph; edges listed with repetition."""
    count = 0
    for subset in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in subset:
            u, v = edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        count += ok
    return count


def arborescence_count(adj, root):
    """Spanning arborescences oriented toward root: each other vertex picks one out-edge."""
    n = len(adj)
    choices = []
    for v in range(n):
        if v == root:
            continue
        choices.append([(v, w) for w in range(n) for _ in range(int(adj[v][w])) if w != v])
    count = 0
    for pick in itertools.product(*choices):
        nxt = dict(pick)
        ok = True
        for v in nxt:
            seen, x = set(), v
            while x != root:
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                x = nxt[x]
            if not ok:
                break
        count += ok
    return count


# ---------------------------------------------------------------------------
# mixing: direct enumeration of permutations and matchings over V = Z/m

def perfect_matchings(n):
    if n == 0:
        yield []
        return
    first = 0
    for k in range(1, n):
        rest = [i for i in range(1, n) if i != k]
        for m in perfect_matchings(len(rest)):
            yield [(first, k)] + [(rest[a], rest[b]) for a, b in m]


def directed_law(q, h, m):
    """Law of P_1 q + ... + P_h q over Z/m by enumerating all h-tuples of permutations."""
    n = len(q)
    perms = list(itertools.permutations(range(n)))
    counts = {}
    for tup in itertools.product(perms, repeat=h):
        r = tuple(sum(q[p[i]] for p in tup) % m for i in range(n))
        counts[r] = counts.get(r, 0) + 1
    total = len(perms) ** h
    return {r: Fraction(c, total) for r, c in counts.items()}


def matching_law(q, h, m):
    n = len(q)
    mats = list(perfect_matchings(n))
    counts = {}
    for tup in itertools.product(mats, repeat=h):
        r = [0] * n
        for mt in tup:
            for a, b in mt:
                r[a] += q[b]
                r[b] += q[a]
        key = tuple(x % m for x in r)
        counts[key] = counts.get(key, 0) + 1
    total = len(mats) ** h
    return {r: Fraction(c, total) for r, c in counts.items()}


def symmetric_pairings(orders):
    """Symmetric bilinear perfect pairings G x G -> Q/Z, brute force over generator values."""
    e = max(orders) if orders else 1
    k = len(orders)
    idx = [(i, j) for i in range(k) for j in range(i, k)]
    count = 0
    for vals in itertools.product(range(e), repeat=len(idx)):
        B = [[0] * k for _ in range(k)]
        for (i, j), v in zip(idx, vals):
            B[i][j] = B[j][i] = Fraction(v, e)
        # well defined: o_i * B(g_i, g_j) must be an integer
        if any((orders[i] * B[i][j]).denominator != 1 for i in range(k) for j in range(k)):
            continue
        radical = 0
        for x in elements(orders):
            if all(sum(x[i] * B[i][j] for i in range(k)).denominator == 1 for j in range(k)):
                radical += 1
        count += radical == 1
    return count
