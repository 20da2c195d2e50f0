"""Independent reference computations used by the tests.

Nothing here imports ladderlab: the oracles work on plain integers and
tuples so that agreement with the library is evidence, not tautology.
"""

import itertools

import numpy as np


# -- dim Pi(A_n) ---------------------------------------------------------------
#
# Paths in the double quiver are vertex sequences read as travel.  The mesh
# relation at v is (v, v+1, v) - (v, v-1, v), missing terms dropped at the
# ends.  The ideal is homogeneous, so its degree d part is spanned by
# u.rho_v.w with len(u) + len(w) = d - 2.


def _paths(n, start, length):
    out = [(start,)]
    for _ in range(length):
        out = [p + (p[-1] + s,) for p in out for s in (1, -1) if 1 <= p[-1] + s <= n]
    return out


def _mesh(n, v):
    rel = {}
    if v < n:
        rel[(v, v + 1, v)] = 1
    if v > 1:
        rel[(v, v - 1, v)] = -1
    return rel


def rank_mod(rows, p):
    """Rank of sparse rows ``{column: coefficient}`` over GF(p)."""
    pivots = {}
    for row in rows:
        row = {k: c % p for k, c in row.items() if c % p}
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = pow(row[lead], p - 2, p)
                pivots[lead] = {k: c * inv % p for k, c in row.items()}
                break
            piv, c = pivots[lead], row[lead]
            for k, x in piv.items():
                row[k] = (row.get(k, 0) - c * x) % p
                if not row[k]:
                    del row[k]
    return len(pivots)


def pi_dim(n, p):
    total = 0
    for d in range(2 * n + 2):
        paths = [q for v in range(1, n + 1) for q in _paths(n, v, d)]
        if not paths:
            break
        gens = []
        if d >= 2:
            for v in range(1, n + 1):
                rel = _mesh(n, v)
                for a in range(d - 1):
                    heads = [q for s in range(1, n + 1) for q in _paths(n, s, a) if q[-1] == v]
                    for u in heads:
                        for w in _paths(n, v, d - 2 - a):
                            gens.append({u[:-1] + r + w[1:]: c for r, c in rel.items()})
        total += len(paths) - rank_mod(gens, p)
    return total


# -- Delta_(0,0) over k ---------------------------------------------------------
#
# Elements (a, n, m, b) stand for [[a, n], [m, b]] with
# [[a,n],[m,b]][[a',n'],[m',b']] = [[aa', an'+nb'], [ma'+bm', bb']].


def delta_product(x, y):
    a, n, m, b = x
    a2, n2, m2, b2 = y
    return (a * a2, a * n2 + n * b2, m * a2 + b * m2, b * b2)


def delta_table(p):
    unit = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    t = np.zeros((4, 4, 4), dtype=np.int64)
    for i, j in itertools.product(range(4), repeat=2):
        t[i, j] = np.array(delta_product(unit[i], unit[j])) % p
    return t


# -- Pi_n(k) modules over GF(2), by exhaustion -----------------------------------


def _mat(bits, rows, cols):
    return np.array(bits, dtype=np.int64).reshape(rows, cols)


def _all_matrices(rows, cols):
    for bits in itertools.product((0, 1), repeat=rows * cols):
        yield _mat(bits, rows, cols)


def _zero(m):
    return not (m % 2).any()


def gf2_representations(n, dims):
    """Every (f, g) over GF(2) with the given dimension vector satisfying the mesh relations."""
    shapes_f = [(dims[i + 1], dims[i]) for i in range(n - 1)]
    shapes_g = [(dims[i], dims[i + 1]) for i in range(n - 1)]
    f_choices = itertools.product(*(list(_all_matrices(*s)) for s in shapes_f))
    for f in f_choices:
        for g in itertools.product(*(list(_all_matrices(*s)) for s in shapes_g)):
            if n >= 2 and not (_zero(g[0] @ f[0]) and _zero(f[-1] @ g[-1])):
                continue
            if all(_zero(f[i] @ g[i] - g[i + 1] @ f[i + 1]) for i in range(n - 2)):
                yield f, g


def gf2_hom_count(n, dm, fm, gm, dn, fn, gn):
    """Number of morphisms, found by trying every tuple of component matrices."""
    count = 0
    for comps in itertools.product(*(list(_all_matrices(dn[i], dm[i])) for i in range(n))):
        ok = all(_zero(comps[i + 1] @ fm[i] - fn[i] @ comps[i]) and _zero(comps[i] @ gm[i] - gn[i] @ comps[i + 1])
                 for i in range(n - 1))
        count += ok
    return count


def dimension_vectors(n, total):
    return [d for d in itertools.product(range(total + 1), repeat=n) if sum(d) == total]


def gf2_instances(n, max_total=4):
    """All pairs of GF(2) representations (as (dims, f, g) triples) of combined dimension <= max_total."""
    reps = {}
    for tot in range(max_total + 1):
        for d in dimension_vectors(n, tot):
            reps[d] = list(gf2_representations(n, d))
    for dm, ms in reps.items():
        for dn, ns in reps.items():
            if sum(dm) + sum(dn) > max_total:
                continue
            for fm, gm in ms:
                for fn, gn in ns:
                    yield (dm, fm, gm), (dn, fn, gn)
