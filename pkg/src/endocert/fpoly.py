"""Dense polynomials over F_p as coefficient lists, constant term first."""

from __future__ import annotations

import random

from .linalg import FpMatrix, nullspace_mod


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(f) - 1 if f else -1


def reduce_poly(f, p):
    return trim([c % p for c in f])


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def divmod_poly(f, g, p):
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(trim(f))
    inv = pow(g[-1], p - 2, p)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], f
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return trim(q), trim(f[:dg])


def mod(f, g, p):
    return divmod_poly(f, g, p)[1]


def monic(f, p):
    f = trim(f)
    if not f:
        return f
    inv = pow(f[-1], p - 2, p)
    return [c * inv % p for c in f]


def gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def derivative(f, p):
    return trim([(i * f[i]) % p for i in range(1, len(f))])


def powmod(f, e: int, m, p):
    result = [1]
    base = mod(f, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def is_squarefree(f, p) -> bool:
    return degree(gcd(f, derivative(f, p), p)) == 0


def distinct_degree(f, p):
    """Distinct-degree factorization of a monic squarefree f: list of (d, g_d)."""
    f = monic(f, p)
    out = []
    x = [0, 1]
    h = x
    d = 0
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if degree(g) > 0:
            out.append((d, g))
            f = divmod_poly(f, g, p)[0]
            h = mod(h, f, p)
    if degree(f) > 0:
        out.append((degree(f), f))
    return out


def degree_pattern(f, p) -> tuple:
    """Degrees of the irreducible factors of a squarefree f mod p, descending."""
    parts = []
    for d, g in distinct_degree(f, p):
        parts.extend([d] * (degree(g) // d))
    return tuple(sorted(parts, reverse=True))


def is_irreducible(f, p) -> bool:
    f = trim(f)
    if degree(f) < 1:
        return False
    if degree(f) == 1:
        return True
    if not is_squarefree(f, p):
        return False
    return degree_pattern(f, p) == (degree(f),)


def equal_degree_split(g, d: int, p, rng: random.Random):
    """Split monic squarefree g, all of whose factors have degree d, into irreducibles."""
    g = monic(g, p)
    if degree(g) == d:
        return [g]
    n = degree(g)
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if degree(a) < 1:
            continue
        if p == 2:
            t = a
            s = a
            for _ in range(d - 1):
                s = mod(mul(s, s, p), g, p)
                t = add(t, s, p)
            h = gcd(t, g, p)
        else:
            e = (p ** d - 1) // 2
            h = gcd(sub(powmod(a, e, g, p), [1], p), g, p)
        if 0 < degree(h) < n:
            rest = divmod_poly(g, h, p)[0]
            return equal_degree_split(h, d, p, rng) + equal_degree_split(rest, d, p, rng)


def squarefree_part(f, p):
    """Product of the distinct monic irreducible factors of f."""
    f = monic(f, p)
    if degree(f) < 1:
        return f
    df = derivative(f, p)
    if not df:
        # f is a p-th power: f(x) = g(x^p) = g'(x)^p over F_p
        root = [f[i] for i in range(0, len(f), p)]
        return squarefree_part(root, p)
    g = gcd(f, df, p)
    core = divmod_poly(f, g, p)[0]
    if degree(g) == 0:
        return core
    return monic(lcm_poly(core, squarefree_part(g, p), p), p)


def lcm_poly(f, g, p):
    return divmod_poly(mul(f, g, p), gcd(f, g, p), p)[0]


def irreducible_factors(f, p, seed: int = 0) -> list:
    """Distinct monic irreducible factors of f, sorted by (degree, coefficients)."""
    rng = random.Random(seed)
    sf = squarefree_part(f, p)
    out = []
    for d, g in distinct_degree(sf, p):
        out.extend(equal_degree_split(g, d, p, rng))
    return sorted(out, key=lambda h: (len(h), h))


# ---------------------------------------------------------------------------
# polynomials of matrices
# ---------------------------------------------------------------------------

def charpoly(M: FpMatrix):
    """Characteristic polynomial via Hessenberg reduction."""
    p = M.modulus
    n = M.nrows
    H = [list(r) for r in M.rows]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for r in H:
                r[piv], r[j + 1] = r[j + 1], r[piv]
        inv = pow(H[j + 1][j], p - 2, p)
        for i in range(j + 2, n):
            c = H[i][j] * inv % p
            if c:
                for k in range(n):
                    H[i][k] = (H[i][k] - c * H[j + 1][k]) % p
                for r in H:
                    r[j + 1] = (r[j + 1] + c * r[i]) % p
    polys = [[1]]
    for m in range(1, n + 1):
        pm = mul([(-H[m - 1][m - 1]) % p, 1], polys[m - 1], p)
        t = 1
        for i in range(1, m):
            t = t * H[m - i][m - i - 1] % p
            coef = t * H[m - i - 1][m - 1] % p
            pm = sub(pm, [c * coef % p for c in polys[m - i - 1]], p)
        polys.append(pm)
    return polys[n]


def eval_at_matrix(f, M: FpMatrix) -> FpMatrix:
    p = M.modulus
    n = M.nrows
    result = FpMatrix(p, [[0] * n for _ in range(n)])
    ident = FpMatrix.identity(n, p)
    for c in reversed(trim(f)):
        result = result @ M
        if c:
            result = FpMatrix(p, [[(a + c * b) % p for a, b in zip(ra, rb)]
                                  for ra, rb in zip(result.rows, ident.rows)])
    return result


def minpoly(M: FpMatrix):
    """Minimal polynomial: first linear dependency among I, M, M^2, ..."""
    p = M.modulus
    n = M.nrows
    powers = [FpMatrix.identity(n, p)]
    while True:
        k = len(powers)
        cols = [[x for row in P.rows for x in row] for P in powers]
        # columns are flattened powers; solve sum c_i M^i = 0 with c_{k-1} = 1
        rows = [[cols[i][e] for i in range(k)] for e in range(n * n)]
        ker = nullspace_mod(rows, k, p)
        if ker:
            v = ker[0]
            return monic(list(v), p)
        powers.append(powers[-1] @ M)
