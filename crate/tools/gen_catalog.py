#!/usr/bin/env python3
"""Generate crates/core/data/catalog.json: a curated list of small groups,
each stored as a Cayley table (identity first)."""
import itertools
import json
import sys


def closure(gens, mul, ident):
    elems = [ident]
    seen = {ident}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = mul(g, x)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    return elems


def table(elems, mul):
    idx = {e: i for i, e in enumerate(elems)}
    return [[idx[mul(a, b)] for b in elems] for a in elems]


def metacyclic(m, k, r, s):
    """<a, x | a^m, x^k = a^s, x a x^-1 = a^r>, elements a^i x^j."""
    assert pow(r, k, m) == 1 % m and (r * s - s) % m == 0

    def mul(p, q):
        i1, j1 = p
        i2, j2 = q
        i = i1 + pow(r, j1, m) * i2
        j = j1 + j2
        if j >= k:
            j -= k
            i += s
        return (i % m, j)

    elems = [(i, j) for j in range(k) for i in range(m)]
    return table(elems, mul)


def perm_group(gens):
    n = len(gens[0])
    ident = tuple(range(n))

    def mul(a, b):
        return tuple(a[b[i]] for i in range(n))

    elems = sorted(closure([tuple(g) for g in gens], mul, ident))
    return table(elems, mul)


def matrix_group(gens, p):
    d = len(gens[0])
    ident = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(d)) % p for j in range(d))
            for i in range(d)
        )

    g = [tuple(tuple(x % p for x in row) for row in m) for m in gens]
    elems = closure(g, mul, ident)
    return table(elems, mul)


def kron(a, b):
    return [
        [a[i // len(b)][j // len(b)] * b[i % len(b)][j % len(b)] for j in range(len(a) * len(b))]
        for i in range(len(a) * len(b))
    ]


def product(t1, t2):
    n1, n2 = len(t1), len(t2)
    return [
        [t1[x // n2][y // n2] * n2 + t2[x % n2][y % n2] for y in range(n1 * n2)]
        for x in range(n1 * n2)
    ]


def cyc(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def dihedral(n):
    return metacyclic(n, 2, n - 1, 0)


def dicyclic(n):
    return metacyclic(2 * n, 2, 2 * n - 1, n)


def semidihedral(order):
    m = order // 2
    return metacyclic(m, 2, m // 2 - 1, 0)


def modular(order):
    m = order // 2
    return metacyclic(m, 2, m // 2 + 1, 0)


def prod(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = product(out, t)
    return out


def wreath_c4_c2():
    # (C4 x C4) : C2 acting by swapping, on 8 points
    a = [1, 2, 3, 0, 4, 5, 6, 7]
    s = [4, 5, 6, 7, 0, 1, 2, 3]
    return perm_group([a, s])


X = [[0, 1], [1, 0]]
Z = [[1, 0], [0, -1]]
I2 = [[1, 0], [0, 1]]
# quaternion units over F_5, where 2^2 = -1
QI = [[2, 0], [0, 3]]
QJ = [[0, 1], [-1, 0]]


def groups():
    g = []
    for n in range(1, 33):
        g.append((f"C{n}", cyc(n)))
    ab = [
        ("C2xC2", [2, 2]), ("C2xC4", [2, 4]), ("C2^3", [2, 2, 2]), ("C3xC3", [3, 3]),
        ("C2xC6", [2, 6]), ("C4xC4", [4, 4]), ("C2xC8", [2, 8]), ("C2^2xC4", [2, 2, 4]),
        ("C2^4", [2, 2, 2, 2]), ("C3xC6", [3, 6]), ("C2xC10", [2, 10]), ("C2xC12", [2, 12]),
        ("C2^2xC6", [2, 2, 6]), ("C5xC5", [5, 5]), ("C3xC9", [3, 9]), ("C3^3", [3, 3, 3]),
        ("C2xC14", [2, 14]), ("C4xC8", [4, 8]), ("C2xC16", [2, 16]), ("C2^2xC8", [2, 2, 8]),
        ("C2xC4^2", [2, 4, 4]), ("C2^3xC4", [2, 2, 2, 4]), ("C2^5", [2, 2, 2, 2, 2]),
    ]
    for name, inv in ab:
        g.append((name, prod(*[cyc(d) for d in inv])))
    for n in range(3, 17):
        g.append((f"D{n}", dihedral(n)))
    for n in range(2, 9):
        name = {2: "Q8", 4: "Q16", 8: "Q32"}.get(n, f"Dic{n}")
        g.append((name, dicyclic(n)))
    g += [
        ("SD16", semidihedral(16)),
        ("SD32", semidihedral(32)),
        ("M16", modular(16)),
        ("M32", modular(32)),
        ("C4:C4", metacyclic(4, 4, 3, 0)),
        ("C3:C8", metacyclic(3, 8, 2, 0)),
        ("C5:C4", metacyclic(5, 4, 2, 0)),
        ("C7:C3", metacyclic(7, 3, 2, 0)),
        ("C9:C3", metacyclic(9, 3, 4, 0)),
        ("C4:C8", metacyclic(8, 4, 5, 0)),
        ("C8:C4", metacyclic(8, 4, 3, 0)),
        ("A4", perm_group([[1, 2, 0, 3], [1, 0, 3, 2]])),
        ("S4", perm_group([[1, 0, 2, 3], [1, 2, 3, 0]])),
        ("SL(2,3)", matrix_group([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 3)),
        ("Heis27", matrix_group([[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]], 3)),
        ("Pauli", matrix_group([X, Z, [[2, 0], [0, 2]]], 5)),
        ("C4wrC2", wreath_c4_c2()),
        ("2^(1+4)+", matrix_group([kron(X, I2), kron(Z, I2), kron(I2, X), kron(I2, Z)], 5)),
        ("2^(1+4)-", matrix_group([kron(QI, I2), kron(QJ, I2), kron(I2, X), kron(I2, Z)], 5)),
        ("S3xC3", prod(dihedral(3), cyc(3))),
        ("S3xC4", prod(dihedral(3), cyc(4))),
        ("S3xC5", prod(dihedral(3), cyc(5))),
        ("S3xC2^2", prod(dihedral(3), cyc(2), cyc(2))),
        ("D4xC2", prod(dihedral(4), cyc(2))),
        ("D4xC3", prod(dihedral(4), cyc(3))),
        ("D4xC4", prod(dihedral(4), cyc(4))),
        ("D4xC2^2", prod(dihedral(4), cyc(2), cyc(2))),
        ("D5xC3", prod(dihedral(5), cyc(3))),
        ("D8xC2", prod(dihedral(8), cyc(2))),
        ("Q8xC2", prod(dicyclic(2), cyc(2))),
        ("Q8xC3", prod(dicyclic(2), cyc(3))),
        ("Q8xC4", prod(dicyclic(2), cyc(4))),
        ("Q8xC2^2", prod(dicyclic(2), cyc(2), cyc(2))),
        ("Q16xC2", prod(dicyclic(4), cyc(2))),
        ("Dic3xC2", prod(dicyclic(3), cyc(2))),
        ("A4xC2", prod(perm_group([[1, 2, 0, 3], [1, 0, 3, 2]]), cyc(2))),
        ("PaulixC2", prod(matrix_group([X, Z, [[2, 0], [0, 2]]], 5), cyc(2))),
        ("M16xC2", prod(modular(16), cyc(2))),
        ("C4:C4xC2", prod(metacyclic(4, 4, 3, 0), cyc(2))),
    ]
    return g


def check(t):
    n = len(t)
    assert all(t[0][i] == i and t[i][0] == i for i in range(n)), "identity must be 0"
    for row in t:
        assert sorted(row) == list(range(n))


def main():
    out = []
    for name, t in groups():
        check(t)
        assert len(t) <= 32, name
        out.append({"name": name, "order": len(t), "cayley": t})
    json.dump({"schema_version": 1, "groups": out}, sys.stdout, separators=(",", ":"))


if __name__ == "__main__":
    main()
