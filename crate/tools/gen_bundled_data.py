#!/usr/bin/env python3
"""Regenerate the bundled group / irrep / weight data files under data/.

Every group is built from an explicit faithful construction, and every
irrep is written as exact algebraic numbers rendered to full f64 precision
(17 significant digits).  The script asserts the group axioms, the
homomorphism property of every irrep, catalog completeness and the
expected Frobenius-Schur indicators before writing a single file, so the
committed data is certified twice (here and again by the Rust loaders).

Usage: python3 tools/gen_bundled_data.py
"""

import json
import math
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

S3H = math.sqrt(3.0) / 2.0  # sin(pi/3)

# Sixth roots of unity, omega = exp(i*pi/3), as exact (re, im) pairs.
OMEGA6 = [
    (1.0, 0.0),
    (0.5, S3H),
    (-0.5, S3H),
    (-1.0, 0.0),
    (-0.5, -S3H),
    (0.5, -S3H),
]
# Cube roots of unity, nu = exp(2i*pi/3).
OMEGA3 = [OMEGA6[0], OMEGA6[2], OMEGA6[4]]


def cplx(re, im=0.0):
    return complex(re, im)


def mat(rows):
    return [[cplx(*e) if isinstance(e, tuple) else cplx(e) for e in row] for row in rows]


def matmul(a, b):
    n, m, p = len(a), len(b[0]), len(b)
    return [[sum(a[i][k] * b[k][j] for k in range(p)) for j in range(m)] for i in range(n)]


def mat_close(a, b, tol=1e-12):
    return all(abs(a[i][j] - b[i][j]) < tol for i in range(len(a)) for j in range(len(a[0])))


def encode_mat(m):
    # normalize -0.0 so the committed files are sign-stable
    return [[[x.real + 0.0, x.imag + 0.0] for x in row] for row in m]


# ----------------------------------------------------------------------
# group constructions (each returns names, table, generators)
# ----------------------------------------------------------------------

def build_from_elements(elems, op):
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[op(a, b)] for b in elems] for a in elems]
    return table


def cyclic(n):
    elems = list(range(n))
    table = build_from_elements(elems, lambda a, b: (a + b) % n)
    return elems, table


def dihedral_like(n):
    """(k, b) with (k1,b1)(k2,b2) = (k1 + (-1)^b1 k2 mod n, b1 xor b2)."""
    elems = [(k, b) for b in (0, 1) for k in range(n)]

    def op(x, y):
        (k1, b1), (k2, b2) = x, y
        k = (k1 - k2) % n if b1 else (k1 + k2) % n
        return (k, b1 ^ b2)

    return elems, build_from_elements(elems, op)


def dicyclic3():
    """Order-12 dicyclic group: a^6 = e, b^2 = a^3, b a b^-1 = a^-1."""
    elems = [(k, b) for b in (0, 1) for k in range(6)]

    def op(x, y):
        (k1, b1), (k2, b2) = x, y
        if b1 == 0:
            return ((k1 + k2) % 6, b2)
        if b2 == 0:
            return ((k1 - k2) % 6, 1)
        return ((k1 - k2 + 3) % 6, 0)

    return elems, build_from_elements(elems, op)


QUNITS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
QMUL = {}


def _init_quat():
    # quaternion units as (sign, axis) with axis in {1, i, j, k}
    def parse(u):
        s = -1 if u.startswith("-") else 1
        return s, u.lstrip("-")

    base = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    for a in QUNITS:
        for b in QUNITS:
            sa, xa = parse(a)
            sb, xb = parse(b)
            s, x = base[(xa, xb)]
            s *= sa * sb
            QMUL[(a, b)] = ("-" if s < 0 else "") + x


_init_quat()


def quaternion8():
    elems = list(QUNITS)
    return elems, build_from_elements(elems, lambda a, b: QMUL[(a, b)])


def c2_times_q8():
    elems = [(c, q) for c in (0, 1) for q in QUNITS]

    def op(x, y):
        (c1, q1), (c2, q2) = x, y
        return ((c1 + c2) % 2, QMUL[(q1, q2)])

    return elems, build_from_elements(elems, op)


# ----------------------------------------------------------------------
# irrep models
# ----------------------------------------------------------------------

def rot2(re, im):
    """2x2 real rotation-like block for a unit complex number re+i*im."""
    return [[(re, 0.0), (-im, 0.0)], [(im, 0.0), (re, 0.0)]]


def q8_2dim(u):
    """The 2-dim irrep of Q8 inside SU(2): i -> diag(i,-i), j -> [[0,1],[-1,0]]."""
    table = {
        "1": [[(1, 0), (0, 0)], [(0, 0), (1, 0)]],
        "i": [[(0, 1), (0, 0)], [(0, 0), (0, -1)]],
        "j": [[(0, 0), (1, 0)], [(-1, 0), (0, 0)]],
        "k": [[(0, 0), (0, 1)], [(0, 1), (0, 0)]],
    }
    s = -1.0 if u.startswith("-") else 1.0
    m = table[u.lstrip("-")]
    return [[(s * re, s * im) for (re, im) in row] for row in m]


def groups():
    out = []

    # C2
    elems, table = cyclic(2)
    out.append({
        "name": "C2",
        "element_names": ["e", "x"],
        "table": table,
        "generators": [1],
        "irreps": [
            ("C2.1a", [mat([[1]]), mat([[1]])]),
            ("C2.1b", [mat([[1]]), mat([[-1]])]),
        ],
    })

    # C4
    elems, table = cyclic(4)
    chars = {"a": 1, "b": 1j, "c": -1, "d": -1j}
    out.append({
        "name": "C4",
        "element_names": ["e", "g", "g2", "g3"],
        "table": table,
        "generators": [1],
        "irreps": [
            (f"C4.1{t}", [mat([[z ** k]]) for k in range(4)]) for t, z in chars.items()
        ],
    })

    # S3 = C3 : C2
    elems, table = dihedral_like(3)
    names = ["e", "r", "r2", "s", "rs", "r2s"]
    # element order from dihedral_like is (k,0) then (k,1); rename (k,1) = r^k s
    names = ["e", "r", "r2", "s", "rs", "r2s"]

    def s3_std(e):
        k, b = e
        re, im = OMEGA3[k]
        m = rot2(re, im)
        if b:
            m = matmul(mat(m), mat([[1, 0], [0, -1]]))
            m = [[(x.real, x.imag) for x in row] for row in m]
        return m

    out.append({
        "name": "S3",
        "element_names": names,
        "table": table,
        "generators": [1, 3],
        "irreps": [
            ("S3.1a", [mat([[1]]) for _ in elems]),
            ("S3.1b", [mat([[1 if b == 0 else -1]]) for (k, b) in elems]),
            ("S3.2a", [mat(s3_std(e)) for e in elems]),
        ],
    })

    # D4
    elems, table = dihedral_like(4)
    names = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
    ROT4 = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]

    def d4_std(e):
        k, b = e
        re, im = ROT4[k]
        m = rot2(re, im)
        if b:
            m = matmul(mat(m), mat([[1, 0], [0, -1]]))
            m = [[(x.real, x.imag) for x in row] for row in m]
        return m

    out.append({
        "name": "D4",
        "element_names": names,
        "table": table,
        "generators": [1, 4],
        "irreps": [
            ("D4.1a", [mat([[1]]) for _ in elems]),
            ("D4.1b", [mat([[-1 if b else 1]]) for (k, b) in elems]),
            ("D4.1c", [mat([[(-1) ** k]]) for (k, b) in elems]),
            ("D4.1d", [mat([[(-1) ** (k + b)]]) for (k, b) in elems]),
            ("D4.2a", [mat(d4_std(e)) for e in elems]),
        ],
    })

    # Q8
    elems, table = quaternion8()

    def q8_char(iv, jv):
        def val(u):
            x = u.lstrip("-")
            return {"1": 1, "i": iv, "j": jv, "k": iv * jv}[x]

        return [mat([[val(u)]]) for u in elems]

    out.append({
        "name": "Q8",
        "element_names": list(QUNITS),
        "table": table,
        "generators": [2, 4],
        "irreps": [
            ("Q8.1a", q8_char(1, 1)),
            ("Q8.1b", q8_char(1, -1)),
            ("Q8.1c", q8_char(-1, 1)),
            ("Q8.1d", q8_char(-1, -1)),
            ("Q8.2a", [mat(q8_2dim(u)) for u in elems]),
        ],
    })

    # Q12 (dicyclic of order 12)
    elems, table = dicyclic3()
    names = ["e", "a", "a2", "a3", "a4", "a5", "b", "ab", "a2b", "a3b", "a4b", "a5b"]

    def q12_char(m):
        # a -> (-1)^m, b -> i^m
        def val(e):
            k, b = e
            return ((-1) ** m) ** k * (1j ** m) ** b

        return [mat([[val(e)]]) for e in elems]

    def q12_2dim(e, ell):
        k, b = e
        if ell == 1:
            wr, wi = OMEGA6[k % 6]
            wcr, wci = OMEGA6[(-k) % 6]
            bmat = [[(0, 0), (1, 0)], [(-1, 0), (0, 0)]]
        else:
            wr, wi = OMEGA3[k % 3]
            wcr, wci = OMEGA3[(-k) % 3]
            bmat = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]]
        diag = mat([[(wr, wi), (0, 0)], [(0, 0), (wcr, wci)]])
        if b == 0:
            return diag
        prod = matmul(diag, mat(bmat))
        return [[(x.real, x.imag) for x in row] for row in prod]

    out.append({
        "name": "Q12",
        "element_names": names,
        "table": table,
        "generators": [1, 6],
        "irreps": [
            ("Q12.1a", q12_char(0)),
            ("Q12.1b", q12_char(2)),
            ("Q12.1c", q12_char(1)),
            ("Q12.1d", q12_char(3)),
            ("Q12.2a", [mat(q12_2dim(e, 1)) for e in elems]),
            ("Q12.2b", [mat(q12_2dim(e, 2)) for e in elems]),
        ],
    })

    # C2 x Q8
    elems, table = c2_times_q8()
    names = []
    for c in (0, 1):
        for q in QUNITS:
            if c == 0:
                names.append(q)
            elif q == "1":
                names.append("z")
            elif q == "-1":
                names.append("-z")
            else:
                names.append(q + "z")

    def c2q8_char(cv, iv, jv):
        def val(e):
            c, q = e
            x = q.lstrip("-")
            base = {"1": 1, "i": iv, "j": jv, "k": iv * jv}[x]
            return (cv ** c) * base

        return [mat([[val(e)]]) for e in elems]

    def c2q8_2dim(e, sign_on_z):
        c, q = e
        m = q8_2dim(q)
        s = -1.0 if (sign_on_z and c == 1) else 1.0
        return [[(s * re, s * im) for (re, im) in row] for row in m]

    one_dims = []
    idx = 0
    for cv in (1, -1):
        for (iv, jv) in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            label = "C2xQ8.1" + "abcdefgh"[idx]
            one_dims.append((label, c2q8_char(cv, iv, jv)))
            idx += 1

    out.append({
        "name": "C2xQ8",
        "element_names": names,
        "table": table,
        "generators": [2, 4, 8],
        "irreps": one_dims + [
            ("C2xQ8.2a", [mat(c2q8_2dim(e, False)) for e in elems]),
            ("C2xQ8.2b", [mat(c2q8_2dim(e, True)) for e in elems]),
        ],
    })

    return out


# ----------------------------------------------------------------------
# certification
# ----------------------------------------------------------------------

def check_group(g):
    n = len(g["element_names"])
    t = g["table"]
    assert all(len(row) == n for row in t) and len(t) == n
    assert all(0 <= x < n for row in t for x in row)
    assert all(t[0][a] == a and t[a][0] == a for a in range(n)), g["name"]
    for a in range(n):
        assert any(t[a][b] == 0 and t[b][a] == 0 for b in range(n)), g["name"]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert t[t[a][b]][c] == t[a][t[b][c]], g["name"]


def check_irreps(g):
    n = len(g["element_names"])
    t = g["table"]
    chars = []
    for label, mats in g["irreps"]:
        d = len(mats[0])
        assert mat_close(mats[0], mat([[1 if i == j else 0 for j in range(d)] for i in range(d)]))
        for a in range(n):
            for b in range(n):
                assert mat_close(matmul(mats[a], mats[b]), mats[t[a][b]]), (g["name"], label)
        chi = [sum(mats[a][i][i] for i in range(d)) for a in range(n)]
        chars.append((label, chi, d))
    # completeness + orthogonality
    assert sum(d * d for _, _, d in chars) == n, g["name"]
    for i, (la, ca, _) in enumerate(chars):
        for j, (lb, cb, _) in enumerate(chars):
            ip = sum(ca[a] * cb[a].conjugate() for a in range(n)) / n
            want = 1.0 if i == j else 0.0
            assert abs(ip - want) < 1e-12, (la, lb, ip)
    # Frobenius-Schur sum rule: sum FS*deg = #{g : g^2 = e}
    fs_by_label = {}
    total = 0
    for label, chi, d in chars:
        raw = sum(chi[t[a][a]] for a in range(n)) / n
        fs = round(raw.real)
        assert abs(raw - fs) < 1e-12, (label, raw)
        fs_by_label[label] = fs
        total += fs * d
    sqrt_count = sum(1 for a in range(n) if t[a][a] == 0)
    assert total == sqrt_count, (g["name"], total, sqrt_count)
    return fs_by_label


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------

def write_json(path, obj):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, separators=(",", ":"))
        f.write("\n")


WEIGHTS = {
    # The Q8 entry reflects the known existence of quaternion octic fields
    # whose 2-dim symplectic Artin representation has root number -1.
    "Q8": ({"Q8.2a": -1}, "bundled"),
    # Structure-test weights: chosen to exercise nontrivial functors, not
    # number-theoretic facts about particular fields.
    "Q12": ({"Q12.2a": -1}, "user"),
    "C2xQ8": ({"C2xQ8.2a": -1, "C2xQ8.2b": -1}, "user"),
    "C2": ({}, "user"),
    "C4": ({}, "user"),
    "S3": ({}, "user"),
    "D4": ({}, "user"),
}


def main():
    for g in groups():
        check_group(g)
        fs = check_irreps(g)
        name = g["name"]
        slug = name.lower().replace("x", "")
        slug = {"c2": "c2", "c4": "c4", "s3": "s3", "d4": "d4", "q8": "q8",
                "q12": "q12", "c2q8": "c2q8"}[slug]
        write_json(os.path.join(ROOT, "groups", f"{slug}.json"), {
            "name": name,
            "order": len(g["element_names"]),
            "identity": 0,
            "element_names": g["element_names"],
            "table": g["table"],
            "generators": g["generators"],
        })
        files = []
        for label, mats in g["irreps"]:
            fname = label.lower().replace("x", "") + ".json"
            files.append(fname)
            write_json(os.path.join(ROOT, "irreps", slug, fname), {
                "label": label,
                "group": name,
                "degree": len(mats[0]),
                "matrices": [encode_mat(m) for m in mats],
            })
        write_json(os.path.join(ROOT, "irreps", slug, "manifest.json"), {
            "group": name,
            "irreps": files,
        })
        wmap, source = WEIGHTS[name]
        for label in wmap:
            assert fs[label] == -1, (name, label, fs[label])
        write_json(os.path.join(ROOT, "weights", f"{slug}.json"), {
            "group": name,
            "weights": wmap,
            "provenance": {k: {"source": source, "field_hint": None} for k in wmap},
        })
        print(f"{name}: order {len(g['element_names'])}, "
              f"{len(g['irreps'])} irreps, FS {fs}")

    # offline cache fixture for the root-number client (synthetic label)
    write_json(os.path.join(ROOT, "lmfdb-fixtures", "test.2.8t5.a.json"), {
        "label": "test.2.8t5.a",
        "group_id": "Q8",
        "irrep_label": "Q8.2a",
        "w": -1,
        "provenance": "lmfdb",
        "field_hint": None,
    })
    print("wrote lmfdb cache fixture")


if __name__ == "__main__":
    main()
