"""Little-endian dense polynomial arithmetic over Z/p, plus integer
discriminants.  Reference implementations; the kernels mirror the mod-p parts.
"""

from __future__ import annotations


def trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(c: list[int]) -> int:
    return len(c) - 1


def pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return trim(out)


def pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    trim(a)
    df = degree(f)
    inv_lead = pow(f[-1], p - 2, p) if f[-1] != 1 else 1
    while degree(a) >= df:
        c = a[-1] * inv_lead % p
        shift = degree(a) - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        trim(a)
    return a


def pdivexact(a: list[int], f: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    trim(a)
    df = degree(f)
    inv_lead = pow(f[-1], p - 2, p) if f[-1] != 1 else 1
    q = [0] * (degree(a) - df + 1)
    while degree(a) >= df:
        c = a[-1] * inv_lead % p
        shift = degree(a) - df
        q[shift] = c
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        trim(a)
    if a:
        raise ValueError("division is not exact")
    return trim(q)


def pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = trim([x % p for x in list(a)])
    b = trim([x % p for x in list(b)])
    while b:
        a, b = b, pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def pcompose_mod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    """a(b(X)) mod f, by Horner."""
    out: list[int] = []
    for coeff in reversed(a):
        out = pmul(out, b, p)
        if coeff % p:
            if out:
                out[0] = (out[0] + coeff) % p
            else:
                out = [coeff % p]
    return pmod(out, f, p)


def xpow_mod(e: int, f: list[int], p: int) -> list[int]:
    """X^e mod f by binary exponentiation."""
    result = [1]
    base = pmod([0, 1], f, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), f, p)
        base = pmod(pmul(base, base, p), f, p)
        e >>= 1
    return result


def ddf_pattern(coeffs_le: list[int], p: int) -> dict[int, int]:
    """Distinct-degree factorization pattern of a squarefree monic polynomial
    mod p: mapping factor degree -> multiplicity.  Stops early once the
    remaining cofactor is forced irreducible."""
    f = trim([c % p for c in coeffs_le])
    if not f or f[-1] != 1:
        raise ValueError("polynomial must be monic")
    d = degree(f)
    if d == 0:
        return {}
    counts: dict[int, int] = {}
    h1 = xpow_mod(p, f, p)
    hj = h1
    fstar = f
    j = 1
    while degree(fstar) > 0:
        if degree(fstar) < 2 * j:
            counts[degree(fstar)] = counts.get(degree(fstar), 0) + 1
            break
        if j > 1:
            hj = pcompose_mod(hj, h1, f, p)
        diff = list(pmod(hj, fstar, p))
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = pgcd(trim(diff), fstar, p)
        dg = degree(g)
        if dg > 0:
            counts[j] = counts.get(j, 0) + dg // j
            fstar = pdivexact(fstar, g, p)
        j += 1
    return counts


def pattern_code(counts: dict[int, int]) -> int:
    """Pack a degree->count pattern into one integer, one byte per degree."""
    code = 0
    for deg, cnt in counts.items():
        code += cnt << (8 * (deg - 1))
    return code


def code_to_pattern(code: int, max_degree: int) -> tuple[int, ...]:
    degs: list[int] = []
    for deg in range(1, max_degree + 1):
        cnt = (code >> (8 * (deg - 1))) & 0xFF
        degs.extend([deg] * cnt)
    return tuple(sorted(degs))


def discriminant(coeffs_desc: list[int]) -> int:
    """Discriminant of an integer polynomial (descending coefficients)."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(coeffs_desc, x)
    return int(sympy.discriminant(poly.as_expr(), x))
