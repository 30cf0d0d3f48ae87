"""Brute-force oracles shared by the unit and acceptance tests."""

import math

from cmray.qfield import factor_rational_prime, ideals_of_norm, make_field
from cmray.rayclass import RayClassGroup, make_modulus


def generator_by_search(f, I):
    """Some element of I whose norm equals N(I), by scanning a box; None if
    I is not principal."""
    n = int(I.norm())
    half = math.sqrt(-f.disc) / 2
    ymax = int(math.sqrt(n) / half) + 1
    re_tau = f.disc / 2
    for y in range(-ymax, ymax + 1):
        c = -y * re_tau
        r = math.sqrt(n) + 1
        for x in range(int(c - r) - 1, int(c + r) + 2):
            b = f.elt(x, y)
            if b.norm() == n and I.contains(b):
                return b
    return None


def oracle_key(f, N, I, helper):
    """(class-group flag, residue of a generator mod N up to units).

    For a nonprincipal I the helper ideal (nonprincipal, prime to N) makes
    I*helper principal; this only works when h_K <= 2."""
    flag = 0
    beta = generator_by_search(f, I)
    if beta is None:
        flag = 1
        beta = generator_by_search(f, I * helper)
        assert beta is not None
    res = []
    for u in f.units:
        x = beta * u
        res.append((int(x.a) % N, int(x.b) % N))
    return flag, min(res)


def oracle_partition(d, N, bound=200):
    f = make_field(d)
    g = RayClassGroup(make_modulus(f, N))
    helper = None
    if f.class_number == 2:
        for p in range(2, 50):
            if N % p == 0:
                continue
            for P, _ in factor_rational_prime(f, p):
                if generator_by_search(f, P) is None:
                    helper = P
                    break
            if helper is not None:
                break
    ideals = [I for n in range(1, bound + 1) if math.gcd(n, N) == 1 for I in ideals_of_norm(f, n)]
    keys = {}
    lib = {}
    for I in ideals:
        keys.setdefault(oracle_key(f, N, I, helper), []).append(I)
        lib[I] = g.class_of(I)
    return g, keys, lib


def order_class_number_bruteforce(d, N):
    """Primitive reduced forms of discriminant N^2 d, by scanning every box."""
    D = N * N * d
    count = 0
    for a in range(1, int(math.isqrt(-D // 3)) + 2):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0) or math.gcd(math.gcd(a, b), c) != 1:
                continue
            count += 1
    return count
