"""Prime field helpers.

Field elements are plain Python ints kept reduced into ``[0, p)``; the
prime ``p`` travels with the ring that owns them.
"""

MAX_CHARACTERISTIC = 2**31


def is_prime(n: int) -> bool:
    """Deterministic primality test, valid for every n below 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_characteristic(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p > MAX_CHARACTERISTIC:
        raise ValueError(f"characteristic must be a prime in [2, 2^31], got {p!r}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)
