"""Deterministic trial-division primality, used for table sizing."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n (n >= 2)."""
    if n < 2:
        raise ValueError(f"next_prime needs n >= 2, got {n}")
    while not is_prime(n):
        n += 1
    return n
