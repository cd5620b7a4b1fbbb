from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

BIG = 10_000


def rationals(lo=-8, hi=8, max_den=60):
    """Exact rationals in [lo, hi] with bounded denominators."""
    return st.tuples(st.integers(1, max_den), st.integers(lo * max_den, hi * max_den)).map(
        lambda t: mpq(t[1], t[0])
    ).filter(lambda q: lo <= q <= hi)
