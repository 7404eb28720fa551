import os

DEFAULT_BUDGET = 10**9
DEFAULT_MAX_PRECISION = 8
DEFAULT_MAX_DEGREE = 16
DEFAULT_MAX_AN = 8


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def default_budget():
    """Membership-evaluation cap; overridable through ZETAFORGE_BUDGET."""
    return _env_int("ZETAFORGE_BUDGET", DEFAULT_BUDGET)


def max_precision():
    """p-adic precision cap; overridable through ZETAFORGE_MAX_PRECISION."""
    return _env_int("ZETAFORGE_MAX_PRECISION", DEFAULT_MAX_PRECISION)
