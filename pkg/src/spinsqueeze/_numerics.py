"""Small extrapolation helpers shared by the analytic and oracle paths."""


def central_difference(f, h: float) -> float:
    return (f(h) - f(-h)) / (2.0 * h)


def richardson_derivative(f, h: float) -> float:
    """f'(0) from central differences at h and h/2 with the h**2 error cancelled."""
    d1 = central_difference(f, h)
    d2 = central_difference(f, h / 2)
    return (4.0 * d2 - d1) / 3.0


def symmetric_limit(f, t: float, h: float) -> float:
    """Limit of f at t from averages at t +- h, h/2, h/4.

    The symmetric averages are even in the offset, so two Richardson levels
    remove the h**2 and h**4 terms.
    """
    avg = [0.5 * (f(t + s) + f(t - s)) for s in (h, h / 2, h / 4)]
    r1 = (4.0 * avg[1] - avg[0]) / 3.0
    r2 = (4.0 * avg[2] - avg[1]) / 3.0
    return (16.0 * r2 - r1) / 15.0
