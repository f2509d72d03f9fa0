import numpy as np

from bifreemax import DiscreteMeasure, bdf_from_law


def random_law_bdf(rng, k=6, span=3.0):
    """Step DF of a random atomic planar probability law; always a valid
    quasi-monotone DF with exact marginal consistency."""
    pts = rng.uniform(0.0, span, size=(k, 2))
    masses = rng.dirichlet(np.ones(k))
    return bdf_from_law(DiscreteMeasure(pts, masses))


def random_exponent_measure(rng, k=5, span=3.0, total=None):
    """Random discrete exponent measure with tails strictly below 1."""
    pts = rng.uniform(0.05, span, size=(k, 2))
    masses = rng.uniform(0.1, 1.0, size=k)
    if total is None:
        total = rng.uniform(0.3, 0.95)
    masses *= total / masses.sum()
    return DiscreteMeasure(pts, masses)
