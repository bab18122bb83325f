import math

from threespectra import SignedEigenvalue, ThreeSpectra

R2 = math.sqrt(2.0)


def spectra(N, site, lam, mu):
    """ThreeSpectra from plain (value, sigma) pairs."""
    return ThreeSpectra(N, site, lam, tuple(SignedEigenvalue(v, s) for v, s in mu))


SYMMETRIC3 = dict(N=3, site=2, lam=(-R2, 0.0, R2), mu=((0.0, 0.0), (0.0, 0.0)))
