"""Tridiagonal Gaussian beta-ensembles: sampling, spectra, Stieltjes transforms,
Hermite/Airy asymptotics and Monte Carlo verification campaigns."""

__version__ = "0.1.0"
