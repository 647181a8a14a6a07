"""
Reparamétrisation des variables latentes discrètes
"""

from .reparam import pdf, cdf, inverse_cdf, analytic_mean, sample_continuous, reparametrize, uniform_prior

__all__ = ["pdf", "cdf", "inverse_cdf", "analytic_mean", "sample_continuous", "reparametrize", "uniform_prior"]
