"""Generalized-trigonometric Born rule and CHSH optimization toolkit."""

from .born import Convention, correlation, correlation_taylor, probabilities
from .chsh import (BellResult, MeasurementSettings, SearchConfig, SweepRecord,
                   bell_value, conjecture_bound, maximize_bell, sweep)
from .errors import ConvergenceError, DomainError
from .gentrig import (F_pq, PQParams, cos_pq, pi_pq_gamma, pi_pq_quadrature,
                      sin_cos_pq, sin_pq)

__version__ = "0.1.0"
