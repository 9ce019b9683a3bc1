"""Rate-region toolbox for the half-duplex causal cognitive radio channel.

Exact discrete evaluation of the 18-constraint achievable region, Gaussian
(log-det) evaluation with the four legacy two-phase protocols, polytope
projection onto the (R_P, R_C) plane, and region containment checks.
"""

__version__ = "0.1.0"
