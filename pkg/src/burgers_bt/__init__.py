"""Exact and initial-value solutions of the 2-D coupled Burgers system.

Submodules:

- ``jets``: truncated Taylor jets in (x, y, t)
- ``exact``: plane-wave heat seeds, the lift to Burgers pairs, the recurrence
  and residual checks
- ``heat_ivp``: initial datum construction, spectral and kernel heat solvers,
  recovery of the Burgers fields
- ``reference_fd``: explicit finite-difference integrator used as a cross-check
- ``scenarios`` / ``cli``: configured runs, reports and field output
"""

__version__ = "0.1.0"
