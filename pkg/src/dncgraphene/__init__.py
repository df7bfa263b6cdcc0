"""Graphene Landau levels under dynamical (position-dependent) noncommutativity.

Submodules
----------
fock            truncated two-mode Fock space and sparse ladder operators
algebra         phase-space operators, tau products, commutator checks
hamiltonian     spinor Hamiltonians H0, H_theta, H_tau for the K and K' valleys
spectral        exact diagonalization, degenerate perturbation theory, fits
phenomenology   tau bound, minimal length/momentum, T=0 equations of state
cli             batch front-end writing JSON/CSV reports
"""

__version__ = "0.1.0"
