"""Numerical laboratory for wavenumber-explicit Helmholtz resolvent estimates.

Modules: :mod:`~helmlab.specfun` (modified Bessel functions),
:mod:`~helmlab.halfspace` (Fourier solver on the half-plane),
:mod:`~helmlab.diskmodal` (modal solver on the unit disk),
:mod:`~helmlab.normkit` (norms), :mod:`~helmlab.identities` (identity
residuals), :mod:`~helmlab.estimlab` (estimate registry and sweeps) and
:mod:`~helmlab.cli`.
"""

__version__ = "0.1.0"
