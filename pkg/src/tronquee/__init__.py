"""High-precision numerics for the tronquee family of Painleve II.

Subpackages and modules:

* :mod:`tronquee.specfun` - special functions at arbitrary precision;
* :mod:`tronquee.painleve` - trajectories of the Hamiltonian;
* :mod:`tronquee.series` - closed-form asymptotic evaluators;
* :mod:`tronquee.regint` - regularized integrals and identities;
* :mod:`tronquee.parametrix` - model Riemann-Hilbert solutions;
* :mod:`tronquee.apps` - random-matrix applications;
* :mod:`tronquee.cli` - command-line front end.
"""

__version__ = "0.1.0"
