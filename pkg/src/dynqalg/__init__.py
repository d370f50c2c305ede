"""Exact verification engine for a dynamical deformation of the affine
rank-one quantum current algebra.

Subpackages/modules:

* ``scalars``    -- the commutative coefficient field (exact arithmetic).
* ``rmatrix``    -- the dynamical trigonometric R-matrix and its checks.
* ``modealg``    -- truncated Fourier-mode realization of the currents
                    (the independent oracle for everything half-current).
* ``halfalg``    -- exact normal-ordering engine for half-currents.
* ``loperator``  -- Gauss-composed L-operators and RLL component checks.
* ``hopf``       -- coproduct/counit/antipode layer over the L-operators.
* ``heisenberg`` -- free-boson realization cross-checks.
* ``suites``     -- the identity catalog the CLI and tests both run.
* ``cli``        -- ``verify`` / ``list`` / ``explain`` commands.
"""

__version__ = "0.1.0"
