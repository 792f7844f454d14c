"""Exact arithmetic for quaternion algebras over ordered and valued fields.

The package has three layers.  The bottom layer provides the scalar
fields: iterated real quadratic towers (`towers`), truncated square-root
closed power series (`puiseux`), and unramified extensions of the
2-adic and 3-adic rationals (`cyclic`).  The middle layer builds
quaternion algebras and rotation groups over those scalars
(`quaternions`, `rotations`).  The top layer runs the constructions
that the command line tools expose: maximal subgroup certificates for
unit spheres (`maxsub`), cokernel computations for reduced Whitehead
groups (`ck1`), and dihedral quotients of cyclic algebras (`cyclic`).

Everything is exact.  There are no floats anywhere; approximation
enters only through explicit interval brackets on tower elements and
through stated truncation orders on series.
"""

__version__ = "0.1.0"
