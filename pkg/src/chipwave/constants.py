"""Physical constants (SI) and unit helpers.

All public interfaces use mm / GHz / degrees; conversions to SI happen
at the solver boundary.
"""

C0 = 299792458.0            # speed of light, m/s
EPS0 = 8.8541878128e-12     # vacuum permittivity, F/m
MU0 = 1.25663706212e-6      # vacuum permeability, H/m
ETA0 = 376.730313668        # free-space impedance, ohm

MM = 1e-3                   # mm -> m
GHZ = 1e9                   # GHz -> Hz
