"""A private extended-precision mpmath context shared by the geometry modules.

Using our own context (rather than the global ``mpmath.mp``) keeps the
precision fixed no matter what callers do with mpmath.
"""

from mpmath.ctx_mp import MPContext

mp = MPContext()
mp.dps = 40


def act(m, z):
    """Moebius action of ``m`` on an extended-precision complex ``z``."""
    return (m.a * z + m.b) / (m.c * z + m.d)
