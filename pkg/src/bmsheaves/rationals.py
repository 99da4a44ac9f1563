"""Exact rational scalar backend.

gmpy2's mpq is used when available (it is several times faster on the
elimination hot paths); fractions.Fraction is a drop-in fallback.  Only
the shared surface is used: QQ(p), QQ(p, q), arithmetic, comparisons,
and the numerator/denominator attributes.
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as QQ

__all__ = ["QQ"]
