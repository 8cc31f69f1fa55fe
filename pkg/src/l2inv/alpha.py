"""Certified enclosures of

    alpha_{r,s} = (r-1)^2 (s-1)^2 sum_{n>=2} phi(n) / ((r^n - 1)(s^n - 1))

and a smallest-denominator probe of its rationality.

Partial sums are exact. The tail after ``N`` terms is bounded using
``phi(n) <= n`` and ``r^n - 1 >= r^n / 2``:

    sum_{n>N} ... <= 4 sum_{n>N} n x^n = 4 x^(N+1) ((N+1) - N x) / (1 - x)^2,  x = 1/(rs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def __contains__(self, q):
        return self.lo <= q <= self.hi

    def issubset(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def round_outward(self, places):
        """Snap the endpoints outward to the grid ``10^-places``."""
        g = 10 ** places
        lo = Fraction(math.floor(self.lo * g), g)
        hi = Fraction(math.ceil(self.hi * g), g)
        return RationalInterval(lo, hi)


def euler_phi(n):
    if n < 1:
        raise ValueError("phi(n) needs n >= 1")
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _check_rs(r, s):
    if not (isinstance(r, int) and isinstance(s, int)) or r < 2 or s < 2:
        raise ValueError(f"need integers r, s >= 2, got r={r}, s={s}")


def _scale(r, s):
    return (r - 1) ** 2 * (s - 1) ** 2


def partial_sum(r, s, N):
    """``sum_{n=2}^N phi(n) / ((r^n - 1)(s^n - 1))``, exactly (unscaled)."""
    _check_rs(r, s)
    total = Fraction(0)
    rn, sn = r, s
    for n in range(2, N + 1):
        rn *= r
        sn *= s
        total += Fraction(euler_phi(n), (rn - 1) * (sn - 1))
    return total


def tail_bound(r, s, N):
    """Majorant for ``sum_{n>N}`` of the unscaled terms (``N >= 1``)."""
    x = Fraction(1, r * s)
    return 4 * x ** (N + 1) * ((N + 1) - N * x) / (1 - x) ** 2


def majorant(r, s):
    """Scaled ``4 sum_{n>=2} n x^n``; strictly exceeds ``alpha_{r,s}``."""
    return _scale(r, s) * tail_bound(r, s, 1)


def alpha_enclosure_terms(r, s, N):
    """Enclosure from exactly ``N`` terms: ``[scale S_N, scale (S_N + T_N)]``."""
    _check_rs(r, s)
    N = max(N, 1)
    c = _scale(r, s)
    S = partial_sum(r, s, N)
    return RationalInterval(c * S, c * (S + tail_bound(r, s, N)))


def terms_for_width(r, s, width):
    """Least ``N >= 1`` with ``scale * T_N <= width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("target width must be positive")
    c = _scale(r, s)
    hi = 1
    while c * tail_bound(r, s, hi) > width:
        hi *= 2
    lo = hi // 2
    # T_N is decreasing in N
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if c * tail_bound(r, s, mid) <= width:
            hi = mid
        else:
            lo = mid
    return hi


def alpha_enclosure(r, s, target_width):
    """Return ``(N, interval)`` with the least ``N`` meeting the target width."""
    _check_rs(r, s)
    N = terms_for_width(r, s, target_width)
    return N, alpha_enclosure_terms(r, s, N)


def _simplest_nonneg(lo, hi):
    quotients = []
    while True:
        fl = lo.numerator // lo.denominator
        if fl == lo:
            quotients.append(fl)
            break
        if fl + 1 <= hi:
            quotients.append(fl + 1)
            break
        quotients.append(fl)
        lo, hi = 1 / (hi - fl), 1 / (lo - fl)
    num, den = 1, 0
    for a in reversed(quotients):
        num, den = a * num + den, num
    return Fraction(num, den)


def min_denominator_in_interval(I):
    """The rational of smallest denominator (then smallest absolute numerator) in ``[lo, hi]``."""
    if not isinstance(I, RationalInterval):
        I = RationalInterval(*I)
    lo, hi = I.lo, I.hi
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_nonneg(-hi, -lo)
    return _simplest_nonneg(lo, hi)


def truncate_decimal(q, places):
    """Decimal string of ``q`` truncated toward zero to ``places`` digits."""
    sign = "-" if q < 0 else ""
    q = abs(q)
    n = math.floor(q * 10 ** places)
    ip, fp = divmod(n, 10 ** places)
    return f"{sign}{ip}." + str(fp).rjust(places, "0") if places else f"{sign}{ip}"


def agreeing_decimal(I, places):
    """The common prefix of the truncated decimal expansions of both endpoints."""
    a = truncate_decimal(I.lo, places)
    b = truncate_decimal(I.hi, places)
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    out = a[:k]
    return out[:-1] if out.endswith(".") else out


def fractional_digits(text):
    return len(text.split(".", 1)[1]) if "." in text else 0


@dataclass(frozen=True)
class AlphaReport:
    r: int
    s: int
    terms_used: int
    enclosure: RationalInterval
    decimal: str
    min_denominator: int
    witness: Fraction
    certified: bool
    bound: int
    target_width: Fraction
    bounds_ok: bool
    stable_digits: int | None = None

    def to_json(self):
        out = {
            "r": self.r,
            "s": self.s,
            "terms_used": self.terms_used,
            "enclosure": {"lo": _q(self.enclosure.lo), "hi": _q(self.enclosure.hi)},
            "decimal": self.decimal,
            "bound": str(self.bound),
            "certified": self.certified,
            "min_denominator_found": "exceeds bound" if self.certified else str(self.min_denominator),
            "min_denominator": str(self.min_denominator),
            "enclosure_width_target": _q(self.target_width),
            "positivity_and_majorant_ok": self.bounds_ok,
            "method": "exact partial sum plus geometric tail majorant; "
                      "smallest-denominator rational by continued-fraction descent",
        }
        if self.certified:
            out["statement"] = (f"no rational with denominator <= {self.bound} "
                                "lies in the certified enclosure")
        else:
            out["witness"] = _q(self.witness)
        if self.stable_digits is not None:
            out["digits_stable_N_vs_2N"] = self.stable_digits
        return out


def _q(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rationality_report(r, s, bound, digits=None, max_escalations=8, stability_check=True):
    """Enclose ``alpha_{r,s}`` to width below ``1/bound^2`` and search it for a
    rational of denominator at most ``bound``.

    Two rationals of denominator ``<= bound`` are at least ``1/bound^2`` apart,
    so a too-small witness can only persist if it is the value itself; the
    width is tightened a few times before giving up.
    """
    _check_rs(r, s)
    bound = int(bound)
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    width = Fraction(1, bound * bound + 1)
    if digits is not None:
        if digits < 0:
            raise ValueError("digits must be non-negative")
        width = min(width, Fraction(1, 10 ** (digits + 5)))
    for _ in range(max_escalations + 1):
        N, exact = alpha_enclosure(r, s, width / 2)
        places = _places_for(width) + 5
        I = exact.round_outward(places)
        w = min_denominator_in_interval(I)
        if w.denominator > bound:
            break
        width /= 10 ** 10
    lo_ok = exact.lo > 0
    hi_ok = exact.hi < majorant(r, s)
    ndigits = digits if digits is not None else _places_for(width)
    dec = agreeing_decimal(I, ndigits)
    stable = None
    if stability_check:
        # the same digits from twice as many terms
        I2 = alpha_enclosure_terms(r, s, 2 * N).round_outward(places)
        dec2 = agreeing_decimal(I2, ndigits)
        k = 0
        while k < min(len(dec), len(dec2)) and dec[k] == dec2[k]:
            k += 1
        stable = fractional_digits(dec[:k])
    return AlphaReport(r, s, N, I, dec, w.denominator, w, w.denominator > bound, bound, width,
                       lo_ok and hi_ok, stable)


def _places_for(width):
    """Decimal places needed to resolve ``width``."""
    k = 0
    while Fraction(1, 10 ** k) > width:
        k += 1
    return k
