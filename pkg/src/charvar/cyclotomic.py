"""Exact arithmetic in real cyclotomic fields.

Elements of Q(zeta_N) are stored over the power basis 1, zeta_N, ...,
zeta_N^(phi(N)-1) modulo the N-th cyclotomic polynomial, as a tuple of
integer numerators over one positive common denominator.  The conductor
is never kept congruent to 2 mod 4 (Q(zeta_2m) = Q(zeta_m) for odd m).
Results of arithmetic keep their operands' conductor; ``minimized()``
returns the smallest field that holds the value.

Multiplication uses Kronecker substitution: both operands are packed into
big integers, multiplied once, and the signed digits are unpacked again.
This keeps the Python-level work linear in phi(N).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "ConductorOverflow",
    "CycloReal",
    "RationalAngle",
    "as_two_cos",
    "cyclotomic_polynomial",
    "embed",
    "get_conductor_cap",
    "set_conductor_cap",
    "to_float",
    "two_cos",
]

Number = Union[int, Fraction]


class ConductorOverflow(ArithmeticError):
    """Raised when a result would need a cyclotomic field above the cap."""


_cap_lock = threading.Lock()
_conductor_cap = 5040


def get_conductor_cap() -> int:
    return _conductor_cap


def set_conductor_cap(cap: int) -> int:
    """Set the global conductor cap; returns the previous value."""
    global _conductor_cap
    if cap < 1:
        raise ValueError("conductor cap must be positive")
    with _cap_lock:
        old, _conductor_cap = _conductor_cap, int(cap)
    return old


# ---------------------------------------------------------------------------
# number theory helpers


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result = n
    for p in _prime_factors(n):
        result -= result // p
    return result


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _canonical_conductor(n: int) -> int:
    if n % 4 == 2:
        return n // 2
    return n


def _poly_divmod_exact(num: list[int], den: Sequence[int]) -> list[int]:
    """Quotient of integer polynomials (low to high); den is monic."""
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0]
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    if any(num[:dn]):
        raise ArithmeticError("non-exact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic
    polynomial, by dividing x^n - 1 by Phi_d for every proper divisor d."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class _Field:
    """Per-conductor reduction data: x^e mod Phi_N for 0 <= e < N."""

    def __init__(self, n: int):
        self.n = n
        self.phi = totient(n)
        self.cyclo = cyclotomic_polynomial(n)
        phi = self.phi
        powers = []
        vec = [0] * phi
        vec[0] = 1
        for _ in range(n):
            powers.append(tuple(vec))
            # multiply by x and reduce with the monic Phi_N
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for j in range(phi):
                    vec[j] -= top * self.cyclo[j]
        self.powers = powers
        self.max_table = max((abs(c) for v in powers for c in v), default=1)
        self._packed: dict[int, list[int]] = {}

    def packed_powers(self, bits: int) -> list[int]:
        got = self._packed.get(bits)
        if got is None:
            got = [_pack(self.powers[e % self.n], bits) for e in range(self.phi, 2 * self.phi - 1)]
            self._packed[bits] = got
        return got


_field_lock = threading.Lock()


@lru_cache(maxsize=None)
def _field_uncached(n: int) -> _Field:
    return _Field(n)


def _field(n: int) -> _Field:
    with _field_lock:
        return _field_uncached(n)


def _pack(coeffs: Sequence[int], bits: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = (value << bits) + c
    return value


def _unpack(value: int, bits: int, length: int) -> list[int]:
    out = [0] * length
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    full = 1 << bits
    for i in range(length):
        d = value & mask
        if d >= half:
            d -= full
        out[i] = d
        value = (value - d) >> bits
    return out


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    g = math.gcd(den, *nums) if nums else den
    if g == 0:
        return tuple(nums), 1
    if den < 0:
        g = -g
    if g != 1:
        nums = [c // g for c in nums]
        den //= g
    if not any(nums):
        den = 1
    return tuple(nums), den


# ---------------------------------------------------------------------------
# RationalAngle


class RationalAngle:
    """The angle (num/den)*pi, reduced, with num normalized into [0, 2*den)."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("angle denominator is zero")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        num //= g
        den //= g
        object.__setattr__(self, "num", num % (2 * den))
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalAngle is immutable")

    @classmethod
    def from_fraction(cls, f: Number) -> "RationalAngle":
        f = Fraction(f)
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.num, self.den)

    def __eq__(self, other):
        if not isinstance(other, RationalAngle):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other: "RationalAngle") -> bool:
        return self.fraction < other.fraction

    def __le__(self, other: "RationalAngle") -> bool:
        return self.fraction <= other.fraction

    def folded(self) -> "RationalAngle":
        """Same cosine, angle in [0, pi]."""
        if self.num > self.den:
            return RationalAngle(2 * self.den - self.num, self.den)
        return self

    def to_float(self) -> float:
        return math.pi * self.num / self.den

    def __repr__(self):
        return f"RationalAngle({self.num}, {self.den})"

    def __str__(self):
        if self.num == 0:
            return "0"
        if self.den == 1:
            return f"{self.num} pi"
        return f"{self.num}/{self.den} pi"


# ---------------------------------------------------------------------------
# CycloReal


class CycloReal:
    """A real number in Q(zeta_N).

    Values are immutable.  Arithmetic with ``int`` and ``Fraction`` operands
    is supported directly; mixed conductors are embedded into their lcm.
    """

    __slots__ = ("conductor", "_nums", "_den", "_key")

    def __init__(self, conductor: int, coeffs: Iterable[Number]):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError("conductor must be positive")
        coeffs = [Fraction(c) for c in coeffs]
        if conductor % 4 == 2:
            raise ValueError("use the odd conductor N/2 instead of N = 2 mod 4")
        if len(coeffs) != totient(conductor):
            raise ValueError(f"expected {totient(conductor)} coefficients for conductor {conductor}")
        den = reduce(_lcm, (c.denominator for c in coeffs), 1)
        nums = [c.numerator * (den // c.denominator) for c in coeffs]
        self._set(conductor, *_normalize(nums, den))
        if not self._is_real():
            raise ValueError("coefficients do not describe a real number")

    def _set(self, conductor, nums, den):
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "_nums", nums)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycloReal is immutable")

    @classmethod
    def _raw(cls, conductor: int, nums, den: int = 1) -> "CycloReal":
        obj = cls.__new__(cls)
        obj._set(conductor, *_normalize(list(nums), den))
        return obj

    @classmethod
    def rational(cls, q: Number) -> "CycloReal":
        q = Fraction(q)
        return cls._raw(1, [q.numerator], q.denominator)

    # -- accessors ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._nums)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._nums

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    def as_fraction(self) -> Optional[Fraction]:
        if self.is_rational():
            return Fraction(self._nums[0], self._den)
        return None

    # -- embedding -----------------------------------------------------------

    def embed(self, new_conductor: int) -> "CycloReal":
        new_conductor = _canonical_conductor(int(new_conductor))
        if new_conductor % self.conductor:
            raise ValueError(f"conductor {self.conductor} does not divide {new_conductor}")
        if new_conductor == self.conductor:
            return self
        if new_conductor > _conductor_cap:
            raise ConductorOverflow(f"conductor {new_conductor} exceeds cap {_conductor_cap}")
        field = _field(new_conductor)
        step = new_conductor // self.conductor
        out = [0] * field.phi
        for j, c in enumerate(self._nums):
            if c:
                for i, t in enumerate(field.powers[(j * step) % new_conductor]):
                    if t:
                        out[i] += c * t
        return CycloReal._raw(new_conductor, out, self._den)

    def conjugate(self) -> "CycloReal":
        """Image under zeta -> zeta^-1 (equal to self for real elements)."""
        n = self.conductor
        field = _field(n)
        out = [0] * field.phi
        for j, c in enumerate(self._nums):
            if c:
                for i, t in enumerate(field.powers[(-j) % n]):
                    if t:
                        out[i] += c * t
        return CycloReal._raw(n, out, self._den)

    def _is_real(self) -> bool:
        conj = self.conjugate()
        return conj._nums == self._nums and conj._den == self._den

    def minimized(self) -> "CycloReal":
        """Same number in the smallest cyclotomic field containing it."""
        if self.is_rational():
            return CycloReal._raw(1, [self._nums[0]], self._den)
        current = self
        changed = True
        while changed:
            changed = False
            for p in _prime_factors(current.conductor):
                smaller = _canonical_conductor(current.conductor // p)
                got = _descend(current, smaller)
                if got is not None:
                    current = got
                    changed = True
                    break
        return current

    # -- arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Optional["CycloReal"]:
        if isinstance(other, CycloReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloReal.rational(other)
        return None

    @staticmethod
    def _common(a: "CycloReal", b: "CycloReal"):
        if a.conductor == b.conductor:
            return a, b
        n = _lcm(a.conductor, b.conductor)
        if n > _conductor_cap:
            raise ConductorOverflow(f"conductor {n} exceeds cap {_conductor_cap}")
        return a.embed(n), b.embed(n)

    def _addsub(self, other, sign):
        a, b = CycloReal._common(self, other)
        if a._den == b._den:
            nums = [x + sign * y for x, y in zip(a._nums, b._nums)]
            return CycloReal._raw(a.conductor, nums, a._den)
        den = _lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        nums = [x * fa + sign * y * fb for x, y in zip(a._nums, b._nums)]
        return CycloReal._raw(a.conductor, nums, den)

    def __add__(self, other):
        other = CycloReal._coerce(other)
        if other is None:
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = CycloReal._coerce(other)
        if other is None:
            return NotImplemented
        return self._addsub(other, -1)

    def __rsub__(self, other):
        other = CycloReal._coerce(other)
        if other is None:
            return NotImplemented
        return other._addsub(self, -1)

    def __neg__(self):
        return CycloReal._raw(self.conductor, [-c for c in self._nums], self._den)

    def __pos__(self):
        return self

    def scale(self, q: Number) -> "CycloReal":
        q = Fraction(q)
        return CycloReal._raw(self.conductor, [c * q.numerator for c in self._nums], self._den * q.denominator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CycloReal):
            return NotImplemented
        a, b = CycloReal._common(self, other)
        if a.conductor == 1:
            return CycloReal._raw(1, [a._nums[0] * b._nums[0]], a._den * b._den)
        return CycloReal._raw(a.conductor, _mul_nums(a.conductor, a._nums, b._nums), a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = CycloReal.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison --------------------------------------------------------------

    def __eq__(self, other):
        other = CycloReal._coerce(other)
        if other is None:
            return NotImplemented
        if self.conductor == other.conductor:
            return self._nums == other._nums and self._den == other._den
        try:
            a, b = CycloReal._common(self, other)
        except ConductorOverflow:
            return self.minimized()._canon() == other.minimized()._canon()
        return a._nums == b._nums and a._den == b._den

    def _canon(self):
        return (self.conductor, self._nums, self._den)

    def __hash__(self):
        key = self._key
        if key is None:
            q = self.as_fraction()
            # rationals hash like Fraction so they mix with int and Fraction in sets
            key = hash(q) if q is not None else hash(self.minimized()._canon())
            object.__setattr__(self, "_key", key)
        return key

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self._nums[0] > 0 else -1
        value, err = _float_eval(self)
        if abs(value) > 4 * err:
            return 1 if value > 0 else -1
        return _mp_sign(self)

    def _cmp(self, other) -> int:
        other = CycloReal._coerce(other)
        if other is None:
            raise TypeError(f"cannot compare CycloReal with {type(other).__name__}")
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return _float_eval(self)[0]

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        q = self.as_fraction()
        if q is not None:
            return f"CycloReal({q})"
        return f"CycloReal(N={self.conductor}, {[str(c) for c in self.coeffs]} ~ {float(self):.12g})"


def _mul_nums(n: int, x: Sequence[int], y: Sequence[int]) -> list[int]:
    field = _field(n)
    phi = field.phi
    mx = max(abs(c) for c in x)
    my = max(abs(c) for c in y)
    if mx == 0 or my == 0:
        return [0] * phi
    # digit width for the raw product, then for the folded sum
    conv_bound = mx * my * phi
    bits = max(conv_bound.bit_length() + 2, 8)
    prod = _pack(x, bits) * _pack(y, bits)
    digits = _unpack(prod, bits, 2 * phi - 1)
    low, high = digits[:phi], digits[phi:]
    if not any(high):
        return low
    fold_bound = conv_bound * (1 + field.max_table * phi)
    fbits = max(fold_bound.bit_length() + 2, 8)
    fbits = ((fbits + 63) // 64) * 64  # quantize so packed tables get reused
    acc = _pack(low, fbits)
    for h, packed in zip(high, field.packed_powers(fbits)):
        if h:
            acc += h * packed
    return _unpack(acc, fbits, phi)


@lru_cache(maxsize=None)
def _descent_data(n: int, m: int):
    """Pivot columns and inverse matrix for projecting Q(zeta_n) onto the
    image of Q(zeta_m), m | n."""
    big = _field(n)
    small_phi = totient(m)
    step = n // m
    rows = [list(big.powers[(j * step) % n]) for j in range(small_phi)]
    # Gaussian elimination on the transpose to find independent columns
    mat = [[Fraction(rows[j][i]) for j in range(small_phi)] for i in range(big.phi)]
    pivots = []
    basis = []
    for i, col in enumerate(mat):
        vec = list(col)
        for p_idx, (bvec, lead) in enumerate(basis):
            if vec[lead]:
                f = vec[lead] / bvec[lead]
                vec = [v - f * b for v, b in zip(vec, bvec)]
        lead = next((t for t, v in enumerate(vec) if v), None)
        if lead is not None:
            basis.append((vec, lead))
            pivots.append(i)
            if len(pivots) == small_phi:
                break
    sub = [[Fraction(rows[j][i]) for j in range(small_phi)] for i in pivots]
    inv = _invert(sub)
    return tuple(pivots), inv, rows


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _descend(x: CycloReal, m: int) -> Optional[CycloReal]:
    n = x.conductor
    if m == n:
        return x
    pivots, inv, rows = _descent_data(n, m)
    target = [x._nums[i] for i in pivots]
    coords = [sum(inv[c][r] * t for r, t in enumerate(target) if t) for c in range(len(inv))]
    # verify the candidate reproduces every coefficient
    for i in range(len(x._nums)):
        if sum(c * rows[j][i] for j, c in enumerate(coords) if c) != x._nums[i]:
            return None
    den = reduce(_lcm, (c.denominator for c in coords), 1)
    nums = [c.numerator * (den // c.denominator) for c in coords]
    return CycloReal._raw(m, nums, den * x._den)


@lru_cache(maxsize=None)
def _cos_table(n: int) -> tuple[float, ...]:
    return tuple(math.cos(2 * math.pi * j / n) for j in range(totient(n)))


def _float_eval(x: CycloReal) -> tuple[float, float]:
    """Value and a conservative absolute error bound."""
    if x.is_rational():
        v = float(Fraction(x._nums[0], x._den))
        return v, abs(v) * 1e-16
    table = _cos_table(x.conductor)
    terms = [c * t for c, t in zip(x._nums, table) if c]
    scale = sum(abs(c) for c in x._nums)
    total = math.fsum(terms)
    value = total / x._den
    err = 8e-16 * scale / x._den * (1 + len(terms))
    return value, err


def _mp_sign(x: CycloReal) -> int:
    import mpmath

    dps = 40
    while True:
        with mpmath.workdps(dps):
            n = x.conductor
            total = mpmath.fsum(
                c * mpmath.cos(2 * mpmath.pi * j / n) for j, c in enumerate(x._nums) if c
            )
            scale = sum(abs(c) for c in x._nums)
            bound = mpmath.mpf(scale) * mpmath.mpf(10) ** (-dps + 5)
            if abs(total) > bound:
                return 1 if total > 0 else -1
        dps *= 2
        if dps > 5000:
            raise ArithmeticError("could not determine sign of a nonzero element")


# ---------------------------------------------------------------------------
# module-level operations


def _root_power(n: int, e: int) -> tuple[int, list[int]]:
    """zeta_n^e as (canonical conductor, numerator vector)."""
    e %= n
    if n % 4 == 2:
        m = n // 2
        sign = -1 if e % 2 else 1
        vec = _field(m).powers[(e * (m + 1) // 2) % m] if m > 1 else (1,)
        return m, [sign * c for c in vec]
    return n, list(_field(n).powers[e])


def two_cos(a: Union[RationalAngle, Number]) -> CycloReal:
    """Exact 2*cos(a) for a rational angle a (a given in units of pi)."""
    if not isinstance(a, RationalAngle):
        a = RationalAngle.from_fraction(a)
    p, q = a.num, a.den
    n = 2 * q
    conductor = _canonical_conductor(n)
    if conductor > _conductor_cap:
        raise ConductorOverflow(f"conductor {conductor} exceeds cap {_conductor_cap}")
    m, v1 = _root_power(n, p)
    _, v2 = _root_power(n, -p)
    value = CycloReal._raw(m, [s + t for s, t in zip(v1, v2)])
    if value.is_rational():
        return CycloReal._raw(1, [value._nums[0]], value._den)
    return value


def embed(a: CycloReal, new_conductor: int) -> CycloReal:
    return a.embed(new_conductor)


def to_float(v: Union[CycloReal, Number]) -> float:
    return float(v)


def as_two_cos(v: Union[CycloReal, Number]) -> Optional[RationalAngle]:
    """Rational angle a in [0, pi] with v = 2cos(a), or None if there is none.

    Candidates are 2cos(2 pi k / M) with M = lcm(2N, 12) for the conductor N
    of v: any root of unity whose real part lies in Q(zeta_N) has order
    dividing 2N, except the orders 1, 2, 3, 4, 6 that give rational values.
    """
    if not isinstance(v, CycloReal):
        v = CycloReal.rational(v)
    value = float(v)
    if value > 2 + 1e-9 or value < -2 - 1e-9:
        return None
    q = v.as_fraction()
    if q is not None:
        table = {Fraction(2): (0, 1), Fraction(1): (1, 3), Fraction(0): (1, 2),
                 Fraction(-1): (2, 3), Fraction(-2): (1, 1)}
        hit = table.get(q)
        return RationalAngle(*hit) if hit else None
    # any field holding v works here; minimizing first costs more than it saves
    base = v
    m = _lcm(2 * base.conductor, 12)
    guess = math.acos(max(-1.0, min(1.0, value / 2))) * m / (2 * math.pi)
    k0 = int(round(guess))
    for k in sorted(range(k0 - 2, k0 + 3), key=lambda t: abs(t - guess)):
        if k < 0 or 2 * k > m:
            continue
        if abs(2 * math.cos(2 * math.pi * k / m) - value) > 1e-7:
            continue
        angle = RationalAngle(2 * k, m)
        if two_cos(angle) == base:
            return angle
    return None
