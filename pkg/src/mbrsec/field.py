"""Prime fields F_q and their elements."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BadParams, DivisionByZero, FieldMismatch, NotPrime

MAX_MODULUS = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class FieldSpec:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2 or self.q >= MAX_MODULUS:
            raise BadParams(f"modulus must be an integer in [2, 2^20), got {self.q!r}")
        if not is_prime(self.q):
            raise NotPrime(f"{self.q} is not prime", q=self.q)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.q, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.q)]

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        return pow(a, self.q - 2, self.q)

    def __repr__(self):
        return f"FieldSpec({self.q})"


def field_new(q: int) -> FieldSpec:
    return FieldSpec(q)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise BadParams(f"{self.value} is not reduced mod {self.field.q}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"F_{self.field.q} vs F_{other.field.q}")
            return other.value
        if isinstance(other, int):
            return other % self.field.q
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(v % self.field.q, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * self.field.inv(o))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return self._wrap(pow(self.value, e, self.field.q))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __repr__(self):
        return f"{self.value} (mod {self.field.q})"


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inv()
