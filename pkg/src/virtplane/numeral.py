"""Redundant positional numeral systems and their canonical codecs.

A numeral system here is just a list of positive integer weights, index 0
being the least significant plane.  A value may have several bit strings
that sum to it; the canonical one is the lexicographically highest when
read from the most significant plane down.

Bit strings come in two spellings throughout the package:

* a ``str`` such as ``"100"`` is written most-significant plane first,
  exactly as it would be printed in a decomposition table;
* any other sequence (tuple, list, numpy array) is indexed by plane, so
  ``bits[0]`` is the least significant plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_BIT_DEPTH = 16


class EncodingError(ValueError):
    """Raised when a value has no representation in a numeral system."""


class Kind(enum.Enum):
    BINARY = "binary"
    NATURAL = "natural"
    PRIME = "prime"
    FIBONACCI = "fib"


# ---------------------------------------------------------------------------
# weight generators
# ---------------------------------------------------------------------------

def binary_weights(count):
    return [1 << i for i in range(count)]


def natural_weights(count):
    return [i + 1 for i in range(count)]


def first_primes(count):
    """First `count` primes by trial division."""
    primes = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def prime_weights(count):
    """1 followed by the primes 2, 3, 5, ..."""
    if count <= 0:
        return []
    return [1] + first_primes(count - 1)


def fibonacci_weights(count, p=1):
    """Distinct terms of the Fibonacci-p sequence, in increasing order.

    The sequence is F(0) = F(1) = 1 and F(n) = F(n-1) + F(n-p-1), with
    terms at negative indices taken as 0.  Repeated leading values are kept
    once, so for p = 1 this gives 1, 2, 3, 5, 8, ...
    """
    if p < 1:
        raise ValueError(f"Fibonacci-p requires p >= 1, got {p}")
    terms = [1, 1]
    weights = [1]
    while len(weights) < count:
        n = len(terms)
        back = terms[n - p - 1] if n - p - 1 >= 0 else 0
        terms.append(terms[n - 1] + back)
        if terms[-1] > weights[-1]:
            weights.append(terms[-1])
    return weights[:count]


# ---------------------------------------------------------------------------
# weight functions and systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightFunction:
    """A decomposition kind; ``p`` only matters for Fibonacci-p."""

    kind: Kind
    p: int = 1

    def __post_init__(self):
        if self.kind is Kind.FIBONACCI and self.p < 1:
            raise ValueError(f"Fibonacci-p requires p >= 1, got {self.p}")

    @classmethod
    def parse(cls, text):
        """Parse ``binary``, ``natural``, ``prime``, ``fib`` or ``fib:p``."""
        text = text.strip().lower()
        if text.startswith("fib"):
            _, _, rest = text.partition(":")
            try:
                p = int(rest) if rest else 1
            except ValueError:
                raise ValueError(f"bad Fibonacci order in {text!r}") from None
            return cls(Kind.FIBONACCI, p)
        try:
            return cls(Kind(text))
        except ValueError:
            raise ValueError(
                f"unknown system {text!r}; expected binary, natural, prime or fib:p"
            ) from None

    @property
    def name(self):
        if self.kind is Kind.FIBONACCI:
            return f"fib:{self.p}"
        return self.kind.value

    def weights(self, count):
        if self.kind is Kind.BINARY:
            return binary_weights(count)
        if self.kind is Kind.NATURAL:
            return natural_weights(count)
        if self.kind is Kind.PRIME:
            return prime_weights(count)
        return fibonacci_weights(count, self.p)

    def weights_up_to_sum(self, target):
        """Shortest weight prefix whose sum reaches `target`."""
        count = 1
        while sum(self.weights(count)) < target:
            count *= 2
        total = 0
        for m, w in enumerate(self.weights(count), 1):
            total += w
            if total >= target:
                return self.weights(m)


@dataclass(frozen=True)
class NumeralSystem:
    """An ``n``-plane weight vector sized to hold every ``k``-bit pixel value.

    Values handled as pixels are ``0..max_value``; this is ``2**k - 1``
    except for systems built with an explicit, too-small plane count.
    """

    weight_function: WeightFunction
    k: int
    weights: tuple
    max_value: int

    @property
    def kind(self):
        return self.weight_function.kind

    @property
    def name(self):
        return self.weight_function.name

    @property
    def n(self):
        return len(self.weights)

    @property
    def representable_max(self):
        return sum(self.weights)

    def weight(self, plane):
        check_plane(self, plane)
        return self.weights[plane]

    @cached_property
    def _reach(self):
        # reach[m] is a bitset: bit v set iff v is a sum of distinct weights[:m]
        reach = [1]
        for w in self.weights:
            reach.append(reach[-1] | (reach[-1] << w))
        return reach

    def feasible(self, m, v):
        """Whether `v` is a sum of distinct weights among the `m` lowest planes."""
        if v < 0:
            return False
        return bool((self._reach[m] >> v) & 1)

    @cached_property
    def canonical_codes(self):
        """Canonical bit matrix for every pixel value, shape (max_value + 1, n)."""
        table = np.zeros((self.max_value + 1, self.n), dtype=np.uint8)
        for v in range(self.max_value + 1):
            table[v] = canonical_encode(self, v).bits
        return table

    def __repr__(self):
        return f"NumeralSystem({self.name}, k={self.k}, n={self.n})"


def make_system(kind, k=8, planes=None):
    """Smallest system of the given kind that covers ``[0, 2**k - 1]``.

    `kind` is a :class:`WeightFunction`, a :class:`Kind` or a string
    accepted by :meth:`WeightFunction.parse`.  Passing `planes` fixes the
    plane count instead; pixel values are then capped at whatever those
    planes can represent (``make_system("natural", planes=3)`` is the
    3-plane system covering 0..6).
    """
    if isinstance(kind, str):
        kind = WeightFunction.parse(kind)
    elif isinstance(kind, Kind):
        kind = WeightFunction(kind)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_BIT_DEPTH:
        raise ValueError(f"bit depth must be an integer in [1, {MAX_BIT_DEPTH}], got {k!r}")
    k = int(k)
    top = (1 << k) - 1
    if planes is None:
        weights = kind.weights_up_to_sum(top)
    else:
        if planes < 1:
            raise ValueError(f"plane count must be positive, got {planes}")
        weights = kind.weights(planes)
        top = min(top, sum(weights))
    return NumeralSystem(kind, k, tuple(weights), top)


def natural_plane_count(k):
    """Closed-form plane count of the natural system for `k`-bit pixels.

    Smallest n with n(n+1)/2 >= 2**k - 1, i.e.
    ``ceil((-1 + sqrt(2**(k+3) - 7)) / 2)``, evaluated in exact integers.
    The discriminant is often quoted as ``2**(k+3) + 9``; that variant
    overshoots by one plane whenever ``2**k - 1`` is itself triangular
    (k = 1, 2, 4, 12).
    """
    d = 2 ** (k + 3) - 7
    r = math.isqrt(d)
    if r * r == d:
        return (r - 1) // 2
    return (r + 1) // 2


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VirtualRepresentation:
    bits: tuple
    value: int

    def __str__(self):
        return bits_to_string(self.bits)

    def __getitem__(self, plane):
        return self.bits[plane]


def bits_to_string(bits):
    return "".join(str(int(b)) for b in reversed(bits))


def as_bits(system, bits):
    """Normalize either bit spelling to a plane-indexed tuple of length n."""
    if isinstance(bits, VirtualRepresentation):
        bits = bits.bits
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"bit string may only contain 0 and 1: {bits!r}")
        bits = tuple(int(c) for c in reversed(bits))
    else:
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
    if len(bits) != system.n:
        raise ValueError(f"expected {system.n} bits, got {len(bits)}")
    return bits


def check_plane(system, plane):
    if not 0 <= plane < system.n:
        raise ValueError(f"plane {plane} out of range for {system!r}")


def canonical_encode(system, v):
    """Lexicographically highest bit string whose weighted sum is `v`.

    Greedy from the top plane: a plane is set whenever its weight fits and
    what is left can still be made from the planes below it.
    """
    if not 0 <= v <= system.representable_max or not system.feasible(system.n, v):
        raise EncodingError(f"{v} is not representable in {system!r}")
    bits = [0] * system.n
    remainder = v
    for i in range(system.n - 1, -1, -1):
        w = system.weights[i]
        if w <= remainder and system.feasible(i, remainder - w):
            bits[i] = 1
            remainder -= w
    assert remainder == 0
    return VirtualRepresentation(tuple(bits), v)


def decode(system, bits):
    bits = as_bits(system, bits)
    return sum(w for w, b in zip(system.weights, bits) if b)


def is_canonical(system, bits):
    """True iff `bits` is the canonical spelling of a value in ``[0, max_value]``."""
    bits = as_bits(system, bits)
    value = sum(w for w, b in zip(system.weights, bits) if b)
    if value > system.max_value:
        return False
    return canonical_encode(system, value).bits == bits


def feasibility_table(system):
    """Boolean table ``t[m, v]``: can `v` be written with the `m` lowest weights?

    Shape is ``(n + 1, representable_max + 1)``.
    """
    width = system.representable_max + 1
    table = np.zeros((system.n + 1, width), dtype=bool)
    for m, reach in enumerate(system._reach):
        row = np.frombuffer(reach.to_bytes((width + 7) // 8, "little"), dtype=np.uint8)
        table[m] = np.unpackbits(row, bitorder="little")[:width].astype(bool)
    return table


def representable_range(system):
    return 0, system.representable_max


def decomposition_table(system, lo=0, hi=None):
    """Rows of ``(value, canonical string)`` for ``lo..hi`` inclusive."""
    if hi is None:
        hi = system.max_value
    if not 0 <= lo <= hi <= system.max_value:
        raise ValueError(f"need 0 <= lo <= hi <= {system.max_value}, got lo={lo}, hi={hi}")
    return [(v, str(canonical_encode(system, v))) for v in range(lo, hi + 1)]
