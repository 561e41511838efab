from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..des import DesModel
from ..errors import CodecError, DomainError
from ..exact import Number, exact, fmt


@dataclass(frozen=True)
class CounterDes(DesModel):
    """Counter modulo ``modulus`` that ticks once per base step.

    ``phi(d, k, p) = (k + p + d / step) mod modulus``. The event is a true
    impulse: it is added once, at the start of the run.
    """

    modulus: int
    step: Fraction = Fraction(1)
    alphabet: frozenset = field(default=frozenset({0, 1, 2}))

    holds_input = False
    output_arity = 1

    def __post_init__(self):
        if self.modulus < 2:
            raise DomainError("counter modulus must be at least 2")
        object.__setattr__(self, "step", exact(self.step))
        alphabet = frozenset(exact(a) for a in self.alphabet)
        if Fraction(0) not in alphabet or any(a.denominator != 1 for a in alphabet):
            raise DomainError("counter alphabet must be integers containing 0")
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def base_step(self) -> Fraction:
        return self.step

    @property
    def model_id(self) -> str:
        values = "|".join(fmt(a) for a in sorted(self.alphabet))
        return f"counter:N={self.modulus},step={fmt(self.step)},alphabet={values}"

    def encode(self, state: int) -> bytes:
        return int(state).to_bytes(8, "big", signed=True)

    def decode(self, key: bytes) -> int:
        if len(key) != 8:
            raise CodecError(f"counter keys are 8 bytes, got {len(key)}")
        k = int.from_bytes(key, "big", signed=True)
        if not 0 <= k < self.modulus:
            raise CodecError(f"counter state {k} outside 0..{self.modulus - 1}")
        return k

    def evolve(self, state: int, event: Fraction, ticks: int) -> int:
        return (state + int(event) + ticks) % self.modulus

    def observe(self, state: int) -> tuple[float, ...]:
        return (float(state),)

    def parse_state(self, literal: str) -> bytes:
        try:
            k = int(literal)
        except ValueError:
            raise CodecError(f"bad counter state literal {literal!r}") from None
        if not 0 <= k < self.modulus:
            raise CodecError(f"counter state {k} outside 0..{self.modulus - 1}")
        return self.encode(k)

    def format_state(self, key: bytes) -> str:
        return str(self.decode(key))


def counter(modulus: int, step: Number = 1, alphabet=(0, 1, 2)) -> CounterDes:
    return CounterDes(modulus, exact(step), frozenset(alphabet))
