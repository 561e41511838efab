from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import DomainError
from ..exact import exact, fmt
from .continuous import ContinuousDes


@dataclass(frozen=True)
class PendulumDes(ContinuousDes):
    """Inverted pendulum on a fixed pivot, ``theta'' = g/l sin(theta) + u/(m l^2)``.

    ``theta = 0`` is the upright (unstable) position. State is
    ``(theta, theta_dot)``; the torque ``u`` is the event value, held for the
    run. Output is the full state.
    """

    m: float = 1.0
    l: float = 1.0
    g: float = 9.81
    h: Fraction = Fraction(1, 1000)
    alphabet: frozenset = field(default=frozenset({-1, 0, 1}))

    dim = 2
    output_arity = 2

    def __post_init__(self):
        object.__setattr__(self, "h", exact(self.h))
        if self.h <= 0 or self.m <= 0 or self.l <= 0:
            raise DomainError("pendulum parameters must be positive")
        alphabet = frozenset(exact(a) for a in self.alphabet)
        if not alphabet <= {-1, 0, 1} or 0 not in alphabet:
            raise DomainError("pendulum alphabet must be a subset of {-1, 0, 1} containing 0")
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def base_step(self) -> Fraction:
        return self.h

    @property
    def model_id(self) -> str:
        return f"pendulum:m={self.m!r},l={self.l!r},g={self.g!r},h={fmt(self.h)}"

    def vector_field(self, u: float):
        a = self.g / self.l
        b = u / (self.m * self.l**2)

        def f(x: np.ndarray) -> np.ndarray:
            return np.array([x[1], a * math.sin(x[0]) + b])

        return f

    def observe(self, state) -> tuple[float, ...]:
        return (float(state[0]), float(state[1]))

    def energy(self, state) -> float:
        """Conserved quantity of the unforced motion."""
        return 0.5 * state[1] ** 2 + self.g / self.l * math.cos(state[0])
