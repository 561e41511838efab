from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exact import exact, fmt
from .continuous import ContinuousDes

NOMINAL_CART_MASS = 0.455

# State feedback on (w1, w2, w3, w4, z), force = -GAINS . state.
# Pole placement at -3..-7 on the linearisation about the upright rest state
# with the nominal cart mass.
GAINS = (-38.95885321, -17.7302197, -52.40597523, -8.87709201, -35.64862385)


@dataclass(frozen=True)
class CartPoleDes(ContinuousDes):
    """Closed-loop inverted pendulum on a cart with a cart-mass disturbance.

    State is ``(w1, w2, w3, w4, z)``: cart position and velocity, pendulum
    angle (0 is upright) and angular velocity, and the controller's integral
    of the cart position. Event ``d`` sets the cart mass to ``d + 0.455`` for
    the duration of the run. Output is ``(w1, w3)``.
    """

    pole_mass: float = 0.21
    pole_length: float = 0.305
    g: float = 9.81
    h: Fraction = Fraction(1, 1000)
    gains: tuple = GAINS

    alphabet = frozenset({Fraction(0), Fraction(1), Fraction(2)})
    dim = 5
    output_arity = 2

    def __post_init__(self):
        object.__setattr__(self, "h", exact(self.h))

    @property
    def base_step(self) -> Fraction:
        return self.h

    @property
    def model_id(self) -> str:
        if self == CartPoleDes():
            return "cartpole:default"
        return f"cartpole:h={fmt(self.h)}"

    def vector_field(self, d: float):
        cart = NOMINAL_CART_MASS + d
        m, l, g = self.pole_mass, self.pole_length, self.g
        k1, k2, k3, k4, k5 = self.gains

        def f(w: np.ndarray) -> np.ndarray:
            x, v, th, om, z = w
            force = -(k1 * x + k2 * v + k3 * th + k4 * om + k5 * z)
            s, c = math.sin(th), math.cos(th)
            acc = (force + m * s * (l * om * om - g * c)) / (cart + m * s * s)
            alpha = (g * s - acc * c) / l
            return np.array([v, acc, om, alpha, x])

        return f

    def observe(self, state) -> tuple[float, ...]:
        return (float(state[0]), float(state[2]))
