"""Shared plumbing for ODE-backed models integrated with fixed-step RK4."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..des import DesModel
from ..errors import CodecError
from .rk4 import rk4_integrate


class ContinuousDes(DesModel):
    """Base for models whose state is a float64 vector.

    Keys are the little-endian IEEE-754 bit pattern of the vector. The event
    is held as a constant input for the whole run.
    """

    holds_input = True
    dim: int

    def encode(self, state) -> bytes:
        arr = np.asarray(state, dtype="<f8")
        if arr.shape != (self.dim,):
            raise CodecError(f"expected a {self.dim}-vector, got shape {arr.shape}")
        return arr.tobytes()

    def decode(self, key: bytes) -> np.ndarray:
        if len(key) != 8 * self.dim:
            raise CodecError(f"expected {8 * self.dim} key bytes, got {len(key)}")
        arr = np.frombuffer(key, dtype="<f8").astype(float)
        if not np.all(np.isfinite(arr)):
            raise CodecError("state key holds non-finite values")
        return arr

    def parse_state(self, literal: str) -> bytes:
        """Accept ``0x<hex bit pattern>`` or a comma-separated decimal vector."""
        text = literal.strip()
        if text.startswith("0x"):
            try:
                key = bytes.fromhex(text[2:])
            except ValueError:
                raise CodecError(f"bad hex state literal {literal!r}") from None
            self.decode(key)
            return key
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            raise CodecError(f"bad state literal {literal!r}") from None
        return self.encode(values)

    def format_state(self, key: bytes) -> str:
        # repr round-trips float64 exactly
        return ",".join(repr(float(v)) for v in self.decode(key))

    def evolve(self, state: np.ndarray, event: Fraction, ticks: int) -> np.ndarray:
        f = self.vector_field(float(event))
        return rk4_integrate(f, state, float(self.base_step), ticks)

    def vector_field(self, u: float):
        raise NotImplementedError
