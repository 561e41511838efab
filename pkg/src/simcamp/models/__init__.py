from .cartpole import CartPoleDes
from .counter import CounterDes, counter
from .pendulum import PendulumDes
from .registry import model_from_id
from .rk4 import rk4_integrate, rk4_step

__all__ = [
    "CartPoleDes",
    "CounterDes",
    "PendulumDes",
    "counter",
    "model_from_id",
    "rk4_integrate",
    "rk4_step",
]
