"""Model identifiers such as ``counter:N=7,step=1`` or ``cartpole:default``."""
from __future__ import annotations

from ..des import DesModel
from ..errors import FormatError
from ..exact import exact
from .cartpole import CartPoleDes
from .counter import CounterDes
from .pendulum import PendulumDes


def _params(text: str) -> dict[str, str]:
    if text in ("", "default"):
        return {}
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise FormatError(f"bad model parameter {item!r}")
        out[key.strip()] = value.strip()
    return out


def model_from_id(model_id: str) -> DesModel:
    name, _, rest = model_id.strip().partition(":")
    params = _params(rest)
    try:
        if name == "counter":
            alphabet = params.pop("alphabet", "0|1|2")
            model = CounterDes(
                int(params.pop("N")),
                exact(params.pop("step", "1")),
                frozenset(exact(a) for a in alphabet.split("|")),
            )
        elif name == "pendulum":
            kwargs = {k: float(params.pop(k)) for k in ("m", "l", "g") if k in params}
            if "h" in params:
                kwargs["h"] = exact(params.pop("h"))
            if "alphabet" in params:
                kwargs["alphabet"] = frozenset(exact(a) for a in params.pop("alphabet").split("|"))
            model = PendulumDes(**kwargs)
        elif name == "cartpole":
            kwargs = {}
            if "h" in params:
                kwargs["h"] = exact(params.pop("h"))
            model = CartPoleDes(**kwargs)
        else:
            raise FormatError(f"unknown model {name!r}")
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad model id {model_id!r}: {exc}") from None
    if params:
        raise FormatError(f"unknown parameters for {name}: {', '.join(params)}")
    return model
