"""Capacity caps, overridable through the BANDIT_LDIM_CAPS environment variable.

The variable holds a comma-separated ``key=value`` list, e.g.
``BANDIT_LDIM_CAPS="full_class=10000,experts=50000"``.
"""

import dataclasses
import os

from .errors import InputError

ENV_VAR = "BANDIT_LDIM_CAPS"


@dataclasses.dataclass(frozen=True)
class Caps:
    full_class: int = 4096  # hypotheses produced by gen_full
    experts: int = 20000  # experts in one pool
    sg_domain: int = 64  # |X| * |Y| of the loss class domain
    oracle_depth: int = 8  # depth cap of the exhaustive BL oracle


def get_caps(env=None) -> Caps:
    raw = (os.environ if env is None else env).get(ENV_VAR, "").strip()
    if not raw:
        return Caps()
    known = {f.name for f in dataclasses.fields(Caps)}
    values = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise InputError(f"{ENV_VAR}: bad entry {item!r} (keys: {', '.join(sorted(known))})")
        try:
            values[key] = int(value)
        except ValueError:
            raise InputError(f"{ENV_VAR}: {key} must be an integer, got {value!r}") from None
        if values[key] < 0:
            raise InputError(f"{ENV_VAR}: {key} must be non-negative")
    return Caps(**values)
