"""Triangular norms and their residua.

Three norms are supported: Zadeh (``min``), Lukasiewicz and product. The
same norm is used both to bound similarity along chains of worlds and to
combine distribution values in the generalized modus ponens.
"""

from __future__ import annotations

import enum

import numpy as np

#: Global comparison tolerance for every ε-relaxed check in the package.
EPS = 1e-9


def unit_value(x, eps: float = EPS) -> float:
    """Validate ``x`` as a degree in [0, 1].

    Values within ``eps`` outside the interval are snapped to the bound;
    anything further out raises ``ValueError``.
    """
    x = float(x)
    if not (-eps <= x <= 1.0 + eps):
        raise ValueError(f"value {x!r} is outside [0, 1]")
    return min(1.0, max(0.0, x))


class TNorm(enum.Enum):
    MIN = "min"
    LUKASIEWICZ = "lukasiewicz"
    PRODUCT = "product"

    @classmethod
    def parse(cls, name: str | "TNorm") -> "TNorm":
        if isinstance(name, TNorm):
            return name
        key = name.strip().lower()
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown t-norm {name!r} (expected one of {choices})") from None

    def apply(self, a, b):
        """Combine two degrees (scalars or broadcastable arrays)."""
        if self is TNorm.MIN:
            out = np.minimum(a, b)
        elif self is TNorm.LUKASIEWICZ:
            out = np.maximum(np.add(a, b) - 1.0, 0.0)
        else:
            out = np.multiply(a, b)
        return float(out) if np.ndim(out) == 0 else out

    def residuum(self, a, b, eps: float = EPS):
        """Return ``sup{c : apply(b, c) <= a}`` in closed form.

        The result is exactly 1 whenever ``b <= a + eps``; otherwise

        * min: ``a``
        * lukasiewicz: ``1 - b + a``
        * product: ``a / b``
        """
        a_arr = np.asarray(a, dtype=float)
        b_arr = np.asarray(b, dtype=float)
        full = b_arr <= a_arr + eps
        if self is TNorm.MIN:
            partial = a_arr
        elif self is TNorm.LUKASIEWICZ:
            partial = 1.0 - b_arr + a_arr
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                partial = np.where(full, 1.0, a_arr / np.where(b_arr == 0.0, 1.0, b_arr))
        out = np.where(full, 1.0, np.minimum(partial, 1.0))
        return float(out) if out.ndim == 0 else out

    def fold(self, values) -> float:
        """Combine any number of degrees; the empty combination is 1."""
        out = 1.0
        for v in values:
            out = self.apply(out, v)
        return out

    def __str__(self) -> str:
        return self.value


_ALIASES = {"zadeh": "min", "luk": "lukasiewicz", "prod": "product"}

TNORM_NAMES = tuple(t.value for t in TNorm)


def apply(norm: TNorm | str, a, b):
    return TNorm.parse(norm).apply(a, b)


def residuum(norm: TNorm | str, a, b, eps: float = EPS):
    return TNorm.parse(norm).residuum(a, b, eps)
