"""Step-size schedules for the dual update.

A schedule is a positive nonincreasing sequence ``alpha(k)`` consumed at round
``k`` starting from 0. Two admissibility flags travel with each schedule:

``robbins_monro``
    The classic conditions for dual convergence hold: ``sum alpha = inf`` and
    ``sum alpha**2 < inf``. The ``1/sqrt(k)`` schedule fails the second
    condition and is flagged False even though the rate bound is stated for
    it.
``normalized``
    ``alpha(0) == 1``, required verbatim by the consensus-error and rate
    bounds. Non-normalized schedules still simulate fine; bound evaluation
    refuses them.
"""

from __future__ import annotations

import math

import numpy as np


class StepSchedule:
    """Base class; concrete schedules implement ``alpha(k)``."""

    name = "abstract"
    robbins_monro = False

    def alpha(self, k):
        raise NotImplementedError

    @property
    def normalized(self):
        return self.alpha(0) == 1.0

    def alphas(self, count):
        """First ``count`` values as an array, validated positive nonincreasing."""
        vals = np.array([self.alpha(k) for k in range(count)], dtype=float)
        if count and (vals <= 0.0).any():
            k = int(np.argmax(vals <= 0.0))
            raise ValueError(f"step size must be positive, got alpha({k}) = {vals[k]}")
        if count > 1 and (np.diff(vals) > 0.0).any():
            k = int(np.argmax(np.diff(vals) > 0.0))
            raise ValueError(
                f"step size must be nonincreasing, got alpha({k}) = {vals[k]} "
                f"< alpha({k + 1}) = {vals[k + 1]}"
            )
        return vals

    def __repr__(self):
        return f"{type(self).__name__}()"


class RecipSqrt(StepSchedule):
    """``alpha(0) = 1``, ``alpha(k) = 1/sqrt(k)``.

    The schedule of the rate bound. Its squared series diverges, so it is not
    flagged admissible for plain dual convergence.
    """

    name = "recip-sqrt"
    robbins_monro = False

    def alpha(self, k):
        return 1.0 if k == 0 else 1.0 / math.sqrt(k)


class Recip(StepSchedule):
    """``alpha(0) = 1``, ``alpha(k) = 1/k``."""

    name = "recip"
    robbins_monro = True

    def alpha(self, k):
        return 1.0 if k == 0 else 1.0 / k

class PowerLaw(StepSchedule):
    """``alpha(0) = c``, ``alpha(k) = c / k**p`` with ``c > 0``, ``p in (0.5, 1]``.

    The exponent range guarantees the series conditions; ``c != 1`` makes the
    schedule non-normalized for bound checks.
    """

    robbins_monro = True

    def __init__(self, c, p):
        c = float(c)
        p = float(p)
        if c <= 0.0:
            raise ValueError(f"power-law coefficient must be positive, got {c}")
        if not (0.5 < p <= 1.0):
            raise ValueError(f"power-law exponent must lie in (0.5, 1], got {p}")
        self.c = c
        self.p = p
        self.name = f"powerlaw:{c:g}:{p:g}"

    def alpha(self, k):
        return self.c if k == 0 else self.c / k**self.p

    def __repr__(self):
        return f"PowerLaw(c={self.c!r}, p={self.p!r})"


class Custom(StepSchedule):
    """Schedule backed by a user sequence oracle ``fn(k) -> float``.

    Whether the series conditions hold cannot be decided from an oracle, so
    the caller declares ``robbins_monro``; positivity and monotonicity are
    validated on the consumed prefix.
    """

    name = "custom"

    def __init__(self, fn, robbins_monro=False):
        self._fn = fn
        self.robbins_monro = bool(robbins_monro)

    def alpha(self, k):
        return float(self._fn(k))


def parse_schedule(spec):
    """Parse a schedule spec string: ``recip-sqrt``, ``recip``, or ``powerlaw:C:P``."""
    parts = spec.split(":")
    head = parts[0].strip().lower().replace("_", "-")
    if head in ("recip-sqrt", "recipsqrt") and len(parts) == 1:
        return RecipSqrt()
    if head == "recip" and len(parts) == 1:
        return Recip()
    if head == "powerlaw":
        if len(parts) != 3:
            raise ValueError(f"power-law spec must be 'powerlaw:C:P', got {spec!r}")
        try:
            return PowerLaw(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad power-law spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown schedule spec {spec!r}")
