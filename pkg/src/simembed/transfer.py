"""Antisymmetric transfer functions applied to kernel differences.

The ramp family clamp(s*x, -1, 1) spans the clipped identity (slope 1) and,
as the slope grows, approaches the sign function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

DEFAULT_SLOPES = (1.0, 5.0, 10.0, 50.0, 100.0, 1000.0)


@dataclass(frozen=True)
class TransferFunction:
    kind: str  # ramp | sign | identity
    slope: float | None = None

    def __post_init__(self):
        if self.kind not in ("ramp", "sign", "identity"):
            raise ConfigError(f"unknown transfer kind: {self.kind!r}")
        if self.kind == "ramp":
            if self.slope is None or self.slope <= 0:
                raise ConfigError("ramp requires a positive slope")
        elif self.slope is not None:
            raise ConfigError(f"{self.kind} takes no slope")

    @property
    def label(self) -> str:
        if self.kind == "ramp":
            return f"ramp:{self.slope:g}"
        return self.kind


@dataclass(frozen=True)
class TransferFamily:
    members: tuple[TransferFunction, ...]

    def __post_init__(self):
        if not self.members:
            raise ConfigError("transfer family must be non-empty")
        if len(set(self.members)) != len(self.members):
            raise ConfigError("transfer family members must be distinct")


def apply(f: TransferFunction, x):
    """Evaluate f elementwise; scalars in, scalar out."""
    arr = np.asarray(x, dtype=np.float64)
    if f.kind == "ramp":
        out = np.clip(f.slope * arr, -1.0, 1.0)
    elif f.kind == "sign":
        out = np.sign(arr)
    else:  # identity, clipped to the admissible range
        out = np.clip(arr, -1.0, 1.0)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def default_family() -> TransferFamily:
    return TransferFamily(tuple(TransferFunction("ramp", s) for s in DEFAULT_SLOPES))


def c_f(f: TransferFunction, observed_values) -> float:
    """Spread of f over the kernel values actually observed on the data."""
    values = np.asarray(observed_values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ConfigError("c_f needs at least one observed kernel value")
    transformed = apply(f, values)
    return float(np.max(transformed) - np.min(transformed))


def parse_transfer(text: str) -> TransferFunction:
    """Parse 'ramp:<slope>' | 'sign' | 'identity'."""
    if text in ("sign", "identity"):
        return TransferFunction(text)
    if text.startswith("ramp:"):
        try:
            return TransferFunction("ramp", float(text.split(":", 1)[1]))
        except ValueError as exc:
            raise ConfigError(f"bad ramp slope in {text!r}") from exc
    raise ConfigError(f"cannot parse transfer {text!r}")


def parse_family(text: str) -> TransferFamily:
    """Parse 'default' | 'ramp:<s1,s2,...>'."""
    if text == "default":
        return default_family()
    if text.startswith("ramp:"):
        try:
            slopes = [float(s) for s in text.split(":", 1)[1].split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad slope list in {text!r}") from exc
        return TransferFamily(tuple(TransferFunction("ramp", s) for s in slopes))
    raise ConfigError(f"cannot parse family {text!r}")
