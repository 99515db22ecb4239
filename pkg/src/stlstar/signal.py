"""Finite piecewise-linear signals."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence

import numpy as np

from .formula import Formula, SignalSchema, required_length


class SignalError(ValueError):
    pass


class NonMonotoneTime(SignalError):
    pass


class DomainError(SignalError):
    pass


@dataclass(frozen=True)
class ShortSignal:
    needed: Fraction
    have: Fraction

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"signal of length {float(self.have):g} is shorter than the required {float(self.needed):g}"


class Signal:
    """Piecewise-linear signal on ``[0, r]`` with explicit breakpoints.

    ``times`` are exact rationals starting at 0; ``values`` is an
    ``(len(times), order)`` float array.  Between breakpoints every component
    is the linear interpolant.
    """

    def __init__(self, schema: SignalSchema | Sequence[str], times: Iterable, values,
                 offset: Fraction = Fraction(0)):
        if not isinstance(schema, SignalSchema):
            schema = SignalSchema(schema)
        ts = tuple(_to_fraction(t) for t in times)
        vals = np.asarray(values, dtype=float)
        if vals.ndim == 1 and schema.order == 1:
            vals = vals.reshape(-1, 1)
        if len(ts) < 2:
            raise SignalError("a signal needs at least 2 samples")
        if vals.shape != (len(ts), schema.order):
            raise SignalError(f"values have shape {vals.shape}, expected {(len(ts), schema.order)}")
        if not np.all(np.isfinite(vals)):
            raise SignalError("signal values must be finite")
        if ts[0] != 0:
            raise SignalError("signal times must start at 0")
        for k in range(1, len(ts)):
            if ts[k] <= ts[k - 1]:
                raise NonMonotoneTime(f"time {ts[k]} at row {k} does not exceed {ts[k - 1]}")
        self.schema = schema
        self.times = ts
        self.values = vals
        self.values.setflags(write=False)
        self.offset = Fraction(offset)
        self.tf = np.array([float(t) for t in ts])
        self.tf.setflags(write=False)

    @property
    def length(self) -> Fraction:
        return self.times[-1]

    @property
    def order(self) -> int:
        return self.schema.order

    @property
    def segments(self) -> int:
        return len(self.times) - 1

    def __repr__(self) -> str:
        return f"Signal({list(self.schema.names)}, {len(self.times)} samples, length {float(self.length):g})"

    def column(self, var: int | str) -> np.ndarray:
        return self.values[:, self._var(var)]

    def _var(self, var: int | str) -> int:
        if isinstance(var, str):
            try:
                return self.schema.index(var)
            except KeyError:
                raise SignalError(f"unknown variable {var!r}") from None
        if not 0 <= var < self.order:
            raise SignalError(f"variable index {var} out of range")
        return var

    def value_at(self, var: int | str, t) -> float:
        """Exact interpolant of one component; outside ``[0, |s|]`` raises DomainError."""
        i = self._var(var)
        tq = _to_fraction(t) if not isinstance(t, float) else None
        tt = float(t)
        if (tq is not None and (tq < 0 or tq > self.length)) or (tq is None and not 0.0 <= tt <= float(self.length)):
            raise DomainError(f"time {t} outside [0, {self.length}]")
        k = int(np.searchsorted(self.tf, tt, side="right")) - 1
        k = min(max(k, 0), self.segments - 1)
        t0, t1 = self.tf[k], self.tf[k + 1]
        v0, v1 = self.values[k, i], self.values[k + 1, i]
        if tt == t0:
            return float(v0)
        if tt == t1:
            return float(v1)
        return float(v0 + (tt - t0) * (v1 - v0) / (t1 - t0))

    def sample(self, ts) -> np.ndarray:
        """All components at the float times ``ts``; shape ``(len(ts), order)``."""
        ts = np.asarray(ts, dtype=float)
        return np.stack([np.interp(ts, self.tf, self.values[:, i]) for i in range(self.order)], axis=1)

    def segment_partition(self) -> list[tuple[Fraction, Fraction]]:
        return [(self.times[k], self.times[k + 1]) for k in range(self.segments)]

    def refine(self, factor: int = 2) -> "Signal":
        """Insert ``factor - 1`` interpolated points inside every segment."""
        if factor < 1:
            raise ValueError("refinement factor must be >= 1")
        ts: list[Fraction] = []
        rows = []
        for k in range(self.segments):
            t0, t1 = self.times[k], self.times[k + 1]
            for j in range(factor):
                ts.append(t0 + (t1 - t0) * Fraction(j, factor))
                rows.append(self.values[k] + (self.values[k + 1] - self.values[k]) * (j / factor))
        ts.append(self.times[-1])
        rows.append(self.values[-1])
        return Signal(self.schema, ts, np.array(rows), self.offset)

    def truncate(self, length) -> "Signal":
        """Restrict to ``[0, length]``, interpolating the new endpoint."""
        L = _to_fraction(length)
        if L <= 0 or L > self.length:
            raise DomainError(f"cannot truncate to {L}")
        keep = [t for t in self.times if t < L]
        rows = [self.values[k] for k in range(len(keep))]
        rows.append(self.sample([float(L)])[0])
        return Signal(self.schema, keep + [L], np.array(rows), self.offset)

    # -- serialization --------------------------------------------------------

    def to_csv(self, stream: IO[str] | None = None) -> str | None:
        buf = stream if stream is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time", *self.schema.names])
        for t, row in zip(self.times, self.values):
            w.writerow([_fmt_time(t + self.offset), *(repr(float(v)) for v in row)])
        return buf.getvalue() if stream is None else None

    def to_json(self) -> dict:
        return {
            "schema": list(self.schema.names),
            "times": [_fmt_time(t) for t in self.times],
            "values": self.values.tolist(),
            "offset": _fmt_time(self.offset),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Signal":
        if isinstance(data, str):
            data = json.loads(data)
        times = [_to_fraction(t) for t in data["times"]]
        return _build(data["schema"], times, data["values"])


def _to_fraction(t) -> Fraction:
    if isinstance(t, Fraction):
        return t
    if isinstance(t, float):
        if not math.isfinite(t):
            raise SignalError(f"non-finite time {t}")
        return Fraction(repr(t))
    return Fraction(t)


def _fmt_time(t: Fraction) -> str:
    if t.denominator == 1:
        return str(t.numerator)
    return repr(float(t)) if _terminating(t) is None else _terminating(t)


def _terminating(q: Fraction) -> str | None:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return None
    digits = 0
    while (q * 10**digits).denominator != 1:
        digits += 1
    sign = "-" if q < 0 else ""
    n = abs(q.numerator) * 10**digits // q.denominator
    s = f"{n:0{digits + 1}d}"
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _build(names, times: list[Fraction], values) -> Signal:
    if len(times) < 2:
        raise SignalError("a signal needs at least 2 samples")
    for k in range(1, len(times)):
        if times[k] <= times[k - 1]:
            raise NonMonotoneTime(f"time {times[k]} at row {k} does not exceed {times[k - 1]}")
    t0 = times[0]
    return Signal(names, [t - t0 for t in times], values, offset=t0)


def load_csv(source: str | os.PathLike | IO[str]) -> Signal:
    """Read ``time,var1,...,varn`` CSV; times are shifted so the first sample is 0."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return load_csv(fh)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SignalError("empty CSV") from None
    if len(header) < 2 or header[0].lower() != "time":
        raise SignalError("CSV header must be 'time,var1,...'")
    names = header[1:]
    times: list[Fraction] = []
    rows: list[list[float]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise SignalError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            times.append(Fraction(row[0].strip()))
            rows.append([float(c) for c in row[1:]])
        except ValueError:
            raise SignalError(f"line {lineno}: non-numeric cell") from None
    return _build(names, times, np.array(rows, dtype=float).reshape(len(rows), len(names)))


def check_length(s: Signal, f: Formula) -> bool | ShortSignal:
    """``True`` when ``s`` is long enough for ``f``, else a falsy :class:`ShortSignal`."""
    need = required_length(f)
    if s.length >= need:
        return True
    return ShortSignal(need, s.length)
