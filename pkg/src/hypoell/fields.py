"""Grid-sampled periodic functions and per-representation coefficient fields.

A GridFn holds uniform samples over one period and evaluates anywhere through
trigonometric interpolation, with spectral differentiation.  A
CoefficientField maps (rep label, row, column) mode keys to GridFns and is the
currency between the mode solver, the singular-solution recipes, and the decay
analysis.  Fields dump to and load from CSV with a metadata header.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError, ModelError
from .spectra import SpectralModel, Torus1, SU2
from .torusfn import TWO_PI, PeriodicFn

__all__ = ["GridFn", "CoefficientField", "grid_points"]

_EVAL_CHUNK = 1 << 14


def grid_points(n: int) -> np.ndarray:
    """The uniform grid t_j = 2*pi*j/n, j = 0..n-1."""
    return np.linspace(0.0, TWO_PI, n, endpoint=False)


class GridFn(PeriodicFn):
    """Periodic function represented by its values on the uniform grid.

    Evaluation between grid points uses the trigonometric interpolant; for an
    even number of samples the top (Nyquist) frequency is evaluated as a
    cosine so that real sample sets interpolate to real functions.
    """

    __slots__ = ("values", "_freqs", "_coeffs")

    def __init__(self, values: np.ndarray):
        v = np.asarray(values, dtype=complex)
        if v.ndim != 1 or v.size < 4:
            raise DomainError("GridFn needs a 1-D array of at least 4 samples")
        self.values = v
        self._freqs = None
        self._coeffs = None

    @classmethod
    def from_fn(cls, fn, grid_size: int) -> "GridFn":
        return cls(np.asarray(fn(grid_points(grid_size)), dtype=complex))

    @property
    def grid_size(self) -> int:
        return self.values.size

    @property
    def grid(self) -> np.ndarray:
        return grid_points(self.values.size)

    def _spectrum(self):
        if self._coeffs is None:
            n = self.values.size
            coeffs = np.fft.fft(self.values) / n
            freqs = np.fft.fftfreq(n, d=1.0 / n)  # integer frequencies
            self._freqs = freqs
            self._coeffs = coeffs
        return self._freqs, self._coeffs

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        shape = t.shape
        flat = t.reshape(-1)
        freqs, coeffs = self._spectrum()
        n = self.values.size
        nyq = n // 2 if n % 2 == 0 else None
        out = np.empty(flat.size, dtype=complex)
        for start in range(0, flat.size, _EVAL_CHUNK):
            ts = flat[start:start + _EVAL_CHUNK]
            basis = np.exp(1j * np.outer(ts, freqs))
            if nyq is not None:
                # fftfreq labels the Nyquist bin -n/2; use cos(n/2 t) instead
                idx = int(np.argmin(np.abs(freqs + nyq)))
                basis[:, idx] = np.cos(nyq * ts)
            out[start:start + _EVAL_CHUNK] = basis @ coeffs
        return out.reshape(shape)

    def derivative(self) -> "GridFn":
        freqs, coeffs = self._spectrum()
        n = self.values.size
        mult = 1j * freqs
        if n % 2 == 0:
            # the Nyquist cosine differentiates to a pure sine invisible on the
            # grid; the symmetric convention zeroes it
            mult = mult.copy()
            mult[int(np.argmin(np.abs(freqs + n // 2)))] = 0.0
        dvals = np.fft.ifft(coeffs * mult * n)
        return GridFn(dvals)

    def sup(self) -> float:
        """Grid sup-norm max_j |y(t_j)|."""
        return float(np.max(np.abs(self.values)))

    def mean_value(self) -> complex:
        return complex(np.mean(self.values))

    def __add__(self, other):
        if isinstance(other, GridFn) and other.grid_size == self.grid_size:
            return GridFn(self.values + other.values)
        return super().__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return GridFn(self.values * other)
        if isinstance(other, GridFn) and other.grid_size == self.grid_size:
            return GridFn(self.values * other.values)
        return super().__mul__(other)

    __rmul__ = __mul__


_MODEL_BUILTINS = {"Torus1": Torus1, "SU2": SU2}


class CoefficientField:
    """Partial Fourier data: mode keys (label, r, s) -> GridFn on a shared grid.

    r and s are 0-based indices into the rep's frequency list / matrix; the
    transport frequency of mode (label, r, s) is mu_r of the rep.
    """

    def __init__(self, model: SpectralModel, grid_size: int = 256, tol: float | None = None):
        if grid_size < 4:
            raise DomainError("grid_size must be at least 4")
        self.model = model
        self.grid_size = int(grid_size)
        self.tol = tol
        self._data: dict[tuple[int, int, int], GridFn] = {}

    # --- mutation ------------------------------------------------------------
    def set_mode(self, label: int, r: int, s: int, fn) -> None:
        rep = self.model.rep(label)
        if not (0 <= r < rep.dim and 0 <= s < rep.dim):
            raise DomainError(f"mode ({label},{r},{s}): indices outside dim {rep.dim}")
        if isinstance(fn, GridFn):
            if fn.grid_size != self.grid_size:
                raise DomainError("grid size mismatch")
            g = fn
        elif isinstance(fn, PeriodicFn):
            g = GridFn.from_fn(fn, self.grid_size)
        else:
            arr = np.asarray(fn, dtype=complex)
            if arr.shape != (self.grid_size,):
                raise DomainError("expected samples of length grid_size")
            g = GridFn(arr)
        self._data[(int(label), int(r), int(s))] = g

    def remove_mode(self, label: int, r: int, s: int) -> None:
        self._data.pop((label, r, s), None)

    # --- access ----------------------------------------------------------------
    def get(self, label: int, r: int, s: int) -> GridFn:
        try:
            return self._data[(label, r, s)]
        except KeyError:
            raise DomainError(f"mode ({label},{r},{s}) not present") from None

    def __contains__(self, key) -> bool:
        return tuple(key) in self._data

    def __len__(self) -> int:
        return len(self._data)

    def keys(self) -> list[tuple[int, int, int]]:
        return sorted(self._data)

    def items(self) -> Iterator[tuple[tuple[int, int, int], GridFn]]:
        for k in self.keys():
            yield k, self._data[k]

    def labels(self) -> list[int]:
        return sorted({k[0] for k in self._data})

    def mode_mu(self, key: tuple[int, int, int]) -> float:
        label, r, _ = key
        return float(self.model.rep(label).mu[r])

    def empty_like(self) -> "CoefficientField":
        return CoefficientField(self.model, self.grid_size, self.tol)

    # --- serialization -----------------------------------------------------------
    def dump_csv(self, path: str) -> None:
        """Rows (rep_label, r, s, grid_index, t, re, im) under a '#' metadata header."""
        grid = grid_points(self.grid_size)
        with open(path, "w", newline="") as fh:
            fh.write("# hypoell coefficient field\n")
            fh.write(f"# model={self.model.kind}\n")
            fh.write(f"# grid_size={self.grid_size}\n")
            if self.tol is not None:
                fh.write(f"# tol={self.tol!r}\n")
            w = csv.writer(fh)
            w.writerow(["rep_label", "r", "s", "grid_index", "t", "re", "im"])
            for (label, r, s), g in self.items():
                for j, t in enumerate(grid):
                    v = g.values[j]
                    w.writerow([label, r, s, j, repr(float(t)),
                                repr(float(v.real)), repr(float(v.imag))])

    @classmethod
    def load_csv(cls, path: str, model: SpectralModel | None = None) -> "CoefficientField":
        with open(path, "r", newline="") as fh:
            meta = {}
            body = io.StringIO()
            for line in fh:
                if line.startswith("#"):
                    stripped = line[1:].strip()
                    if "=" in stripped:
                        k, _, v = stripped.partition("=")
                        meta[k.strip()] = v.strip()
                else:
                    body.write(line)
        kind = meta.get("model")
        grid_size = int(meta.get("grid_size", 0))
        if grid_size < 4:
            raise DomainError("missing or invalid grid_size header")
        if model is None:
            if kind in _MODEL_BUILTINS:
                model = _MODEL_BUILTINS[kind]()
            else:
                raise DomainError(
                    f"model kind {kind!r} needs an explicit model= argument to load")
        elif kind is not None and model.kind != kind:
            raise ModelError(f"file written for model {kind}, got {model.kind}")
        tol = float(meta["tol"]) if "tol" in meta else None
        field = cls(model, grid_size, tol)
        body.seek(0)
        reader = csv.reader(body)
        header = next(reader, None)
        if header != ["rep_label", "r", "s", "grid_index", "t", "re", "im"]:
            raise DomainError("unexpected CSV header")
        buckets: dict[tuple[int, int, int], np.ndarray] = {}
        for row in reader:
            if not row:
                continue
            label, r, s, j = int(row[0]), int(row[1]), int(row[2]), int(row[3])
            re_v, im_v = float(row[5]), float(row[6])
            if not (math.isfinite(re_v) and math.isfinite(im_v)):
                raise DomainError(f"non-finite value in mode ({label},{r},{s})")
            arr = buckets.setdefault((label, r, s), np.full(grid_size, np.nan + 0j))
            if not (0 <= j < grid_size):
                raise DomainError(f"grid index {j} out of range")
            arr[j] = complex(re_v, im_v)
        for key, arr in sorted(buckets.items()):
            if np.isnan(arr.real).any():
                raise DomainError(f"mode {key}: incomplete grid data")
            field.set_mode(*key, arr)
        return field
