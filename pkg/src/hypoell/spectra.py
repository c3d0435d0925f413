"""Enumerable spectral models: representation points, weights, symbol frequencies.

A spectral model describes the unitary dual of a compact group through a list
of representation points: a label, a dimension, an exact Laplace eigenvalue
nu, and the sorted list of real frequencies mu_r of the diagonalized vector
field symbol.  Three models ship: the circle (labels n, frequency n), the
3-sphere group (labels 2*spin, frequencies -spin..spin), and user-supplied
tables.  All arithmetic data is exact (Fractions); floats are views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ModelError, NoGrowthSequence

__all__ = ["RepPoint", "SpectralModel", "Torus1", "SU2", "CustomTable",
           "enumerate_reps", "growth_sequence"]


@dataclass(frozen=True)
class RepPoint:
    """One point of the unitary dual.

    label   -- integer identifier (circle frequency n; for the 3-sphere group,
               twice the spin so every label is an integer)
    dim     -- matrix dimension d of the representation
    nu      -- exact Laplace eigenvalue (non-negative rational)
    mu      -- the d symbol frequencies, exact, sorted ascending
    """

    label: int
    dim: int
    nu: Fraction
    mu: tuple[Fraction, ...]

    def __post_init__(self):
        if self.dim <= 0 or self.dim != len(self.mu):
            raise ModelError(f"rep {self.label}: dim {self.dim} != len(mu) {len(self.mu)}")
        if self.nu < 0:
            raise ModelError(f"rep {self.label}: negative Laplace eigenvalue")
        if any(self.mu[i] >= self.mu[i + 1] for i in range(len(self.mu) - 1)):
            raise ModelError(f"rep {self.label}: mu must be sorted strictly ascending")

    @property
    def weight_sq(self) -> Fraction:
        """Exact squared weight, 1 + nu."""
        return 1 + self.nu

    @property
    def weight(self) -> float:
        """The frequency weight (1 + nu)^(1/2)."""
        return math.sqrt(float(self.weight_sq))

    @property
    def mu_floats(self) -> np.ndarray:
        return np.array([float(m) for m in self.mu], dtype=float)

    @property
    def top_index(self) -> int:
        """Index of the largest frequency (the last, as mu is ascending)."""
        return self.dim - 1

    @property
    def mu_top(self) -> Fraction:
        return self.mu[-1]


class SpectralModel:
    """Abstract model: exact rep enumeration plus frequency bookkeeping."""

    kind: str = "abstract"

    # exact constant C with |mu_r| <= C * weight for every rep
    eigen_bound: Fraction = Fraction(1)

    #: whether sup over reps of |mu| is unbounded (growth sequences exist)
    supports_unbounded_mu: bool = False

    # --- core enumeration -------------------------------------------------
    def rep(self, label: int) -> RepPoint:
        raise NotImplementedError

    def labels_upto(self, max_label: int) -> list[int]:
        raise NotImplementedError

    def enumerate_reps(self, max_label: int) -> list[RepPoint]:
        """All reps with label bounded by max_label, sorted by (weight, label)."""
        if max_label < 0:
            raise DomainError("max_label must be >= 0")
        reps = [self.rep(l) for l in self.labels_upto(max_label)]
        reps.sort(key=lambda r: (r.weight_sq, r.label))
        self.validate(reps)
        return reps

    def validate(self, reps: Iterable[RepPoint]) -> None:
        """Exact check of the frequency bound |mu_r| <= C * weight."""
        c2 = self.eigen_bound * self.eigen_bound
        for r in reps:
            for m in r.mu:
                if m * m > c2 * r.weight_sq:
                    raise ModelError(
                        f"rep {r.label}: |mu|={m} exceeds bound C*weight "
                        f"(C={self.eigen_bound}, weight^2={r.weight_sq})")

    # --- growth sequences ---------------------------------------------------
    def growth_sequence(self, count: int) -> list[tuple[RepPoint, int]]:
        """`count` reps of strictly increasing weight whose top frequency
        satisfies mu_top >= growth_constant * weight^(1/2), each paired with
        the index of that top frequency."""
        raise NotImplementedError

    @property
    def growth_constant(self) -> float:
        """Largest g (over the documented scan range) with
        mu_top >= g * weight^(1/2) along the model's growth sequence."""
        return float(self.growth_constant_pow4) ** 0.25

    @property
    def growth_constant_pow4(self) -> Fraction:
        """Exact fourth power of the growth constant (scan-derived)."""
        raise NoGrowthSequence(f"{self.kind}: no growth sequence shipped")

    # --- frequency universe ---------------------------------------------------
    def mu_lattice(self) -> Fraction | None:
        """Spacing d such that every frequency of every rep lies in d*Z,
        or None when no single spacing describes the model."""
        return None

    def mu_in_universe(self, mu: Fraction) -> bool:
        """Whether some rep of the model carries the frequency mu."""
        raise NotImplementedError

    def reps_containing(self, mu: Fraction, max_label: int) -> list[tuple[int, int]]:
        """(label, r-index) pairs with label <= max_label whose frequency list
        contains mu; deterministic ascending label order."""
        raise NotImplementedError

    def infinitely_many_reps_contain(self, mu: Fraction) -> bool:
        """Exact statement about the full (untruncated) model."""
        raise NotImplementedError

    def mu_candidates(self, radius: Fraction) -> list[Fraction]:
        """All distinct frequencies of the model with |mu| <= radius, sorted."""
        raise NotImplementedError


class Torus1(SpectralModel):
    """The circle: labels n in Z, one-dimensional reps, frequency n."""

    kind = "Torus1"
    eigen_bound = Fraction(1)
    supports_unbounded_mu = True

    _GROWTH_SCAN = 10 ** 6

    def rep(self, label: int) -> RepPoint:
        n = int(label)
        return RepPoint(label=n, dim=1, nu=Fraction(n * n), mu=(Fraction(n),))

    def labels_upto(self, max_label: int) -> list[int]:
        return list(range(-max_label, max_label + 1))

    def growth_sequence(self, count: int) -> list[tuple[RepPoint, int]]:
        if count <= 0:
            raise DomainError("count must be positive")
        g4 = self.growth_constant_pow4
        out = []
        for n in range(1, count + 1):
            r = self.rep(n)
            assert r.mu_top ** 4 >= g4 * r.weight_sq
            out.append((r, r.top_index))
        return out

    @property
    def growth_constant_pow4(self) -> Fraction:
        return _torus_growth_pow4(self._GROWTH_SCAN)

    def mu_lattice(self) -> Fraction:
        return Fraction(1)

    def mu_in_universe(self, mu: Fraction) -> bool:
        return mu.denominator == 1

    def reps_containing(self, mu: Fraction, max_label: int) -> list[tuple[int, int]]:
        if mu.denominator != 1 or abs(mu) > max_label:
            return []
        return [(int(mu), 0)]

    def infinitely_many_reps_contain(self, mu: Fraction) -> bool:
        # each integer frequency occurs in exactly one rep
        return False

    def mu_candidates(self, radius: Fraction) -> list[Fraction]:
        top = math.floor(radius)
        return [Fraction(n) for n in range(-top, top + 1)]


@lru_cache(maxsize=None)
def _torus_growth_pow4(scan: int) -> Fraction:
    # minimize n^4/(1+n^2) over 1 <= n <= scan: float scan, exact re-check
    n = np.arange(1, scan + 1, dtype=float)
    ratios = n ** 4 / (1.0 + n ** 2)
    k = int(np.argmin(ratios)) + 1
    best = Fraction(k ** 4, 1 + k * k)
    # exact confirmation on a neighborhood of the float argmin
    for j in range(max(1, k - 2), k + 3):
        best = min(best, Fraction(j ** 4, 1 + j * j))
    return best


class SU2(SpectralModel):
    """The 3-sphere group: labels m = 2*spin, dim m+1, frequencies -m/2..m/2.

    Laplace eigenvalue convention: nu = spin*(spin+1) (Casimir), kept exact as
    m(m+2)/4.
    """

    kind = "SU2"
    eigen_bound = Fraction(1)
    supports_unbounded_mu = True

    _GROWTH_SCAN = 10 ** 6

    def rep(self, label: int) -> RepPoint:
        m = int(label)
        if m < 0:
            raise DomainError("labels are non-negative (twice the spin)")
        nu = Fraction(m * (m + 2), 4)
        mu = tuple(Fraction(2 * r - m, 2) for r in range(m + 1))
        return RepPoint(label=m, dim=m + 1, nu=nu, mu=mu)

    def labels_upto(self, max_label: int) -> list[int]:
        return list(range(0, max_label + 1))

    def growth_sequence(self, count: int) -> list[tuple[RepPoint, int]]:
        """Integer spins 1..count (labels 2, 4, ...): mu_top = spin, and the
        scanned constant is attained at spin 1."""
        if count <= 0:
            raise DomainError("count must be positive")
        g4 = self.growth_constant_pow4
        out = []
        for spin in range(1, count + 1):
            r = self.rep(2 * spin)
            assert r.mu_top ** 4 >= g4 * r.weight_sq
            out.append((r, r.top_index))
        return out

    @property
    def growth_constant_pow4(self) -> Fraction:
        return _su2_growth_pow4(self._GROWTH_SCAN)

    def mu_lattice(self) -> Fraction:
        return Fraction(1, 2)

    def mu_in_universe(self, mu: Fraction) -> bool:
        return (2 * mu).denominator == 1

    def reps_containing(self, mu: Fraction, max_label: int) -> list[tuple[int, int]]:
        two_mu = 2 * mu
        if two_mu.denominator != 1:
            return []
        k = int(two_mu)
        out = []
        start = abs(k)
        for m in range(start, max_label + 1, 2):
            # ascending frequency list: mu_r = (2r - m)/2, so r = mu + m/2
            out.append((m, (k + m) // 2))
        return out

    def infinitely_many_reps_contain(self, mu: Fraction) -> bool:
        # any half-integer frequency sits in every rep of matching parity
        # beyond 2|mu|, of which there are infinitely many
        return (2 * mu).denominator == 1

    def mu_candidates(self, radius: Fraction) -> list[Fraction]:
        top = math.floor(2 * radius)
        return [Fraction(k, 2) for k in range(-top, top + 1)]


@lru_cache(maxsize=None)
def _su2_growth_pow4(scan: int) -> Fraction:
    # minimize spin^4/(1+spin(spin+1)) over integer spins 1 <= s <= scan
    s = np.arange(1, scan + 1, dtype=float)
    ratios = s ** 4 / (1.0 + s * (s + 1.0))
    k = int(np.argmin(ratios)) + 1
    best = Fraction(k ** 4, 1 + k * (k + 1))
    for j in range(max(1, k - 2), k + 3):
        best = min(best, Fraction(j ** 4, 1 + j * (j + 1)))
    return best


class CustomTable(SpectralModel):
    """A finite user-supplied table of representation points.

    Text format, one rep per line::

        label  dim  nu  mu1,mu2,...,muD

    nu and the mu entries accept integers, fractions ("3/4") and decimals;
    non-finite values are rejected.  Lines starting with '#' are comments.
    A line consisting of '@unbounded_mu' marks the table as a truncation of a
    model with unbounded frequencies, enabling growth sequences.
    """

    kind = "CustomTable"

    def __init__(self, reps: Sequence[RepPoint], eigen_bound: Fraction | int = 1,
                 unbounded_mu: bool = False):
        self.eigen_bound = Fraction(eigen_bound)
        if self.eigen_bound <= 0:
            raise ModelError("eigen bound constant must be positive")
        self.supports_unbounded_mu = bool(unbounded_mu)
        seen = set()
        for r in reps:
            if r.label in seen:
                raise ModelError(f"duplicate label {r.label} in table")
            seen.add(r.label)
        self._table = {r.label: r for r in reps}
        self.validate(reps)

    @classmethod
    def from_text(cls, text: str, eigen_bound: Fraction | int = 1) -> "CustomTable":
        reps = []
        unbounded = False
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "@unbounded_mu":
                unbounded = True
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ModelError(f"line {lineno}: expected 'label dim nu mu-list', got {raw!r}")
            try:
                label = int(parts[0])
                dim = int(parts[1])
                nu = Fraction(parts[2])
                mu = tuple(Fraction(x) for x in parts[3].split(","))
            except (ValueError, ZeroDivisionError) as exc:
                raise ModelError(f"line {lineno}: unparseable value ({exc})") from exc
            reps.append(RepPoint(label=label, dim=dim, nu=nu, mu=mu))
        return cls(reps, eigen_bound=eigen_bound, unbounded_mu=unbounded)

    def rep(self, label: int) -> RepPoint:
        try:
            return self._table[int(label)]
        except KeyError:
            raise ModelError(f"label {label} not in table") from None

    def labels_upto(self, max_label: int) -> list[int]:
        return sorted(l for l in self._table if l <= max_label)

    def all_reps(self) -> list[RepPoint]:
        return sorted(self._table.values(), key=lambda r: (r.weight_sq, r.label))

    def growth_sequence(self, count: int) -> list[tuple[RepPoint, int]]:
        if count <= 0:
            raise DomainError("count must be positive")
        if not self.supports_unbounded_mu:
            raise NoGrowthSequence("table not marked @unbounded_mu")
        rows = [r for r in self.all_reps() if r.mu_top > 0]
        if not rows:
            raise NoGrowthSequence("no rep with positive top frequency")
        g4 = self.growth_constant_pow4
        out: list[tuple[RepPoint, int]] = []
        last_w = Fraction(0)
        for r in rows:
            if r.weight_sq > last_w and r.mu_top ** 4 >= g4 * r.weight_sq:
                out.append((r, r.top_index))
                last_w = r.weight_sq
            if len(out) == count:
                return out
        raise NoGrowthSequence(
            f"table supplies only {len(out)} growth reps, {count} requested")

    @property
    def growth_constant_pow4(self) -> Fraction:
        rows = [r for r in self.all_reps() if r.mu_top > 0]
        if not rows:
            raise NoGrowthSequence("no rep with positive top frequency")
        return min(r.mu_top ** 4 / r.weight_sq for r in rows)

    def mu_lattice(self) -> Fraction | None:
        denoms = {m.denominator for r in self._table.values() for m in r.mu}
        if not denoms:
            return None
        d = 1
        for v in denoms:
            d = d * v // math.gcd(d, v)
        return Fraction(1, d)

    def mu_in_universe(self, mu: Fraction) -> bool:
        return any(mu in r.mu for r in self._table.values())

    def reps_containing(self, mu: Fraction, max_label: int) -> list[tuple[int, int]]:
        out = []
        for label in sorted(self._table):
            if label > max_label:
                continue
            r = self._table[label]
            if mu in r.mu:
                out.append((label, r.mu.index(mu)))
        return out

    def infinitely_many_reps_contain(self, mu: Fraction) -> bool:
        return False  # the table is finite by construction

    def mu_candidates(self, radius: Fraction) -> list[Fraction]:
        vals = {m for r in self._table.values() for m in r.mu if abs(m) <= radius}
        return sorted(vals)


def enumerate_reps(model: SpectralModel, max_label: int) -> list[RepPoint]:
    """All reps with label <= max_label, sorted by (weight, label)."""
    return model.enumerate_reps(max_label)


def growth_sequence(model: SpectralModel, count: int) -> list[tuple[RepPoint, int]]:
    """`count` increasing-weight reps with top frequency >= g * weight^(1/2)."""
    return model.growth_sequence(count)
