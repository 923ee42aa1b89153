"""Sparse Fourier expansions ``sum c(l, nu) q^l exp(2 pi i z.nu)`` and their dump formats."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange

Key = tuple[int, tuple[int, ...]]


def _canonical(entries: Mapping[Key, complex]) -> MappingProxyType:
    return MappingProxyType({key: complex(entries[key]) for key in sorted(entries) if entries[key] != 0})


@dataclass(frozen=True)
class FourierExpansion:
    """Finitely many coefficients ``c(l, nu)`` with ``l <= lmax``.

    The stored exponent of ``q`` is ``l / ell_denominator``; it is 1 for the
    theta series proper and ``N^2`` for congruence thetas.
    """

    entries: Mapping[Key, complex]
    lmax: int
    n: int
    ell_denominator: int = 1

    def __post_init__(self):
        for ell, nu in self.entries:
            if ell > self.lmax * self.ell_denominator or ell < 0:
                raise ValueError(f"exponent {ell} outside [0, {self.lmax}]")
            if len(nu) != self.n:
                raise DimensionMismatch(f"index {nu} does not have length {self.n}")
        object.__setattr__(self, "entries", _canonical(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: Key) -> complex:
        ell, nu = key
        return self.entries.get((int(ell), tuple(int(t) for t in nu)), 0j)

    def coefficient(self, ell: int, nu: Sequence[int]) -> complex:
        return self[ell, nu]

    def items(self):
        return self.entries.items()

    def _compatible(self, other: FourierExpansion) -> None:
        if (self.n, self.ell_denominator) != (other.n, other.ell_denominator):
            raise DimensionMismatch("expansions have different shapes")

    def __add__(self, other: FourierExpansion) -> FourierExpansion:
        self._compatible(other)
        out = dict(self.entries)
        for key, c in other.items():
            out[key] = out.get(key, 0j) + c
        return FourierExpansion(out, min(self.lmax, other.lmax), self.n, self.ell_denominator)._truncated()

    def __neg__(self) -> FourierExpansion:
        return self.scale(-1)

    def __sub__(self, other: FourierExpansion) -> FourierExpansion:
        return self + (-other)

    def scale(self, factor: complex) -> FourierExpansion:
        return FourierExpansion({key: factor * c for key, c in self.items()}, self.lmax, self.n, self.ell_denominator)

    def _truncated(self) -> FourierExpansion:
        bound = self.lmax * self.ell_denominator
        return FourierExpansion(
            {key: c for key, c in self.items() if key[0] <= bound}, self.lmax, self.n, self.ell_denominator
        )

    def times_q_series(self, series: Sequence[complex]) -> FourierExpansion:
        """Multiply by ``sum_j series[j] q^j`` and truncate at ``lmax``."""
        den = self.ell_denominator
        out: dict[Key, complex] = {}
        for (ell, nu), c in self.items():
            for j, a in enumerate(series):
                e = ell + j * den
                if e > self.lmax * den:
                    break
                if a != 0:
                    out[(e, nu)] = out.get((e, nu), 0j) + a * c
        return FourierExpansion(out, self.lmax, self.n, den)

    def max_abs_difference(self, other: FourierExpansion) -> float:
        self._compatible(other)
        keys = set(self.entries) | set(other.entries)
        return max((abs(self[key] - other[key]) for key in keys), default=0.0)

    def evaluate(self, tau: complex, z: Sequence[complex]) -> complex:
        """Direct summation of the stored terms at ``(tau, z)``."""
        if not self.entries:
            return 0j
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.n,):
            raise DimensionMismatch(f"z must have length {self.n}")
        keys = list(self.entries)
        ell = np.array([k[0] for k in keys], dtype=float) / self.ell_denominator
        nu = np.array([k[1] for k in keys], dtype=float)
        c = np.array([self.entries[k] for k in keys])
        terms = c * np.exp(2j * np.pi * (tau * ell + nu @ z))
        return complex(math.fsum(terms.real), math.fsum(terms.imag))


def z_derivative(expansion: FourierExpansion, i: int) -> FourierExpansion:
    """Apply ``(1/2 pi i) d/dz_i`` (``i`` counts directions from 1)."""
    if not 1 <= i <= expansion.n:
        raise IndexOutOfRange(f"direction index {i} not in 1..{expansion.n}")
    return FourierExpansion(
        {(ell, nu): nu[i - 1] * c for (ell, nu), c in expansion.items()},
        expansion.lmax,
        expansion.n,
        expansion.ell_denominator,
    )


# -- dump formats ---------------------------------------------------------

FORMATS = ("json-records", "csv")


def to_records(expansion: FourierExpansion) -> list[dict]:
    return [
        {"record": "coefficient", "ell": ell, "nu": list(nu), "re": c.real, "im": c.imag}
        for (ell, nu), c in expansion.items()
    ]


def dumps(expansion: FourierExpansion, fmt: str = "json-records") -> str:
    """Serialise in canonical ``(l, nu)`` order."""
    if fmt == "json-records":
        header = {
            "record": "header",
            "n": expansion.n,
            "lmax": expansion.lmax,
            "ell_denominator": expansion.ell_denominator,
        }
        lines = [json.dumps(header)] + [json.dumps(r) for r in to_records(expansion)]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["ell", *(f"nu_{j + 1}" for j in range(expansion.n)), "re", "im"])
        for (ell, nu), c in expansion.items():
            writer.writerow([ell, *nu, repr(c.real), repr(c.imag)])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def loads(text: str, fmt: str = "json-records", lmax: int | None = None) -> FourierExpansion:
    """Parse a dump produced by :func:`dumps`.

    CSV carries no truncation bound; it defaults to the largest stored exponent.
    """
    entries: dict[Key, complex] = {}
    if fmt == "json-records":
        lines = [json.loads(line) for line in text.splitlines() if line.strip()]
        header = lines[0]
        for rec in lines[1:]:
            entries[(rec["ell"], tuple(rec["nu"]))] = complex(rec["re"], rec["im"])
        return FourierExpansion(entries, header["lmax"], header["n"], header.get("ell_denominator", 1))
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        n = len(rows[0]) - 3
        for row in rows[1:]:
            entries[(int(row[0]), tuple(int(t) for t in row[1 : 1 + n]))] = complex(float(row[-2]), float(row[-1]))
        if lmax is None:
            lmax = max((key[0] for key in entries), default=0)
        return FourierExpansion(entries, lmax, n)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def record_multiset(expansion: FourierExpansion) -> Iterable[tuple]:
    return sorted((ell, nu, c.real, c.imag) for (ell, nu), c in expansion.items())
