"""Semi-simplicial sets and exact reduced cohomology over a field.

Cells are opaque hashable keys, graded by dimension.  A dimension-n cell
carries an ordered list of n+1 faces in dimension n-1.  Reduced cohomology
is computed from the augmented cellular cochain complex by exact rank
computation (rationals or a prime field); no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

CellKey = Hashable


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: characteristic 0 means the rationals, p means F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {self.characteristic}")

    def __str__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


RATIONALS = Field(0)


def prime_field(p: int) -> Field:
    return Field(p)


def rank_of_rows(rows: Iterable[Mapping[int, int]], k: Field) -> int:
    """Exact rank of a sparse integer matrix given as rows {column: entry}."""
    p = k.characteristic
    pivots: dict[int, dict[int, object]] = {}
    rank = 0
    for raw in rows:
        if p:
            row = {c: v % p for c, v in raw.items() if v % p}
        else:
            row = {c: Fraction(v) for c, v in raw.items() if v}
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], p - 2, p) if p else 1 / row[c]
                if p:
                    row = {j: (v * inv) % p for j, v in row.items()}
                else:
                    row = {j: v * inv for j, v in row.items()}
                pivots[c] = row
                rank += 1
                break
            coeff = row[c]
            for j, v in pivots[c].items():
                w = row.get(j, 0) - coeff * v
                if p:
                    w %= p
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
        # empty row: linearly dependent, contributes nothing
    return rank


@dataclass(frozen=True)
class BettiProfile:
    """Dimensions of reduced cohomology; degrees with dimension 0 are omitted.

    top_dim is the largest dimension carrying a cell, -1 for the empty set.
    reduced_betti[-1] == 1 exactly when the set is empty.
    """

    reduced_betti: Mapping[int, int]
    top_dim: int

    def betti(self, j: int) -> int:
        return self.reduced_betti.get(j, 0)

    def concentrated_in(self, degree: int) -> bool:
        """True iff every nonzero entry sits in the given degree."""
        return all(j == degree for j in self.reduced_betti)

    def is_bouquet(self) -> bool:
        return all(j >= self.top_dim for j in self.reduced_betti)

    def __str__(self):
        inner = ", ".join(f"{j}: {d}" for j, d in sorted(self.reduced_betti.items()))
        return "{" + inner + "}"


class SemiSimplicialSet:
    """Cells graded by dimension with ordered face maps.

    cells[n] lists the keys of dimension-n cells; faces maps each cell of
    dimension n >= 1 to its (n+1)-tuple of faces (d_0, ..., d_n) in
    dimension n-1.  Keys must be unique across dimensions.
    """

    def __init__(self, cells: Iterable[Iterable[CellKey]], faces: Mapping[CellKey, tuple]):
        cells = tuple(tuple(level) for level in cells)
        while cells and not cells[-1]:
            cells = cells[:-1]
        self.cells = cells
        self.faces = dict(faces)
        seen: set[CellKey] = set()
        for n, level in enumerate(cells):
            for c in level:
                if c in seen:
                    raise ValueError(f"duplicate cell key {c!r}")
                seen.add(c)
                if n == 0:
                    continue
                fs = self.faces.get(c)
                if fs is None or len(fs) != n + 1:
                    raise ValueError(f"cell {c!r} of dimension {n} needs {n + 1} faces")
                lower = set(cells[n - 1])
                for f in fs:
                    if f not in lower:
                        raise ValueError(f"face {f!r} of cell {c!r} is not a cell of dimension {n - 1}")

    @property
    def top_dim(self) -> int:
        return len(self.cells) - 1

    def num_cells(self, n: int) -> int:
        return len(self.cells[n]) if 0 <= n <= self.top_dim else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(level) for n, level in enumerate(self.cells))


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with enough data to reproduce it."""

    kind: str
    witness: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, message: str):
        self.violations.append(Violation(kind, witness, message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(f"{v.kind}: {v.message} (witness {v.witness})" for v in self.violations)


def check_semisimplicial(X: SemiSimplicialSet) -> ValidationReport:
    """List every (cell, i, j) with d_i d_j != d_{j-1} d_i for i < j."""
    report = ValidationReport()
    for n in range(2, X.top_dim + 1):
        for c in X.cells[n]:
            fs = X.faces[c]
            for j in range(1, n + 1):
                for i in range(j):
                    left = X.faces[fs[j]][i]
                    right = X.faces[fs[i]][j - 1]
                    if left != right:
                        report.add(
                            "semisimplicial-identity",
                            (c, i, j),
                            f"d_{i} d_{j} != d_{j - 1} d_{i} on cell {c!r}",
                        )
    return report


def boundary_rows(X: SemiSimplicialSet, n: int) -> list[dict[int, int]]:
    """Signed face-incidence matrix of d: C_n -> C_{n-1} as sparse columns-by-cell rows.

    Row r corresponds to the r-th n-cell; column indices refer to (n-1)-cells.
    n == 0 yields the augmentation row pattern (each 0-cell maps to the point).
    """
    if n == 0:
        return [{0: 1} for _ in X.cells[0]] if X.cells else []
    index = {c: i for i, c in enumerate(X.cells[n - 1])}
    rows = []
    for c in X.cells[n]:
        row: dict[int, int] = {}
        for i, f in enumerate(X.faces[c]):
            col = index[f]
            row[col] = row.get(col, 0) + (-1) ** i
        rows.append({c: v for c, v in row.items() if v})
    return rows


def reduced_cohomology(X: SemiSimplicialSet, k: Field = RATIONALS) -> BettiProfile:
    """Betti numbers of the augmented cellular cochain complex of X over k.

    The augmentation row makes the empty-set convention (betti[-1] = 1)
    fall out of the same code path.
    """
    top = X.top_dim
    if top < 0:
        return BettiProfile({-1: 1}, -1)
    # ranks[n] = rank of the boundary C_n -> C_{n-1}, with C_{-1} = k (augmentation)
    ranks = [rank_of_rows(boundary_rows(X, n), k) for n in range(top + 1)]
    ranks.append(0)
    betti: dict[int, int] = {}
    b_minus1 = 1 - ranks[0]
    if b_minus1:
        betti[-1] = b_minus1
    for j in range(top + 1):
        b = X.num_cells(j) - ranks[j] - ranks[j + 1]
        if b:
            betti[j] = b
    return BettiProfile(betti, top)


def is_bouquet(X: SemiSimplicialSet, k: Field = RATIONALS) -> bool:
    """True iff reduced cohomology vanishes strictly below the top dimension."""
    return reduced_cohomology(X, k).is_bouquet()


def dump_incidence_matrices(X: SemiSimplicialSet) -> str:
    """Plain-text triplet dump of the signed incidence matrices, for debugging."""
    lines = []
    for n in range(X.top_dim + 1):
        rows = boundary_rows(X, n)
        ncols = 1 if n == 0 else X.num_cells(n - 1)
        lines.append(f"%% boundary degree {n}: {len(rows)} x {ncols}")
        for r, row in enumerate(rows):
            for c in sorted(row):
                lines.append(f"{r} {c} {row[c]}")
    return "\n".join(lines)
