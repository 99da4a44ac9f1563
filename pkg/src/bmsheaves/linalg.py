"""Sparse exact linear algebra over the rationals.

Everything here goes through one data structure: a reduced row-echelon
basis whose rows are stored as {column: coefficient} dicts.  The section
systems this package solves are block sparse (each constraint couples the
stalk variables of just two vertices), so sparse rows beat dense Gaussian
elimination by a wide margin while staying exact.

Conventions: a stored row is normalized so row[pivot] == 1, and rows are
mutually reduced (no row contains another row's pivot column).  Kernel
bases are returned as dense lists, one vector per free column, in
increasing free-column order, which keeps all downstream output
deterministic.
"""

from __future__ import annotations

from .rationals import QQ

__all__ = ["Echelon", "kernel_basis", "sparse", "solve_in_span", "rank_dense"]


def sparse(vec):
    """Dense list -> {index: value} dict, dropping zeros."""
    return {i: v for i, v in enumerate(vec) if v}


class Echelon:
    """Incrementally maintained reduced row-echelon basis."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = {}  # pivot column -> sparse row

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        """Return vec reduced modulo the row space (vec is not mutated)."""
        out = dict(vec)
        rows = self.rows
        # Stored rows are mutually reduced, so eliminating one pivot never
        # reintroduces another; a single pass over the initial keys suffices.
        for p in [c for c in out if c in rows]:
            coef = out.pop(p)
            if not coef:
                continue
            for c, v in rows[p].items():
                if c == p:
                    continue
                nv = out.get(c, 0) - coef * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
        return out

    def contains(self, vec):
        return not self.reduce(vec)

    def insert(self, vec):
        """Add vec to the row space; return its pivot column, or None if
        vec was already in the span."""
        r = self.reduce(vec)
        if not r:
            return None
        p = min(r)
        lead = r[p]
        if lead != 1:
            inv = QQ(1) / lead
            r = {c: v * inv for c, v in r.items()}
        # Back-substitute so existing rows lose column p.
        for other in self.rows.values():
            coef = other.pop(p, None)
            if coef:
                for c, v in r.items():
                    if c == p:
                        continue
                    nv = other.get(c, 0) - coef * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        self.rows[p] = r
        return p

    def kernel(self, ncols):
        """Kernel of the linear system whose equations are the rows,
        over variables 0..ncols-1.  One basis vector per free column."""
        rows = self.rows
        basis = []
        for f in range(ncols):
            if f in rows:
                continue
            vec = [0] * ncols
            vec[f] = 1
            for p, row in rows.items():
                c = row.get(f)
                if c:
                    vec[p] = -c
            basis.append(vec)
        return basis


def kernel_basis(rows, ncols):
    """Kernel basis (dense vectors) of the system given by sparse rows."""
    ech = Echelon()
    for r in rows:
        if r:
            ech.insert(r)
    return ech.kernel(ncols)


def solve_in_span(columns, target):
    """Express target as a rational combination of the given dense columns.

    Returns a coefficient list, or None if target is not in the span.  Any
    solution is returned when the columns are dependent.
    """
    n = len(columns)
    nrows = len(target)
    rows = []
    for i in range(nrows):
        row = {j: col[i] for j, col in enumerate(columns) if col[i]}
        if target[i]:
            row[n] = -target[i]
        if row:
            rows.append(row)
    for vec in kernel_basis(rows, n + 1):
        z = vec[n]
        if z:
            if z == 1:
                return vec[:n]
            inv = QQ(1) / z
            return [v * inv for v in vec[:n]]
    return None


def rank_dense(mat):
    """Rank of a dense matrix (list of rows) over the rationals."""
    ech = Echelon()
    for row in mat:
        ech.insert(sparse(row))
    return ech.dim
