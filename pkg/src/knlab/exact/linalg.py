"""Exact sparse linear algebra over the rationals.

Rows are dicts ``{column: value}`` with integer column keys.  The
:class:`RowReducer` keeps an echelon basis incrementally and can record,
for every stored row, which input rows it is a combination of.  That
record is what turns "this system is inconsistent" into a checkable
certificate.
"""
from .scalar import ONE, ZERO, mpq


class RowReducer:
    """Incremental echelon form; pivot of a stored row is its least column."""

    def __init__(self, track=False):
        self.pivots = {}
        self.track = track

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row, combo=None):
        """Reduce row against the stored pivots; returns (row, combo)."""
        row = {k: v for k, v in row.items() if v}
        if self.track:
            combo = dict(combo or {})
        pivots = self.pivots
        while row:
            col = min(row)
            hit = pivots.get(col)
            if hit is None:
                # the least column is not a pivot; look at the rest
                cols = sorted(c for c in row if c in pivots)
                if not cols:
                    break
                col = cols[0]
                hit = pivots[col]
            prow, pcombo = hit
            factor = row[col]
            for k, v in prow.items():
                nv = row.get(k, ZERO) - factor * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if self.track:
                for k, v in pcombo.items():
                    nv = combo.get(k, ZERO) - factor * v
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
        return row, combo

    def add(self, row, tag=None):
        """Insert a row; returns (independent?, residual combo)."""
        combo = {tag: ONE} if self.track and tag is not None else None
        row, combo = self.reduce(row, combo)
        if not row:
            return False, combo
        col = min(row)
        inv = ONE / row[col]
        row = {k: v * inv for k, v in row.items()}
        if self.track:
            combo = {k: v * inv for k, v in combo.items()}
        self.pivots[col] = (row, combo)
        return True, combo


def rank(rows):
    red = RowReducer()
    for row in rows:
        red.add(row)
    return red.rank


def dense_rank(matrix):
    return rank({j: mpq(v) for j, v in enumerate(r) if v} for r in matrix)


def nullspace(matrix, ncols=None):
    """Basis of {x : matrix x = 0} for a dense list-of-lists matrix."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    red = RowReducer()
    for r in matrix:
        red.add({j: mpq(v) for j, v in enumerate(r) if v})
    rows = _fully_reduced(red)
    pivot_cols = set(rows)
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for pc, prow in rows.items():
            vec[pc] = -prow.get(free, ZERO)
        basis.append(vec)
    return basis


def sparse_kernel(red, ncols):
    """Sparse basis of the null space of the rows held by a RowReducer."""
    rows = _fully_reduced(red)
    out = []
    for free in range(ncols):
        if free in rows:
            continue
        vec = {free: ONE}
        for pc, prow in rows.items():
            v = prow.get(free)
            if v:
                vec[pc] = -v
        out.append(vec)
    return out


def _fully_reduced(red):
    """Reduced row echelon rows keyed by pivot column."""
    rows = {c: dict(r) for c, (r, _) in red.pivots.items()}
    for pc in sorted(rows, reverse=True):
        prow = rows[pc]
        for oc, orow in rows.items():
            if oc != pc and pc in orow:
                f = orow[pc]
                for k, v in prow.items():
                    nv = orow.get(k, ZERO) - f * v
                    if nv:
                        orow[k] = nv
                    else:
                        orow.pop(k, None)
    return rows


class InconsistentSystem(Exception):
    """A linear system has no solution; ``certificate`` proves it."""

    def __init__(self, certificate):
        super().__init__("linear system is inconsistent")
        self.certificate = certificate


def solve_sparse(equations, rhs):
    """Solve sum_k A[i][k] x_k = b_i exactly.

    ``equations`` is a list of sparse rows, ``rhs`` the matching values.
    Returns a dict solution (free variables zero).  On inconsistency
    raises :class:`InconsistentSystem` carrying multipliers y with
    y.A = 0 and y.b != 0.
    """
    rhs_col = _rhs_column(equations)
    red = RowReducer(track=True)
    for i, (row, b) in enumerate(zip(equations, rhs)):
        full = dict(row)
        if b:
            full[rhs_col] = mpq(b)
        red.add(full, tag=i)
        if rhs_col in red.pivots:
            raise InconsistentSystem(red.pivots[rhs_col][1])
    if rhs_col in red.pivots:
        raise InconsistentSystem(red.pivots[rhs_col][1])
    solution = {}
    for pc in sorted(red.pivots, reverse=True):
        prow, _ = red.pivots[pc]
        acc = prow.get(rhs_col, ZERO)
        for k, v in prow.items():
            if k != pc and k != rhs_col:
                acc -= v * solution.get(k, ZERO)
        if acc:
            solution[pc] = acc
    return solution


def _rhs_column(equations):
    top = -1
    for row in equations:
        if row:
            top = max(top, max(row))
    return top + 1


def check_farkas(equations, rhs, multipliers):
    """True when multipliers certify that the system is inconsistent."""
    combined = {}
    value = ZERO
    for i, y in multipliers.items():
        for k, v in equations[i].items():
            combined[k] = combined.get(k, ZERO) + y * v
        value += y * mpq(rhs[i])
    return value != 0 and not any(combined.values())
