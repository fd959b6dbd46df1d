"""Finite-dimensional Lie algebras given by structure constants.

Elements are coefficient tuples in a fixed basis.  Builders cover abelian
algebras, sl(n), gl(n) and direct sums; user tables are accepted too and
are checked for antisymmetry and the Jacobi identity on construction.
"""
from itertools import combinations

from .exact.linalg import RowReducer, nullspace
from .exact.scalar import ONE, ZERO, scalar_str, to_scalar


class LieAlgebraError(ValueError):
    pass


class FiniteLieAlgebra:
    """Structure constants c[i][j] = {k: c_ij^k} over a labelled basis.

    ``matrices`` (optional) is a faithful matrix realization of the basis,
    used for trace forms.  ``reductive`` records (abelian dimension, number
    of simple summands) when known.
    """

    def __init__(self, labels, table, matrices=None, reductive=None, name=None, check=True, blocks=None):
        self.labels = tuple(str(x) for x in labels)
        self.dim = len(self.labels)
        if self.dim == 0:
            raise LieAlgebraError("a Lie algebra needs at least one basis element")
        if len(set(self.labels)) != self.dim:
            raise LieAlgebraError("basis labels must be distinct")
        d = self.dim
        c = [[{} for _ in range(d)] for _ in range(d)]
        for (i, j), row in table.items():
            if not (0 <= i < d and 0 <= j < d):
                raise LieAlgebraError(f"bracket index ({i}, {j}) out of range")
            entry = {}
            for k, v in row.items():
                if not 0 <= k < d:
                    raise LieAlgebraError(f"result index {k} out of range in [{i}, {j}]")
                v = to_scalar(v)
                if v:
                    entry[k] = v
            c[i][j] = entry
        self.c = c
        self.matrices = matrices
        self.reductive = reductive
        self.name = name or f"lie({d})"
        # index ranges of direct summands, when the algebra was built as a sum
        self.blocks = blocks or [tuple(range(d))]
        if check:
            self.validate()

    def __repr__(self):
        return f"FiniteLieAlgebra({self.name}, dim={self.dim})"

    def validate(self):
        d = self.dim
        for i in range(d):
            if self.c[i][i]:
                raise LieAlgebraError(f"[{self.labels[i]}, {self.labels[i]}] is not zero")
            for j in range(i + 1, d):
                a, b = self.c[i][j], self.c[j][i]
                if any(a.get(k, ZERO) + b.get(k, ZERO) for k in set(a) | set(b)):
                    raise LieAlgebraError(
                        f"antisymmetry fails for ({self.labels[i]}, {self.labels[j]})"
                    )
        for i, j, k in combinations(range(d), 3):
            total = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, v in self.c[a][b].items():
                    for t, w in self.c[m][c].items():
                        total[t] = total.get(t, ZERO) + v * w
            if any(total.values()):
                raise LieAlgebraError(
                    "Jacobi identity fails for "
                    f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})"
                )

    # -- elements ------------------------------------------------------------
    def unit(self, i):
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    def zero(self):
        return (ZERO,) * self.dim

    def bracket_basis(self, i, j):
        return self.c[i][j]

    def bracket(self, x, y):
        out = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, v in self.c[i][j].items():
                    out[k] += a * b * v
        return tuple(out)

    def is_abelian(self):
        return not any(self.c[i][j] for i in range(self.dim) for j in range(self.dim))

    def adjoint(self, x):
        """Matrix of ad x acting on coordinate columns."""
        cols = [self.bracket(x, self.unit(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def describe(self):
        rows = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.c[i][j]:
                    terms = " + ".join(
                        f"{scalar_str(v)}*{self.labels[k]}" for k, v in sorted(self.c[i][j].items())
                    )
                    rows.append(f"[{self.labels[i]}, {self.labels[j]}] = {terms}")
        return rows


# -- matrix helpers -----------------------------------------------------------


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def _trace(a):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def _elementary(n, i, j):
    return [[ONE if (r, s) == (i, j) else ZERO for s in range(n)] for r in range(n)]


def _from_matrices(matrices, coords, labels, **kw):
    """Structure constants of a matrix Lie algebra closed under commutators."""
    table = {}
    for i, x in enumerate(matrices):
        for j, y in enumerate(matrices):
            if i == j:
                continue
            xy, yx = _matmul(x, y), _matmul(y, x)
            comm = [[xy[r][s] - yx[r][s] for s in range(len(x))] for r in range(len(x))]
            v = coords(comm)
            table[(i, j)] = {k: a for k, a in enumerate(v) if a}
    return FiniteLieAlgebra(labels, table, matrices=matrices, **kw)


# -- builders -----------------------------------------------------------------


def build_abelian(n):
    if n < 1:
        raise LieAlgebraError("abelian(n) needs n >= 1")
    return FiniteLieAlgebra(
        [f"a{i}" for i in range(1, n + 1)], {}, reductive=(n, 0), name=f"abelian({n})"
    )


def build_sl(n):
    """sl(n) in the basis E_ij (i != j, row-major) followed by H_i = E_ii - E_{i+1,i+1}."""
    if n < 2:
        raise LieAlgebraError("sl(n) needs n >= 2")
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    matrices = [_elementary(n, i, j) for i, j in offdiag]
    labels = [f"E{i + 1}{j + 1}" for i, j in offdiag]
    for i in range(n - 1):
        h = _elementary(n, i, i)
        h[i + 1][i + 1] = -ONE
        matrices.append(h)
        labels.append(f"H{i + 1}")

    def coords(m):
        out = [m[i][j] for i, j in offdiag]
        acc = ZERO
        for i in range(n - 1):
            acc += m[i][i]
            out.append(acc)
        return out

    return _from_matrices(matrices, coords, labels, reductive=(0, 1), name=f"sl({n})")


def build_gl(n):
    """gl(n) in the elementary basis E_ij, row-major."""
    if n < 1:
        raise LieAlgebraError("gl(n) needs n >= 1")
    pairs = [(i, j) for i in range(n) for j in range(n)]
    matrices = [_elementary(n, i, j) for i, j in pairs]
    labels = [f"E{i + 1}{j + 1}" for i, j in pairs]
    reductive = (1, 1) if n >= 2 else (1, 0)
    return _from_matrices(
        matrices, lambda m: [m[i][j] for i, j in pairs], labels, reductive=reductive, name=f"gl({n})"
    )


def direct_sum(algebras):
    algebras = list(algebras)
    if not algebras:
        raise LieAlgebraError("direct sum of nothing")
    labels, table, offset, blocks = [], {}, 0, []
    for idx, g in enumerate(algebras):
        blocks += [tuple(i + offset for i in b) for b in g.blocks]
        labels += [f"{lab}_{idx + 1}" for lab in g.labels]
        for i in range(g.dim):
            for j in range(g.dim):
                if g.c[i][j]:
                    table[(i + offset, j + offset)] = {k + offset: v for k, v in g.c[i][j].items()}
        offset += g.dim
    matrices = None
    if all(g.matrices is not None for g in algebras):
        matrices = _block_diagonal(algebras)
    reductive = None
    if all(g.reductive is not None for g in algebras):
        reductive = (sum(g.reductive[0] for g in algebras), sum(g.reductive[1] for g in algebras))
    name = " + ".join(g.name for g in algebras)
    return FiniteLieAlgebra(
        labels, table, matrices=matrices, reductive=reductive, name=name, blocks=blocks
    )


def _block_diagonal(algebras):
    size = sum(len(g.matrices[0]) for g in algebras)
    out, start = [], 0
    for g in algebras:
        n = len(g.matrices[0])
        for m in g.matrices:
            big = [[ZERO] * size for _ in range(size)]
            for r in range(n):
                for s in range(n):
                    big[start + r][start + s] = m[r][s]
            out.append(big)
        start += n
    return out


def from_table(labels, brackets, name=None, reductive=None):
    """Build from {(label_i, label_j): {label_k: coefficient}} and close by antisymmetry.

    Only one of each pair [x, y] / [y, x] needs to be given; giving both
    inconsistently is reported by the antisymmetry check.
    """
    index = {lab: i for i, lab in enumerate(labels)}
    table = {}
    for (a, b), row in brackets.items():
        for lab in (a, b, *row):
            if lab not in index:
                raise LieAlgebraError(f"unknown basis label {lab!r}")
        table[(index[a], index[b])] = {index[k]: to_scalar(v) for k, v in row.items()}
    for (i, j), entry in list(table.items()):
        if (j, i) not in table:
            table[(j, i)] = {k: -v for k, v in entry.items()}
    return FiniteLieAlgebra(labels, table, name=name, reductive=reductive)


BUILDERS = {"abelian": build_abelian, "sl": build_sl, "gl": build_gl}


def build_named(text):
    """Parse names like 'sl(2)', 'gl(2)', 'abelian(3)', 'sl(2)+sl(2)'."""
    parts = [t.strip() for t in text.replace("⊕", "+").split("+")]
    algebras = []
    for part in parts:
        name, _, rest = part.partition("(")
        name = name.strip()
        if name not in BUILDERS or not rest.endswith(")"):
            raise LieAlgebraError(f"unknown Lie algebra {part!r}")
        try:
            n = int(rest[:-1])
        except ValueError:
            raise LieAlgebraError(f"bad size in {part!r}") from None
        algebras.append(BUILDERS[name](n))
    return algebras[0] if len(algebras) == 1 else direct_sum(algebras)


# -- bilinear and linear forms ----------------------------------------------


class BilinearForm:
    """Symmetric d x d matrix acting on coefficient tuples."""

    def __init__(self, matrix, name=None):
        self.matrix = tuple(tuple(to_scalar(v) for v in row) for row in matrix)
        self.name = name
        d = len(self.matrix)
        for i in range(d):
            for j in range(i + 1, d):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError(f"bilinear form is not symmetric at ({i}, {j})")

    def __call__(self, x, y):
        total = ZERO
        for i, a in enumerate(x):
            if a:
                row = self.matrix[i]
                for j, b in enumerate(y):
                    if b and row[j]:
                        total += a * b * row[j]
        return total

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __add__(self, other):
        return BilinearForm(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        )

    def scale(self, c):
        c = to_scalar(c)
        return BilinearForm([[c * a for a in r] for r in self.matrix], self.name)

    def is_zero(self):
        return not any(any(r) for r in self.matrix)

    def flat(self):
        return [a for r in self.matrix for a in r]

    def __repr__(self):
        body = "; ".join(" ".join(scalar_str(a) for a in r) for r in self.matrix)
        return f"BilinearForm({self.name or ''}[{body}])"


class LinearForm:
    def __init__(self, coeffs, name=None):
        self.coeffs = tuple(to_scalar(v) for v in coeffs)
        self.name = name

    def __call__(self, x):
        return sum((a * b for a, b in zip(self.coeffs, x) if a and b), ZERO)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        return f"LinearForm({self.name or ''}[{' '.join(scalar_str(a) for a in self.coeffs)}])"


def _need_matrices(g):
    if g.matrices is None:
        raise LieAlgebraError(f"{g.name} has no matrix realization")


def trace_form(g):
    """beta(x, y) = tr(xy) in the matrix realization."""
    _need_matrices(g)
    m = g.matrices
    return BilinearForm(
        [[_trace(_matmul(m[i], m[j])) for j in range(g.dim)] for i in range(g.dim)], "trace"
    )


def trace_outer_form(g):
    """(x, y) -> tr(x) tr(y)."""
    _need_matrices(g)
    t = [_trace(m) for m in g.matrices]
    return BilinearForm([[a * b for b in t] for a in t], "trace*trace")


def trace_linear_form(g):
    _need_matrices(g)
    return LinearForm([_trace(m) for m in g.matrices], "trace")


def killing_form(g):
    """tr(ad x ad y)."""
    ads = [g.adjoint(g.unit(i)) for i in range(g.dim)]
    return BilinearForm(
        [[_trace(_matmul(ads[i], ads[j])) for j in range(g.dim)] for i in range(g.dim)], "killing"
    )


def invariance_defect(g, form):
    """First basis triple (i, j, k) with form([x,y],z) != form(x,[y,z]), or None."""
    d = g.dim
    for i in range(d):
        for j in range(d):
            xy = g.bracket(g.unit(i), g.unit(j))
            for k in range(d):
                yz = g.bracket(g.unit(j), g.unit(k))
                if form(xy, g.unit(k)) != form(g.unit(i), yz):
                    return (g.labels[i], g.labels[j], g.labels[k])
    return None


def is_invariant(g, form):
    return invariance_defect(g, form) is None


def invariant_form_space(g):
    """Basis of symmetric invariant bilinear forms, by an exact linear solve."""
    d = g.dim
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    index = {p: n for n, p in enumerate(pairs)}

    def var(i, j):
        return index[(i, j) if i <= j else (j, i)]

    equations = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                row = {}
                for m, v in g.c[i][j].items():
                    key = var(m, k)
                    row[key] = row.get(key, ZERO) + v
                for m, v in g.c[j][k].items():
                    key = var(i, m)
                    row[key] = row.get(key, ZERO) - v
                if any(row.values()):
                    equations.append([row.get(n, ZERO) for n in range(len(pairs))])
    vectors = nullspace(equations, len(pairs)) if equations else [
        [ONE if n == m else ZERO for n in range(len(pairs))] for m in range(len(pairs))
    ]
    forms = []
    for vec in vectors:
        mat = [[ZERO] * d for _ in range(d)]
        for (i, j), n in index.items():
            mat[i][j] = mat[j][i] = vec[n]
        forms.append(BilinearForm(mat))
    return forms


def expected_invariant_dimension(g):
    if g.reductive is None:
        return None
    n, M = g.reductive
    return n * (n + 1) // 2 + M


def derived_subalgebra(g):
    """Echelon basis of [g, g]."""
    red = RowReducer()
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if g.c[i][j]:
                red.add(dict(g.c[i][j]))
    out = []
    for col in sorted(red.pivots):
        row = red.pivots[col][0]
        out.append(tuple(row.get(k, ZERO) for k in range(g.dim)))
    return out


def linear_forms_vanishing_on_derived(g):
    derived = derived_subalgebra(g)
    if not derived:
        return [LinearForm(g.unit(i)) for i in range(g.dim)]
    return [LinearForm(v) for v in nullspace([list(v) for v in derived], g.dim)]


def vanishes_on_derived(g, phi):
    return all(not phi(v) for v in derived_subalgebra(g))


def form_from_matrix(rows):
    return BilinearForm([[to_scalar(v) for v in r] for r in rows])


def linear_form(values):
    return LinearForm([to_scalar(v) for v in values])


def forms_rank(forms):
    red = RowReducer()
    for f in forms:
        red.add({k: v for k, v in enumerate(f.flat()) if v})
    return red.rank


__all__ = [
    "BilinearForm",
    "FiniteLieAlgebra",
    "LieAlgebraError",
    "LinearForm",
    "build_abelian",
    "build_gl",
    "build_named",
    "build_sl",
    "derived_subalgebra",
    "direct_sum",
    "expected_invariant_dimension",
    "form_from_matrix",
    "forms_rank",
    "from_table",
    "invariance_defect",
    "invariant_form_space",
    "is_invariant",
    "killing_form",
    "linear_form",
    "linear_forms_vanishing_on_derived",
    "trace_form",
    "trace_linear_form",
    "trace_outer_form",
    "vanishes_on_derived",
]
