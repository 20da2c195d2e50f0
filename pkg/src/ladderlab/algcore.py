"""Quivers, presented algebras, Pi(A_n), tensor algebras and flat modules.

Conventions:

* Paths compose function-style: for ``p: u -> v`` and ``q: v -> w`` the
  product ``q p`` means "p then q".  A path is stored as its word in
  application order, so ``q p`` has word ``p.word + q.word``.
* Modules are LEFT modules.  ``AModule.action[i]`` is the matrix of the
  basis element ``b_i``.
* ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .exactlin import (
    GF,
    QQ,
    Field,
    Matrix,
    block_diag,
    column_space,
    decode_scalar,
    field_from_json,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    quotient_projection,
    random_invertible,
    random_matrix,
    rank,
    rref,
    solve,
    stack_kernel,
)
from .rng import as_rng


# ---------------------------------------------------------------------------
# quivers


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple = ()  # (label, source, target), vertices are 1-based

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        for label, s, t in self.arrows:
            if not (1 <= s <= self.vertex_count and 1 <= t <= self.vertex_count):
                raise ValueError(f"arrow {label} has an endpoint out of range")

    def arrow(self, label):
        for a in self.arrows:
            if a[0] == label:
                return a
        raise KeyError(label)


def linear_quiver(n: int) -> Quiver:
    """A_n oriented 1 -> 2 -> ... -> n with arrows a1..a_{n-1}."""
    return Quiver(n, tuple((f"a{i}", i, i + 1) for i in range(1, n)))


def double_quiver(q: Quiver) -> Quiver:
    starred = tuple((f"{label}*", t, s) for label, s, t in q.arrows)
    return Quiver(q.vertex_count, tuple(q.arrows) + starred)


@dataclass(frozen=True)
class Path:
    source: int
    target: int
    word: tuple = ()  # arrow labels in application order

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def label(self) -> str:
        if not self.word:
            return f"e{self.source}"
        return " ".join(reversed(self.word))


# ---------------------------------------------------------------------------
# presented algebras


@dataclass(frozen=True, eq=False)
class PresentedAlgebra:
    field: Field
    basis_labels: tuple
    mult: np.ndarray
    idempotents: tuple
    generators: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        d = len(self.basis_labels)
        if self.mult.shape != (d, d, d):
            raise ValueError(f"structure constants must have shape {(d, d, d)}")
        self.mult.flags.writeable = False

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def generator_indices(self) -> tuple:
        if self.generators is None:
            return tuple(range(self.dim))
        return tuple(self.generators)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.element(1)
        return v

    def unit(self) -> np.ndarray:
        v = self.field.zeros(self.dim)
        for e in self.idempotents:
            v[e] = self.field.element(1)
        return v

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.einsum("i,j,ijk->k", x, y, self.mult) if self.dim else x
        return self.field.reduce(out)

    def left_matrix(self, i: int) -> Matrix:
        """Matrix of ``x -> b_i x`` on the basis."""
        return Matrix._wrap(self.field, np.array(self.mult[i, :, :].T))

    def right_matrix(self, i: int) -> Matrix:
        """Matrix of ``x -> x b_i`` on the basis."""
        return Matrix._wrap(self.field, np.array(self.mult[:, i, :].T))

    def left_matrix_of(self, x: np.ndarray) -> Matrix:
        return Matrix._wrap(self.field, self.field.reduce(np.einsum("i,ijk->kj", x, self.mult)))

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def __eq__(self, other):
        if not isinstance(other, PresentedAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.basis_labels == other.basis_labels
            and tuple(self.idempotents) == tuple(other.idempotents)
            and bool(np.all(self.mult == other.mult))
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"PresentedAlgebra({self.name or '?'}, dim={self.dim}, {self.field})"


def make_algebra(field: Field, labels, products: dict, idempotents, generators=None, name="") -> PresentedAlgebra:
    """Build an algebra from sparse products ``{(i, j): {k: coeff}}``."""
    d = len(labels)
    mult = field.zeros((d, d, d))
    for (i, j), out in products.items():
        for k, c in out.items():
            mult[i, j, k] = field.element(c)
    return PresentedAlgebra(field, tuple(labels), mult, tuple(idempotents),
                            None if generators is None else tuple(generators), name)


def algebra_check(a: PresentedAlgebra) -> list:
    """Associativity, unit and idempotent violations; empty means pass."""
    f = a.field
    d = a.dim
    problems = []
    c = a.mult
    flat_first = c.reshape(d, d * d)
    flat_last = c.reshape(d * d, d)
    bad = 0
    for i in range(d):
        # (b_i b_j) b_k  vs  b_i (b_j b_k)
        left = f.reduce(c[i] @ flat_first).reshape(d, d, d)
        right = f.reduce(flat_last @ c[i]).reshape(d, d, d)
        for j, k, _ in np.argwhere(left != right):
            bad += 1
            if bad <= 20:
                problems.append(f"associativity fails on ({a.basis_labels[i]}, "
                                f"{a.basis_labels[j]}, {a.basis_labels[k]})")
    if bad > 20:
        problems.append(f"... {bad - 20} more associativity failures")
    one = a.unit()
    for i in range(d):
        e = a.basis_vector(i)
        if np.any(a.product(one, e) != e) or np.any(a.product(e, one) != e):
            problems.append(f"idempotent sum is not a unit on {a.basis_labels[i]}")
    for x in a.idempotents:
        for y in a.idempotents:
            expect = a.basis_vector(x) if x == y else f.zeros(d)
            if np.any(a.product(a.basis_vector(x), a.basis_vector(y)) != expect):
                problems.append(f"idempotents {a.basis_labels[x]}, {a.basis_labels[y]} not orthogonal")
    return problems


# ---------------------------------------------------------------------------
# preprojective algebra of A_n


@lru_cache(maxsize=None)
def _paths_of_length(quiver: Quiver, length: int) -> tuple:
    if length == 0:
        return tuple(Path(v, v) for v in range(1, quiver.vertex_count + 1))
    out = []
    for p in _paths_of_length(quiver, length - 1):
        for label, s, t in quiver.arrows:
            if s == p.target:
                out.append(Path(p.source, t, p.word + (label,)))
    return tuple(out)


def _preprojective_relations(n: int):
    """Vertex components e_v c e_v as {word: coeff} (words in application order)."""
    rels = []
    for v in range(1, n + 1):
        rel = {}
        if v < n:
            rel[(f"a{v}", f"a{v}*")] = 1
        if v > 1:
            rel[(f"a{v - 1}*", f"a{v - 1}")] = -1
        if rel:
            rels.append((v, rel))
    return rels


@lru_cache(maxsize=None)
def _build_preprojective(n: int, field: Field):
    if n < 1:
        raise ValueError("n must be at least 1")
    qbar = double_quiver(linear_quiver(n))
    rels = _preprojective_relations(n)
    basis: list = []
    reduce_map: dict = {}  # word-path -> {basis index: coeff}
    for p in _paths_of_length(qbar, 0):
        reduce_map[p] = {len(basis): 1}
        basis.append(p)
    length = 1
    while True:
        paths = _paths_of_length(qbar, length)
        col = {p: i for i, p in enumerate(paths)}
        rows = []
        if length >= 2:
            for left_len in range(length - 1):
                right_len = length - 2 - left_len
                for w in _paths_of_length(qbar, left_len):  # applied first
                    for v, rel in rels:
                        if w.target != v:
                            continue
                        for u in _paths_of_length(qbar, right_len):  # applied last
                            if u.source != v:
                                continue
                            row = field.zeros(len(paths))
                            for word, c in rel.items():
                                full = Path(w.source, u.target, w.word + word + u.word)
                                row[col[full]] = field.reduce(row[col[full]] + field.element(c))
                            rows.append(row)
        if rows:
            R, pivots = rref(Matrix._wrap(field, np.array(rows)))
            R = R[: len(pivots)]
        else:
            R, pivots = field.zeros((0, len(paths))), []
        free = [c for c in range(len(paths)) if c not in set(pivots)]
        if not free:
            for p in paths:
                reduce_map[p] = {}
            break
        index_of_free = {}
        for c in free:
            index_of_free[c] = len(basis)
            basis.append(paths[c])
        for c, p in enumerate(paths):
            if c in index_of_free:
                reduce_map[p] = {index_of_free[c]: 1}
        for i, pc in enumerate(pivots):
            reduce_map[paths[pc]] = {
                index_of_free[fc]: field.reduce(-R[i, fc]) for fc in free if R[i, fc] != 0
            }
        length += 1
    max_len = length  # every path of this length lies in the ideal
    d = len(basis)
    mult = field.zeros((d, d, d))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if bj.target != bi.source:
                continue
            word = bj.word + bi.word
            if len(word) >= max_len:
                continue
            prod = Path(bj.source, bi.target, word)
            for k, c in reduce_map[prod].items():
                mult[i, j, k] = field.element(c)
    gens = tuple(i for i, p in enumerate(basis) if p.length <= 1)
    alg = PresentedAlgebra(field, tuple(p.label for p in basis), mult,
                           tuple(range(n)), gens, f"Pi(A{n})")
    return alg, tuple(basis)


def preprojective_algebra(n: int, field: Field = None) -> PresentedAlgebra:
    return _build_preprojective(n, field or GF())[0]


def preprojective_paths(n: int, field: Field = None) -> tuple:
    """The basis paths of :func:`preprojective_algebra`, in basis order."""
    return _build_preprojective(n, field or GF())[1]


def tensor_algebra(lam: PresentedAlgebra, pi: PresentedAlgebra) -> PresentedAlgebra:
    if lam.field != pi.field:
        raise ValueError("tensor factors over different fields")
    field = lam.field
    dl, dp = lam.dim, pi.dim
    d = dl * dp
    mult = field.reduce(np.einsum("ikm,jln->ijklmn", lam.mult, pi.mult)).reshape(d, d, d)
    labels = tuple(f"{x}⊗{y}" for x in lam.basis_labels for y in pi.basis_labels)
    idems = tuple(sorted(i * dp + j for i in lam.idempotents for j in pi.idempotents))
    pi_idems = set(pi.idempotents)
    gens = set(idems)
    for g in lam.generator_indices:
        for j in pi.idempotents:
            gens.add(g * dp + j)
    for g in pi.generator_indices:
        if g in pi_idems:
            continue
        for i in lam.idempotents:
            gens.add(i * dp + g)
    return PresentedAlgebra(field, labels, np.ascontiguousarray(mult), idems,
                            tuple(sorted(gens)), f"{lam.name or 'L'}⊗{pi.name or 'P'}")


def morita_ring(lam: PresentedAlgebra) -> PresentedAlgebra:
    """Delta_(0,0)(Lambda): 2x2 matrices over Lambda whose off-diagonal products vanish.

    Basis ``λ_b ⊗ E_rc`` ordered (b, E11, E12, E21, E22).  The products are
    [[a,n],[m,b]] [[a',n'],[m',b']] = [[aa', an'+nb'], [ma'+bm', bb']].
    """
    f = lam.field
    dl = lam.dim
    names = ["E11", "E12", "E21", "E22"]
    # (r1,c1)(r2,c2) -> (r1,c2) when c1 == r2, except n*m' and m*n' which vanish
    units = {}
    for x, (r1, c1) in enumerate([(1, 1), (1, 2), (2, 1), (2, 2)]):
        for y, (r2, c2) in enumerate([(1, 1), (1, 2), (2, 1), (2, 2)]):
            if c1 != r2 or r1 != c1 and r2 != c2:
                continue
            units[(x, y)] = names.index(f"E{r1}{c2}")
    d = 4 * dl
    mult = f.zeros((d, d, d))
    for i in range(dl):
        for j in range(dl):
            for (x, y), z in units.items():
                mult[i * 4 + x, j * 4 + y, z::4][:dl] = lam.mult[i, j, :]
    labels = tuple(f"{b}·{e}" for b in lam.basis_labels for e in names)
    idems = tuple(sorted([i * 4 + 0 for i in lam.idempotents] + [i * 4 + 3 for i in lam.idempotents]))
    return PresentedAlgebra(f, labels, mult, idems, None, f"Delta00({lam.name or 'L'})")


# ---------------------------------------------------------------------------
# the base algebra catalog


def field_algebra(field: Field = None) -> PresentedAlgebra:
    field = field or GF()
    return make_algebra(field, ["1"], {(0, 0): {0: 1}}, [0], [0], "k")


def dual_numbers(field: Field = None) -> PresentedAlgebra:
    """k[x]/(x^2)."""
    field = field or GF()
    return make_algebra(field, ["1", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                        [0], [0, 1], "dual")


def path_algebra_a2(field: Field = None) -> PresentedAlgebra:
    """Path algebra of 1 --al--> 2, basis (e1, e2, al)."""
    field = field or GF()
    prods = {(0, 0): {0: 1}, (1, 1): {1: 1}, (2, 0): {2: 1}, (1, 2): {2: 1}}
    return make_algebra(field, ["e1", "e2", "al"], prods, [0, 1], [0, 1, 2], "pathA2")


CATALOG = {"k": field_algebra, "dual": dual_numbers, "pathA2": path_algebra_a2}


@lru_cache(maxsize=None)
def builtin_algebra(name: str, field: Field = None) -> PresentedAlgebra:
    try:
        return CATALOG[name](field or GF())
    except KeyError:
        raise ValueError(f"unknown builtin algebra {name!r}; choose from {sorted(CATALOG)}") from None


# ---------------------------------------------------------------------------
# JSON


def algebra_to_json(a: PresentedAlgebra) -> dict:
    mult = []
    for i, j, k in zip(*np.nonzero(a.mult)):
        mult.append([int(i), int(j), int(k), a.field.encode(a.mult[i, j, k])])
    out = {
        "field": a.field.to_json(),
        "basis": list(a.basis_labels),
        "mult": mult,
        "idempotents": [int(e) for e in a.idempotents],
    }
    if a.generators is not None:
        out["generators"] = [int(g) for g in a.generators]
    if a.name:
        out["name"] = a.name
    return out


def algebra_from_json(data: dict) -> PresentedAlgebra:
    field = field_from_json(data["field"])
    labels = tuple(data["basis"])
    d = len(labels)
    mult = field.zeros((d, d, d))
    for i, j, k, c in data["mult"]:
        if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
            raise ValueError(f"structure constant index out of range: {(i, j, k)}")
        mult[i, j, k] = decode_scalar(field, c)
    idems = tuple(int(e) for e in data["idempotents"])
    for e in idems:
        if not 0 <= e < d:
            raise ValueError(f"idempotent index {e} out of range")
    gens = data.get("generators")
    return PresentedAlgebra(field, labels, mult, idems, None if gens is None else tuple(gens),
                            data.get("name", ""))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# flat modules


@dataclass(frozen=True, eq=False)
class AModule:
    algebra: PresentedAlgebra
    dim: int
    action: tuple  # one dim x dim Matrix per basis element

    def __post_init__(self):
        if len(self.action) != self.algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"action matrix has shape {m.shape}, expected {(self.dim, self.dim)}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act(self, x: np.ndarray) -> Matrix:
        """Action matrix of the algebra element with coordinates ``x``."""
        f = self.field
        if self.dim == 0:
            return Matrix.zeros(f, 0, 0)
        stack = np.stack([m.a for m in self.action])
        return Matrix._wrap(f, f.reduce(np.tensordot(x, stack, axes=1)))

    def __eq__(self, other):
        if not isinstance(other, AModule):
            return NotImplemented
        return (self.algebra == other.algebra and self.dim == other.dim
                and all(x == y for x, y in zip(self.action, other.action)))

    __hash__ = object.__hash__

    def __repr__(self):
        return f"AModule({self.algebra.name or '?'}, dim={self.dim})"


LambdaModule = AModule


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A linear map between two flat modules (``matrix`` is target x source)."""

    source: AModule
    target: AModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"map matrix has shape {self.matrix.shape}, "
                             f"expected {(self.target.dim, self.source.dim)}")

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, -self.matrix)

    def scale(self, s) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix.scale(s))

    def vec(self) -> np.ndarray:
        return self.matrix.vec()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.matrix == other.matrix

    __hash__ = object.__hash__


LambdaMap = ModuleMap


def module_check(m: AModule) -> list:
    """Violations of the module axioms (empty means pass)."""
    a = m.algebra
    f = a.field
    problems = []
    acts = m.action
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = acts[i] @ acts[j]
            rhs = m.act(a.mult[i, j, :])
            if lhs != rhs:
                problems.append(f"action({a.basis_labels[i]})·action({a.basis_labels[j]}) mismatch")
    if not m.act(a.unit()).is_identity():
        problems.append("unit does not act as the identity")
    return problems


def identity_map(m: AModule) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.field, m.dim))


def zero_map(x: AModule, y: AModule) -> ModuleMap:
    return ModuleMap(x, y, Matrix.zeros(x.field, y.dim, x.dim))


def zero_module(a: PresentedAlgebra) -> AModule:
    return AModule(a, 0, tuple(Matrix.zeros(a.field, 0, 0) for _ in range(a.dim)))


def regular_module(a: PresentedAlgebra) -> AModule:
    return AModule(a, a.dim, tuple(a.left_matrix(i) for i in range(a.dim)))


def is_module_map(x: AModule, y: AModule, mat: Matrix) -> bool:
    return all(y.action[g] @ mat == mat @ x.action[g] for g in x.algebra.generator_indices)


def _commutation_block(ax: Matrix, ay: Matrix) -> Matrix:
    # vec_r(ay X - X ax) = (ay ⊗ I - I ⊗ ax^T) vec_r(X)
    from .exactlin import kron
    f = ax.field
    return kron(ay, Matrix.identity(f, ax.rows)) - kron(Matrix.identity(f, ay.rows), ax.T)


def module_hom(x: AModule, y: AModule) -> list:
    """Basis of Hom_A(x, y) as ModuleMaps."""
    if x.algebra is not y.algebra and x.algebra != y.algebra:
        raise ValueError("modules over different algebras")
    f = x.field
    n = x.dim * y.dim
    if n == 0:
        return []
    blocks = (_commutation_block(x.action[g], y.action[g]) for g in x.algebra.generator_indices)
    k = stack_kernel(blocks, n, f)
    return [ModuleMap(x, y, Matrix._wrap(f, k.a[:, c].reshape(y.dim, x.dim).copy())) for c in range(k.cols)]


lambda_hom = module_hom


def restrict_to_subspace(m: AModule, basis: Matrix) -> AModule:
    """Submodule with the given column basis (assumed invariant)."""
    acts = []
    for mat in m.action:
        x = solve(basis, mat @ basis)
        if x is None:
            raise ValueError("subspace is not a submodule")
        acts.append(x)
    return AModule(m.algebra, basis.cols, tuple(acts))


def submodule_generated(m: AModule, vectors: Matrix) -> Matrix:
    """Column basis of the submodule generated by the columns of ``vectors``."""
    f = m.field
    span = column_space(vectors) if vectors.cols else Matrix.zeros(f, m.dim, 0)
    while True:
        imgs = [span] + [m.action[g] @ span for g in m.algebra.generator_indices]
        new = column_space(hstack(imgs)) if span.cols else span
        if new.cols == span.cols:
            return span
        span = new


def quotient_data(m: AModule, sub: Matrix):
    """``(Q, proj, section)`` for ``m / span(sub)``; ``sub`` must span a submodule.

    ``section`` lifts the quotient basis to unit vectors of ``m`` so that
    ``proj @ section`` is the identity.
    """
    f = m.field
    if sub.cols == 0:
        ident = Matrix.identity(f, m.dim)
        return m, ident, ident
    proj = quotient_projection(sub.T)
    _, _, free = _free_coords(sub)
    sec = f.zeros((m.dim, len(free)))
    for k, c in enumerate(free):
        sec[c, k] = f.element(1)
    section = Matrix._wrap(f, sec)
    acts = tuple(proj @ mat @ section for mat in m.action)
    return AModule(m.algebra, proj.rows, acts), proj, section


def quotient_module(m: AModule, sub: Matrix):
    """``(Q, projection map)`` for ``m / span(sub)``."""
    q, proj, _ = quotient_data(m, sub)
    return q, ModuleMap(m, q, proj)


def _free_coords(sub: Matrix):
    from .exactlin import complement_coordinates
    return complement_coordinates(sub.T)


def kernel_of(phi: ModuleMap):
    """``(K, inclusion)`` for the kernel of a module map."""
    k = kernel_basis(phi.matrix)
    km = restrict_to_subspace(phi.source, k)
    return km, ModuleMap(km, phi.source, k)


def cokernel_of(phi: ModuleMap):
    img = column_space(phi.matrix)
    return quotient_module(phi.target, img)


def direct_sum_modules(ms: Sequence[AModule], algebra: PresentedAlgebra = None) -> AModule:
    algebra = algebra or ms[0].algebra
    if not ms:
        return zero_module(algebra)
    acts = tuple(block_diag([m.action[i] for m in ms], algebra.field) for i in range(algebra.dim))
    return AModule(algebra, sum(m.dim for m in ms), acts)


def conjugate(m: AModule, s: Matrix) -> AModule:
    """The same module in the basis given by the columns of ``s``."""
    si = inverse(s)
    return AModule(m.algebra, m.dim, tuple(si @ a @ s for a in m.action))


# ---------------------------------------------------------------------------
# projectives, radicals and resolutions


def projective_module(a: PresentedAlgebra, idx: int) -> AModule:
    """``A e`` for the idempotent at position ``idx`` of ``a.idempotents``."""
    if not 0 <= idx < len(a.idempotents):
        raise IndexError(f"idempotent index {idx} out of range")
    return _projective_module(a, idx)


@lru_cache(maxsize=None)
def _projective_module(a: PresentedAlgebra, idx: int) -> AModule:
    basis = projective_basis(a, idx)
    return restrict_to_subspace(regular_module(a), basis)


@lru_cache(maxsize=None)
def projective_basis(a: PresentedAlgebra, idx: int) -> Matrix:
    """Columns: a basis of ``A e`` inside ``A`` (pivot columns of right multiplication)."""
    return column_space(a.right_matrix(a.idempotents[idx]))


def radical_indices(a: PresentedAlgebra) -> tuple:
    """Non-idempotent basis indices, provided they span a nilpotent ideal."""
    return _radical_indices(a)


@lru_cache(maxsize=None)
def _radical_indices(a: PresentedAlgebra) -> tuple:
    idem = set(a.idempotents)
    rad = [i for i in range(a.dim) if i not in idem]
    mask = np.zeros(a.dim, dtype=bool)
    mask[rad] = True
    # two-sided ideal
    if np.any(a.mult[rad][:, :, ~mask] != 0) or np.any(a.mult[:, rad][:, :, ~mask] != 0):
        raise NotImplementedError(f"{a!r} is not presented as basic (radical not spanned by non-idempotents)")
    # nilpotent: J^k = 0 for some k <= dim + 1
    span = Matrix.identity(a.field, a.dim).submatrix(range(a.dim), rad) if rad else None
    for _ in range(a.dim + 1):
        if span is None or span.cols == 0:
            return tuple(rad)
        span = column_space(hstack([a.left_matrix(r) @ span for r in rad]))
    raise NotImplementedError(f"{a!r}: non-idempotent span is not nilpotent")


def is_basic_presented(a: PresentedAlgebra) -> bool:
    try:
        radical_indices(a)
    except NotImplementedError:
        return False
    return True


def radical_of(m: AModule) -> Matrix:
    rad = radical_indices(m.algebra)
    if not rad or m.dim == 0:
        return Matrix.zeros(m.field, m.dim, 0)
    return column_space(hstack([m.action[r] for r in rad]))


@lru_cache(maxsize=None)
def _projective_radical(a: PresentedAlgebra, pos: int) -> Matrix:
    return radical_of(projective_module(a, pos))


def top_multiplicities(m: AModule) -> list:
    """Multiplicity of each simple (indexed like ``idempotents``) in the top."""
    rad = radical_of(m)
    _, proj = quotient_module(m, rad)
    return [rank(proj.matrix @ m.action[e]) for e in m.algebra.idempotents]


@dataclass(frozen=True, eq=False)
class ProjectiveSum:
    """A direct sum of ``A e_i`` with the generator of each summand recorded."""

    module: AModule
    summands: tuple  # idempotent positions
    bases: tuple  # per summand: columns of A spanning A e_i
    offsets: tuple


def projective_sum(a: PresentedAlgebra, summands: Sequence[int]) -> ProjectiveSum:
    parts = [projective_module(a, i) for i in summands]
    bases = tuple(projective_basis(a, i) for i in summands)
    offsets, o = [], 0
    for p in parts:
        offsets.append(o)
        o += p.dim
    mod = direct_sum_modules(parts, a)
    return ProjectiveSum(mod, tuple(summands), bases, tuple(offsets))


def map_from_projective(ps: ProjectiveSum, target: AModule, images: Sequence[np.ndarray]) -> Matrix:
    """The module map sending the generator ``e_i`` of summand ``s`` to ``images[s]``."""
    a = target.algebra
    f = a.field
    cols = []
    for basis, y in zip(ps.bases, images):
        y = Matrix._wrap(f, np.array(y).reshape(-1, 1))
        for c in range(basis.cols):
            cols.append(target.act(basis.a[:, c]) @ y)
    if not cols:
        return Matrix.zeros(f, target.dim, 0)
    return hstack(cols)


def projective_cover_flat(m: AModule):
    """Minimal ``(ProjectiveSum, surjection matrix)`` onto ``m``.

    Generators are chosen top-down: for each primitive idempotent ``e`` pick
    vectors of ``e m`` whose classes form a basis of ``e (m / rad m)``.
    """
    a = m.algebra
    f = a.field
    rad = radical_of(m)
    _, top = quotient_module(m, rad)
    summands, images = [], []
    for pos, e in enumerate(a.idempotents):
        if m.dim == 0:
            break
        cand = column_space(m.action[e])
        if cand.cols == 0:
            continue
        _, pivots = rref(top.matrix @ cand)
        for c in pivots:
            summands.append(pos)
            images.append(cand.a[:, c])
    ps = projective_sum(a, summands)
    return ps, map_from_projective(ps, m, images) if summands else Matrix.zeros(f, m.dim, 0)


def hom_from_projective(ps: ProjectiveSum, target: AModule) -> list:
    """Basis of Hom(ps.module, target): one map per basis vector of each ``e_i target``."""
    f = target.field
    out = []
    a = target.algebra
    for s, pos in enumerate(ps.summands):
        cand = column_space(target.action[a.idempotents[pos]]) if target.dim else Matrix.zeros(f, 0, 0)
        for c in range(cand.cols):
            images = [f.zeros(target.dim) for _ in ps.summands]
            images[s] = cand.a[:, c]
            out.append(map_from_projective(ps, target, images))
    return out


def projective_resolution(m: AModule, length: int):
    """Truncated minimal resolution ``P_0 <- P_1 <- ... <- P_length``.

    Returns ``(projectives, differentials)`` where ``differentials[0]`` is
    the augmentation ``P_0 -> m`` and ``differentials[k]`` maps ``P_k -> P_{k-1}``.
    """
    projectives, diffs = [], []
    current = m
    incl = Matrix.identity(m.field, m.dim)
    for _ in range(length + 1):
        ps, cover = projective_cover_flat(current)
        projectives.append(ps)
        diffs.append(incl @ cover)
        k = kernel_basis(cover)
        current = restrict_to_subspace(ps.module, k)
        incl = k
    return projectives, diffs


def ext_dim(x: AModule, y: AModule, degree: int) -> int:
    """dim Ext^degree_A(x, y) from a truncated minimal projective resolution."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    projectives, diffs = projective_resolution(x, degree + 1)
    homs = [hom_from_projective(ps, y) for ps in projectives]

    def pullback_rank(k: int) -> int:
        # rank of Hom(P_{k-1}, y) -> Hom(P_k, y), h -> h d_k
        if k == 0 or not homs[k - 1] or diffs[k].cols == 0:
            return 0
        cols = [(h @ diffs[k]).vec() for h in homs[k - 1]]
        return rank(Matrix._wrap(y.field, np.stack(cols, axis=1)))

    return len(homs[degree]) - pullback_rank(degree + 1) - pullback_rank(degree)


# ---------------------------------------------------------------------------
# Nakayama functors in flat form


def dual_regular(a: PresentedAlgebra) -> AModule:
    """D A = Hom_k(A, k) with left action (a phi)(x) = phi(x a), in the dual basis."""
    return AModule(a, a.dim, tuple(a.right_matrix(i).T for i in range(a.dim)))


def nakayama_flat(m: AModule) -> AModule:
    """D A ⊗_A m, as a quotient of D A ⊗_k m by the balancing relations."""
    a = m.algebra
    f = a.field
    d, dm = a.dim, m.dim
    if dm == 0:
        return zero_module(a)
    ident_m = Matrix.identity(f, dm)
    ident_d = Matrix.identity(f, d)
    from .exactlin import kron
    rel_blocks = []
    for g in a.generator_indices:
        right_dual = a.left_matrix(g).T  # phi -> phi·b_g
        rel_blocks.append(kron(right_dual, ident_m) - kron(ident_d, m.action[g]))
    sub = column_space(hstack(rel_blocks))
    big = AModule(a, d * dm, tuple(kron(a.right_matrix(i).T, ident_m) for i in range(d)))
    q, _ = quotient_module(big, sub)
    return q


def nakayama_inv_flat(m: AModule) -> AModule:
    """Hom_A(D A, m) with action (b h)(phi) = h(phi b)."""
    a = m.algebra
    f = a.field
    da = dual_regular(a)
    basis = module_hom(da, m)
    if not basis:
        return zero_module(a)
    big = Matrix._wrap(f, np.stack([h.vec() for h in basis], axis=1))
    acts = []
    for i in range(a.dim):
        right_dual = a.left_matrix(i).T
        imgs = Matrix._wrap(f, np.stack([(h.matrix @ right_dual).vec() for h in basis], axis=1))
        x = solve(big, imgs)
        if x is None:
            raise ArithmeticError("Hom_A(DA, M) is not closed under the induced action")
        acts.append(x)
    return AModule(a, len(basis), tuple(acts))


# ---------------------------------------------------------------------------
# isomorphism search and random modules


def find_module_iso(x: AModule, y: AModule, rng=0, tries: int = 64):
    """``(iso_or_None, exhausted)`` by random combinations of Hom(x, y)."""
    if x.dim != y.dim:
        return None, False
    if x.dim == 0:
        return zero_map(x, y), False
    hxy = module_hom(x, y)
    if not hxy or len(hxy) != len(module_hom(y, x)):
        return None, False
    rng = as_rng(rng)
    f = x.field
    for _ in range(tries):
        coeffs = random_matrix(f, len(hxy), 1, rng).a[:, 0]
        mat = hxy[0].matrix.scale(coeffs[0])
        for c, h in zip(coeffs[1:], hxy[1:]):
            mat = mat + h.matrix.scale(c)
        if is_invertible(mat):
            return ModuleMap(x, y, mat), False
    return None, True


def module_iso_test(x: AModule, y: AModule, rng=0) -> bool:
    return find_module_iso(x, y, rng)[0] is not None


def random_module(a: PresentedAlgebra, max_dim: int, rng, min_dim: int = 0, change_basis: bool = True) -> AModule:
    """Direct sum of random cyclic quotients ``A e / A v`` with dim in [min_dim, max_dim]."""
    rng = as_rng(rng)
    f = a.field
    target = rng.between(min_dim, max_dim)
    parts = []
    total = 0
    guard = 0
    while total < target and guard < 50:
        guard += 1
        pos = rng.below(len(a.idempotents))
        p = projective_module(a, pos)
        rad = _projective_radical(a, pos)
        if rad.cols and rng.chance(2, 3):
            coeffs = random_matrix(f, rad.cols, 1, rng)
            sub = submodule_generated(p, rad @ coeffs)
            if rng.chance(1, 3):
                sub = rad
            q, _ = quotient_module(p, sub)
        else:
            q = p
        if q.dim == 0 or total + q.dim > target:
            continue
        parts.append(q)
        total += q.dim
    m = direct_sum_modules(parts, a)
    if change_basis and m.dim > 1:
        m = conjugate(m, random_invertible(f, m.dim, rng))
    return m


def random_module_map(x: AModule, y: AModule, rng) -> ModuleMap:
    rng = as_rng(rng)
    basis = module_hom(x, y)
    out = zero_map(x, y)
    for h in basis:
        out = out + h.scale(rng.below(x.field.p) if hasattr(x.field, "p") else rng.below(9) - 4)
    return out


def direct_sum_with_maps(ms: Sequence[AModule], algebra: PresentedAlgebra = None):
    """``(total, injections, projections)`` for a finite direct sum."""
    total = direct_sum_modules(list(ms), algebra)
    f = total.field
    injs, projs = [], []
    off = 0
    for m in ms:
        arr = f.zeros((total.dim, m.dim))
        for j in range(m.dim):
            arr[off + j, j] = f.element(1)
        inj = Matrix._wrap(f, arr)
        injs.append(ModuleMap(m, total, inj))
        projs.append(ModuleMap(total, m, inj.T))
        off += m.dim
    return total, injs, projs


def is_projective_module(m: AModule) -> bool:
    ps, _ = projective_cover_flat(m)
    return ps.module.dim == m.dim
