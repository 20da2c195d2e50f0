"""Tuple-form modules over Pi_n(Lambda) = Lambda ⊗ Pi(A_n).

A module is ``(X_1, ..., X_n; f_1, g_1, ..., f_{n-1}, g_{n-1})`` with
``f_i: X_i -> X_{i+1}`` and ``g_i: X_{i+1} -> X_i`` Lambda-linear, subject to

    g_1 f_1 = 0 = f_{n-1} g_{n-1},    f_i g_i = g_{i+1} f_{i+1}.

Indices in code are 0-based: ``f[i]`` maps ``parts[i] -> parts[i+1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import algcore
from .algcore import AModule, ModuleMap, PresentedAlgebra, module_hom
from .exactlin import (
    Field,
    Matrix,
    block_diag,
    column_space,
    decode_scalar,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    random_matrix,
    solve,
    stack_kernel,
)
from .rng import as_rng


# ---------------------------------------------------------------------------
# the ambient algebra


@dataclass(frozen=True, eq=False)
class PiAlgebra:
    """Lambda together with n; caches Pi(A_n) and the flat algebra Lambda ⊗ Pi(A_n)."""

    lam: PresentedAlgebra
    n: int

    @property
    def field(self) -> Field:
        return self.lam.field

    @property
    def pi(self) -> PresentedAlgebra:
        return algcore.preprojective_algebra(self.n, self.field)

    @property
    def paths(self) -> tuple:
        return algcore.preprojective_paths(self.n, self.field)

    @property
    def flat(self) -> PresentedAlgebra:
        return _flat_algebra(self.lam, self.n)

    def flat_index(self, lam_index: int, pi_index: int) -> int:
        return lam_index * self.pi.dim + pi_index

    def vertex_idempotent(self, v: int) -> np.ndarray:
        """Coordinates of ``1 ⊗ e_v`` (v is 0-based) in the flat algebra."""
        x = self.field.zeros(self.flat.dim)
        for e in self.lam.idempotents:
            x[self.flat_index(e, v)] = self.field.element(1)
        return x

    def arrow_element(self, label: str) -> np.ndarray:
        """Coordinates of ``1 ⊗ label`` in the flat algebra."""
        j = self.pi.index(label)
        x = self.field.zeros(self.flat.dim)
        for e in self.lam.idempotents:
            x[self.flat_index(e, j)] = self.field.element(1)
        return x


@lru_cache(maxsize=None)
def _flat_algebra(lam: PresentedAlgebra, n: int) -> PresentedAlgebra:
    return algcore.tensor_algebra(lam, algcore.preprojective_algebra(n, lam.field))


@lru_cache(maxsize=None)
def pi_algebra(lam: PresentedAlgebra, n: int) -> PiAlgebra:
    if n < 1:
        raise ValueError("n must be at least 1")
    return PiAlgebra(lam, n)


# ---------------------------------------------------------------------------
# objects and morphisms


@dataclass(frozen=True, eq=False)
class PiModule:
    lam: PresentedAlgebra
    parts: tuple  # AModule over lam
    f: tuple  # Matrix parts[i+1] x parts[i]
    g: tuple  # Matrix parts[i] x parts[i+1]

    def __post_init__(self):
        n = len(self.parts)
        if n < 1:
            raise ValueError("a Pi-module needs at least one part")
        if len(self.f) != n - 1 or len(self.g) != n - 1:
            raise ValueError(f"need {n - 1} maps f and g")
        for x in self.parts:
            if x.algebra is not self.lam and x.algebra != self.lam:
                raise ValueError("part over a different base algebra")
        for i in range(n - 1):
            if self.f[i].shape != (self.parts[i + 1].dim, self.parts[i].dim):
                raise ValueError(f"f{i + 1} has shape {self.f[i].shape}")
            if self.g[i].shape != (self.parts[i].dim, self.parts[i + 1].dim):
                raise ValueError(f"g{i + 1} has shape {self.g[i].shape}")

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def dims(self) -> tuple:
        return tuple(x.dim for x in self.parts)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def field(self) -> Field:
        return self.lam.field

    @property
    def ring(self) -> PiAlgebra:
        return pi_algebra(self.lam, self.n)

    def f_map(self, i: int) -> ModuleMap:
        return ModuleMap(self.parts[i], self.parts[i + 1], self.f[i])

    def g_map(self, i: int) -> ModuleMap:
        return ModuleMap(self.parts[i + 1], self.parts[i], self.g[i])

    def __eq__(self, other):
        if not isinstance(other, PiModule):
            return NotImplemented
        return (self.n == other.n and self.lam == other.lam
                and all(x == y for x, y in zip(self.parts, other.parts))
                and all(x == y for x, y in zip(self.f, other.f))
                and all(x == y for x, y in zip(self.g, other.g)))

    __hash__ = object.__hash__

    def __repr__(self):
        return f"PiModule(n={self.n}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PiMorphism:
    source: PiModule
    target: PiModule
    components: tuple  # Matrix target.parts[i] x source.parts[i]

    def __post_init__(self):
        if self.source.n != self.target.n or len(self.components) != self.source.n:
            raise ValueError("morphism components do not match the module shapes")
        for i, a in enumerate(self.components):
            if a.shape != (self.target.dims[i], self.source.dims[i]):
                raise ValueError(f"component {i + 1} has shape {a.shape}")

    def __matmul__(self, other: "PiMorphism") -> "PiMorphism":
        return PiMorphism(other.source, self.target,
                          tuple(a @ b for a, b in zip(self.components, other.components)))

    def __add__(self, other: "PiMorphism") -> "PiMorphism":
        return PiMorphism(self.source, self.target,
                          tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PiMorphism") -> "PiMorphism":
        return PiMorphism(self.source, self.target,
                          tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "PiMorphism":
        return PiMorphism(self.source, self.target, tuple(-a for a in self.components))

    def scale(self, s) -> "PiMorphism":
        return PiMorphism(self.source, self.target, tuple(a.scale(s) for a in self.components))

    def vec(self) -> np.ndarray:
        f = self.source.field
        parts = [a.vec() for a in self.components]
        return np.concatenate(parts) if parts else f.zeros(0)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)

    def __eq__(self, other):
        if not isinstance(other, PiMorphism):
            return NotImplemented
        return all(a == b for a, b in zip(self.components, other.components))

    __hash__ = object.__hash__


def make_module(lam: PresentedAlgebra, parts, f, g) -> PiModule:
    """Convenience constructor accepting nested lists for the maps."""
    field = lam.field

    def as_matrix(x, rows, cols):
        if isinstance(x, Matrix):
            return x
        if isinstance(x, ModuleMap):
            return x.matrix
        if rows == 0 or cols == 0:
            return Matrix.zeros(field, rows, cols)
        return Matrix(field, x)

    parts = tuple(parts)
    f = tuple(as_matrix(x, parts[i + 1].dim, parts[i].dim) for i, x in enumerate(f))
    g = tuple(as_matrix(x, parts[i].dim, parts[i + 1].dim) for i, x in enumerate(g))
    return PiModule(lam, parts, f, g)


def free_module(lam: PresentedAlgebra, d: int) -> AModule:
    """Lambda^d when Lambda = k; for other Lambda use ``algcore`` constructors."""
    if lam.dim != 1:
        raise ValueError("free_module(d) is only defined for Lambda = k")
    return AModule(lam, d, (Matrix.identity(lam.field, d),))


def identity(m: PiModule) -> PiMorphism:
    return PiMorphism(m, m, tuple(Matrix.identity(m.field, d) for d in m.dims))


def zero_morphism(m: PiModule, nm: PiModule) -> PiMorphism:
    return PiMorphism(m, nm, tuple(Matrix.zeros(m.field, b, a) for a, b in zip(m.dims, nm.dims)))


def zero_pi_module(lam: PresentedAlgebra, n: int) -> PiModule:
    z = algcore.zero_module(lam)
    zm = Matrix.zeros(lam.field, 0, 0)
    return PiModule(lam, (z,) * n, (zm,) * (n - 1), (zm,) * (n - 1))


def check_pi_relations(m: PiModule) -> list:
    """Violations of Lambda-linearity and the preprojective relations."""
    problems = []
    n = m.n
    for i, x in enumerate(m.parts):
        for msg in algcore.module_check(x):
            problems.append(f"X{i + 1}: {msg}")
    for i in range(n - 1):
        if not algcore.is_module_map(m.parts[i], m.parts[i + 1], m.f[i]):
            problems.append(f"f{i + 1} is not Lambda-linear")
        if not algcore.is_module_map(m.parts[i + 1], m.parts[i], m.g[i]):
            problems.append(f"g{i + 1} is not Lambda-linear")
    if n >= 2:
        if not (m.g[0] @ m.f[0]).is_zero():
            problems.append("g1 f1 != 0")
        if not (m.f[n - 2] @ m.g[n - 2]).is_zero():
            problems.append(f"f{n - 1} g{n - 1} != 0")
    for i in range(n - 2):
        if m.f[i] @ m.g[i] != m.g[i + 1] @ m.f[i + 1]:
            problems.append(f"f{i + 1} g{i + 1} != g{i + 2} f{i + 2}")
    return problems


def is_pi_morphism(phi: PiMorphism) -> bool:
    return not morphism_problems(phi)


def morphism_problems(phi: PiMorphism) -> list:
    m, nm = phi.source, phi.target
    a = phi.components
    problems = []
    for i in range(m.n):
        if not algcore.is_module_map(m.parts[i], nm.parts[i], a[i]):
            problems.append(f"component {i + 1} is not Lambda-linear")
    for i in range(m.n - 1):
        if a[i + 1] @ m.f[i] != nm.f[i] @ a[i]:
            problems.append(f"square with f{i + 1} fails")
        if a[i] @ m.g[i] != nm.g[i] @ a[i + 1]:
            problems.append(f"square with g{i + 1} fails")
    return problems


# ---------------------------------------------------------------------------
# hom spaces


def lambda_hom(x: AModule, y: AModule) -> list:
    return module_hom(x, y)


def _check_compatible(m: PiModule, nm: PiModule):
    if m.n != nm.n:
        raise ValueError(f"shape mismatch: n={m.n} vs n={nm.n}")
    if m.lam is not nm.lam and m.lam != nm.lam:
        raise ValueError("modules over different base algebras")


def pi_hom(m: PiModule, nm: PiModule) -> list:
    """Basis of Hom(m, nm).

    Each component is first parametrized by a basis of Hom_Lambda, then the
    commuting squares with every f and g are imposed as one linear system
    in those coordinates.
    """
    _check_compatible(m, nm)
    field = m.field
    comp = [module_hom(m.parts[i], nm.parts[i]) for i in range(m.n)]
    offsets = np.cumsum([0] + [len(c) for c in comp])
    total = int(offsets[-1])
    if total == 0:
        return []
    blocks = []
    for i in range(m.n - 1):
        # a_{i+1} f_i - f'_i a_i
        blk = field.zeros((nm.dims[i + 1] * m.dims[i], total))
        for k, h in enumerate(comp[i + 1]):
            blk[:, offsets[i + 1] + k] = (h.matrix @ m.f[i]).vec()
        for k, h in enumerate(comp[i]):
            blk[:, offsets[i] + k] = field.reduce(-(nm.f[i] @ h.matrix).vec())
        blocks.append(Matrix._wrap(field, blk))
        # a_i g_i - g'_i a_{i+1}
        blk = field.zeros((nm.dims[i] * m.dims[i + 1], total))
        for k, h in enumerate(comp[i]):
            blk[:, offsets[i] + k] = (h.matrix @ m.g[i]).vec()
        for k, h in enumerate(comp[i + 1]):
            blk[:, offsets[i + 1] + k] = field.reduce(-(nm.g[i] @ h.matrix).vec())
        blocks.append(Matrix._wrap(field, blk))
    sol = stack_kernel(blocks, total, field)
    out = []
    for c in range(sol.cols):
        coeffs = sol.a[:, c]
        parts = []
        for i in range(m.n):
            acc = Matrix.zeros(field, nm.dims[i], m.dims[i])
            for k, h in enumerate(comp[i]):
                x = coeffs[offsets[i] + k]
                if x != 0:
                    acc = acc + h.matrix.scale(x)
            parts.append(acc)
        out.append(PiMorphism(m, nm, tuple(parts)))
    return out


def hom_dim(m: PiModule, nm: PiModule) -> int:
    return len(pi_hom(m, nm))


def span_rank(maps: Sequence) -> int:
    """Rank of a family of morphisms (anything with ``vec``)."""
    maps = list(maps)
    if not maps:
        return 0
    vecs = [x.vec() for x in maps]
    if vecs[0].size == 0:
        return 0
    field = maps[0].source.field
    return rank(Matrix._wrap(field, np.stack(vecs, axis=1)))


# ---------------------------------------------------------------------------
# kernels, cokernels, sums


def pi_kernel(phi: PiMorphism):
    """``(K, inclusion)``."""
    m = phi.source
    bases = [kernel_basis(a) for a in phi.components]
    parts = tuple(algcore.restrict_to_subspace(m.parts[i], b) for i, b in enumerate(bases))
    f = tuple(_restrict(m.f[i], bases[i], bases[i + 1]) for i in range(m.n - 1))
    g = tuple(_restrict(m.g[i], bases[i + 1], bases[i]) for i in range(m.n - 1))
    k = PiModule(m.lam, parts, f, g)
    return k, PiMorphism(k, m, tuple(bases))


def _restrict(mat: Matrix, src: Matrix, dst: Matrix) -> Matrix:
    x = solve(dst, mat @ src)
    if x is None:
        raise ArithmeticError("map does not preserve the subspace")
    return x


def pi_cokernel(phi: PiMorphism):
    """``(C, projection)``."""
    nm = phi.target
    data = [algcore.quotient_data(nm.parts[i], column_space(a)) for i, a in enumerate(phi.components)]
    parts = tuple(d[0] for d in data)
    f = tuple(data[i + 1][1] @ nm.f[i] @ data[i][2] for i in range(nm.n - 1))
    g = tuple(data[i][1] @ nm.g[i] @ data[i + 1][2] for i in range(nm.n - 1))
    c = PiModule(nm.lam, parts, f, g)
    return c, PiMorphism(nm, c, tuple(d[1] for d in data))


def pi_image(phi: PiMorphism):
    """``(I, inclusion)`` for the image of ``phi`` inside its target."""
    nm = phi.target
    bases = [column_space(a) for a in phi.components]
    parts = tuple(algcore.restrict_to_subspace(nm.parts[i], b) for i, b in enumerate(bases))
    f = tuple(_restrict(nm.f[i], bases[i], bases[i + 1]) for i in range(nm.n - 1))
    g = tuple(_restrict(nm.g[i], bases[i + 1], bases[i]) for i in range(nm.n - 1))
    im = PiModule(nm.lam, parts, f, g)
    return im, PiMorphism(im, nm, tuple(bases))


def direct_sum(*mods: PiModule) -> PiModule:
    if len(mods) == 1 and isinstance(mods[0], (list, tuple)):
        mods = tuple(mods[0])
    m0 = mods[0]
    n = m0.n
    for m in mods:
        _check_compatible(m0, m)
    field = m0.field
    parts = tuple(algcore.direct_sum_modules([m.parts[i] for m in mods], m0.lam) for i in range(n))
    f = tuple(block_diag([m.f[i] for m in mods], field) for i in range(n - 1))
    g = tuple(block_diag([m.g[i] for m in mods], field) for i in range(n - 1))
    return PiModule(m0.lam, parts, f, g)


def sum_injection(mods: Sequence[PiModule], k: int) -> PiMorphism:
    """Inclusion of the k-th summand into ``direct_sum(mods)``."""
    total = direct_sum(list(mods))
    field = total.field
    comps = []
    for i in range(total.n):
        arr = field.zeros((total.dims[i], mods[k].dims[i]))
        off = sum(m.dims[i] for m in mods[:k])
        for j in range(mods[k].dims[i]):
            arr[off + j, j] = field.element(1)
        comps.append(Matrix._wrap(field, arr))
    return PiMorphism(mods[k], total, tuple(comps))


def sum_projection(mods: Sequence[PiModule], k: int) -> PiMorphism:
    inj = sum_injection(mods, k)
    return PiMorphism(inj.target, inj.source, tuple(a.T for a in inj.components))


def flip(m: PiModule) -> PiModule:
    """Reverse the parts; new f_i is old g_{n-i} and new g_i is old f_{n-i}."""
    return PiModule(m.lam, tuple(reversed(m.parts)), tuple(reversed(m.g)), tuple(reversed(m.f)))


def flip_morphism(phi: PiMorphism) -> PiMorphism:
    return PiMorphism(flip(phi.source), flip(phi.target), tuple(reversed(phi.components)))


# ---------------------------------------------------------------------------
# flat form


def _composite(m: PiModule, path) -> Matrix:
    field = m.field
    cur = Matrix.identity(field, m.dims[path.source - 1])
    for label in path.word:
        if label.endswith("*"):
            k = int(label[1:-1])  # g_k: X_{k+1} -> X_k
            cur = m.g[k - 1] @ cur
        else:
            k = int(label[1:])  # f_k: X_k -> X_{k+1}
            cur = m.f[k - 1] @ cur
    return cur


def to_flat(m: PiModule) -> AModule:
    """The same module over Lambda ⊗ Pi(A_n), on the space X_1 ⊕ ... ⊕ X_n."""
    ring = m.ring
    field = m.field
    offs = np.cumsum([0] + list(m.dims))
    total = int(offs[-1])
    paths = ring.paths
    comps = [_composite(m, p) for p in paths]
    acts = []
    for li in range(m.lam.dim):
        for pj, p in enumerate(paths):
            arr = field.zeros((total, total))
            u, w = p.source - 1, p.target - 1
            if m.dims[u] and m.dims[w]:
                block = m.parts[w].action[li] @ comps[pj]
                arr[offs[w]:offs[w + 1], offs[u]:offs[u + 1]] = block.a
            acts.append(Matrix._wrap(field, arr))
    return AModule(ring.flat, total, tuple(acts))


def to_flat_morphism(phi: PiMorphism) -> ModuleMap:
    return ModuleMap(to_flat(phi.source), to_flat(phi.target),
                     block_diag(list(phi.components), phi.source.field))


def from_flat_basis(x: AModule, lam: PresentedAlgebra, n: int):
    """``(M, S)``: the tuple form of ``x`` and the change of basis it was read in.

    ``S`` has the vertex pieces ``e_1 x, ..., e_n x`` as consecutive column
    blocks, so flat matrices convert by ``S^{-1} (.) S``.
    """
    ring = pi_algebra(lam, n)
    if x.algebra is not ring.flat and x.algebra != ring.flat:
        raise ValueError("module is not over Lambda ⊗ Pi(A_n) for this Lambda and n")
    field = lam.field
    pieces = [column_space(x.act(ring.vertex_idempotent(v))) for v in range(n)]
    dims = [p.cols for p in pieces]
    if sum(dims) != x.dim:
        raise ArithmeticError("vertex idempotents do not decompose the module")
    S = hstack(pieces) if x.dim else Matrix.zeros(field, 0, 0)
    T = inverse(S) if x.dim else S
    offs = np.cumsum([0] + dims)

    def block(mat: Matrix, w: int, u: int) -> Matrix:
        conj = T @ mat @ S if x.dim else mat
        return conj.submatrix(range(offs[w], offs[w + 1]), range(offs[u], offs[u + 1]))

    parts = []
    for v in range(n):
        acts = tuple(block(x.action[ring.flat_index(li, v)], v, v) for li in range(lam.dim))
        parts.append(AModule(lam, dims[v], acts))
    f, g = [], []
    for i in range(n - 1):
        f.append(block(x.act(ring.arrow_element(f"a{i + 1}")), i + 1, i))
        g.append(block(x.act(ring.arrow_element(f"a{i + 1}*")), i, i + 1))
    return PiModule(lam, tuple(parts), tuple(f), tuple(g)), S


def from_flat(x: AModule, lam: PresentedAlgebra, n: int) -> PiModule:
    return from_flat_basis(x, lam, n)[0]


def from_flat_morphism(phi: ModuleMap, lam: PresentedAlgebra, n: int) -> PiMorphism:
    src, s1 = from_flat_basis(phi.source, lam, n)
    dst, s2 = from_flat_basis(phi.target, lam, n)
    return _morphism_in_bases(phi.matrix, src, s1, dst, s2)


def _morphism_in_bases(mat: Matrix, src: PiModule, s1: Matrix, dst: PiModule, s2: Matrix) -> PiMorphism:
    field = src.field
    conj = (inverse(s2) if dst.dim else s2) @ mat @ s1
    o1 = np.cumsum([0] + list(src.dims))
    o2 = np.cumsum([0] + list(dst.dims))
    comps = tuple(conj.submatrix(range(o2[i], o2[i + 1]), range(o1[i], o1[i + 1])) for i in range(src.n))
    return PiMorphism(src, dst, comps)


# ---------------------------------------------------------------------------
# projectives, stable hom, Ext


def indecomposable_projectives(lam: PresentedAlgebra, n: int) -> list:
    """``Pi_n(Lambda) e`` for each primitive idempotent ``e = lambda_e ⊗ e_v``."""
    ring = pi_algebra(lam, n)
    flat = ring.flat
    return [from_flat(algcore.projective_module(flat, k), lam, n) for k in range(len(flat.idempotents))]


def projective_cover(m: PiModule) -> PiMorphism:
    """Minimal projective ``P -> m``, surjective in every component."""
    flat_m = to_flat(m)
    ps, cover = algcore.projective_cover_flat(flat_m)
    p, s = from_flat_basis(ps.module, m.lam, m.n)
    # from_flat(to_flat(m)) is m itself with the identity change of basis
    return _morphism_in_bases(cover, p, s, m, Matrix.identity(m.field, m.dim))


def is_projective(m: PiModule) -> bool:
    cover = projective_cover(m)
    return cover.source.dim == m.dim


def stable_hom(m: PiModule, nm: PiModule) -> int:
    """dim of Hom(m, nm) modulo maps factoring through a projective."""
    homs = pi_hom(m, nm)
    if not homs:
        return 0
    cover = projective_cover(nm)
    through = [cover @ h for h in pi_hom(m, cover.source)]
    return len(homs) - span_rank(through)


def ext(m: PiModule, nm: PiModule, degree: int) -> int:
    _check_compatible(m, nm)
    return algcore.ext_dim(to_flat(m), to_flat(nm), degree)


def ext_dims(m: PiModule, nm: PiModule, max_degree: int = 4) -> list:
    return [ext(m, nm, d) for d in range(max_degree + 1)]


# ---------------------------------------------------------------------------
# isomorphism search


def find_iso(m: PiModule, nm: PiModule, rng=0, tries: int = 64):
    """``(iso or None, exhausted)``; ``exhausted`` marks an inconclusive search."""
    if m.n != nm.n or m.dims != nm.dims:
        return None, False
    if m.dim == 0:
        return zero_morphism(m, nm), False
    hmn = pi_hom(m, nm)
    if not hmn or len(hmn) != hom_dim(nm, m):
        return None, False
    rng = as_rng(rng)
    field = m.field
    for _ in range(tries):
        coeffs = random_matrix(field, len(hmn), 1, rng).a[:, 0]
        phi = zero_morphism(m, nm)
        for c, h in zip(coeffs, hmn):
            if c != 0:
                phi = phi + h.scale(c)
        if all(is_invertible(a) for a in phi.components):
            return phi, False
    return None, True


def iso_test(m: PiModule, nm: PiModule, rng=0) -> bool:
    return find_iso(m, nm, rng)[0] is not None


# ---------------------------------------------------------------------------
# random generation


def random_lambda_map(x: AModule, y: AModule, rng) -> Matrix:
    """Random Lambda-linear map, biased towards low rank."""
    rng = as_rng(rng)
    field = x.field
    if x.dim == 0 or y.dim == 0 or rng.chance(1, 6):
        return Matrix.zeros(field, y.dim, x.dim)
    if rng.chance(1, 2):
        # factor through a small random module
        mid = algcore.random_module(x.algebra, min(x.dim, y.dim), rng, change_basis=False)
        return algcore.random_module_map(mid, y, rng).matrix @ algcore.random_module_map(x, mid, rng).matrix
    return algcore.random_module_map(x, y, rng).matrix


def random_pi_module(lam: PresentedAlgebra, n: int, rng, max_dim: int = 3,
                     dims: Optional[Sequence[int]] = None, zero_parts: Sequence[int] = ()) -> PiModule:
    """Random module: draw random f, then a random solution g of the relations.

    The relations are linear in g once f is fixed, and g = 0 always solves
    them.  Half the time the result is flipped so that f and g play
    symmetric roles.  ``zero_parts`` (0-based) forces those parts to vanish.
    """
    rng = as_rng(rng)
    field = lam.field
    parts = []
    for i in range(n):
        if i in zero_parts:
            parts.append(algcore.zero_module(lam))
        elif dims is not None:
            parts.append(_random_lambda_module_of_dim(lam, dims[i], rng))
        else:
            parts.append(algcore.random_module(lam, max_dim, rng))
    flip_it = not zero_parts and rng.chance(1, 2)
    f = [random_lambda_map(parts[i], parts[i + 1], rng) for i in range(n - 1)]
    g = _random_g(lam, parts, f, rng)
    m = PiModule(lam, tuple(parts), tuple(f), tuple(g))
    return flip(m) if flip_it else m


def _random_lambda_module_of_dim(lam: PresentedAlgebra, d: int, rng) -> AModule:
    for _ in range(64):
        x = algcore.random_module(lam, d, rng, min_dim=d)
        if x.dim == d:
            return x
    raise ValueError(f"could not generate a Lambda-module of dimension {d}")


def _random_g(lam: PresentedAlgebra, parts, f, rng) -> list:
    field = lam.field
    n = len(parts)
    if n == 1:
        return []
    basis = [module_hom(parts[i + 1], parts[i]) for i in range(n - 1)]
    offsets = np.cumsum([0] + [len(b) for b in basis])
    total = int(offsets[-1])
    blocks = []
    d = [x.dim for x in parts]
    # g_1 f_1 = 0
    blk = field.zeros((d[0] * d[0], total))
    for k, h in enumerate(basis[0]):
        blk[:, offsets[0] + k] = (h.matrix @ f[0]).vec()
    blocks.append(blk)
    # f_{n-1} g_{n-1} = 0
    blk = field.zeros((d[n - 1] * d[n - 1], total))
    for k, h in enumerate(basis[n - 2]):
        blk[:, offsets[n - 2] + k] = (f[n - 2] @ h.matrix).vec()
    blocks.append(blk)
    # f_i g_i - g_{i+1} f_{i+1} = 0
    for i in range(n - 2):
        blk = field.zeros((d[i + 1] * d[i + 1], total))
        for k, h in enumerate(basis[i]):
            blk[:, offsets[i] + k] = (f[i] @ h.matrix).vec()
        for k, h in enumerate(basis[i + 1]):
            blk[:, offsets[i + 1] + k] = field.reduce(-(h.matrix @ f[i + 1]).vec())
        blocks.append(blk)
    sol = stack_kernel((Matrix._wrap(field, b) for b in blocks), total, field) if total else None
    coeffs = field.zeros(total)
    if sol is not None and sol.cols:
        coeffs = field.reduce(sol.a @ random_matrix(field, sol.cols, 1, rng).a[:, 0])
    g = []
    for i in range(n - 1):
        acc = Matrix.zeros(field, d[i], d[i + 1])
        for k, h in enumerate(basis[i]):
            if coeffs[offsets[i] + k] != 0:
                acc = acc + h.matrix.scale(coeffs[offsets[i] + k])
        g.append(acc)
    return g


def random_pi_module_flat(lam: PresentedAlgebra, n: int, rng, max_dim: int = 8) -> PiModule:
    """Random quotient of projectives over the flat algebra, read back in tuple form."""
    flat = pi_algebra(lam, n).flat
    x = algcore.random_module(flat, max_dim, rng)
    return from_flat(x, lam, n)


def random_morphism(m: PiModule, nm: PiModule, rng) -> PiMorphism:
    rng = as_rng(rng)
    basis = pi_hom(m, nm)
    phi = zero_morphism(m, nm)
    if not basis:
        return phi
    coeffs = random_matrix(m.field, len(basis), 1, rng).a[:, 0]
    for c, h in zip(coeffs, basis):
        if c != 0:
            phi = phi + h.scale(c)
    return phi


# ---------------------------------------------------------------------------
# JSON


def _matrix_json(m: Matrix) -> list:
    return m.tolist()


def _matrix_from_json(field: Field, data, rows: int, cols: int) -> Matrix:
    if rows == 0 or cols == 0:
        return Matrix.zeros(field, rows, cols)
    arr = field.zeros((rows, cols))
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValueError(f"expected a {rows}x{cols} matrix")
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            arr[i, j] = decode_scalar(field, x)
    return Matrix._wrap(field, arr)


def module_to_json(m: PiModule) -> dict:
    return {
        "n": m.n,
        "parts": [{"dim": x.dim, "action": [_matrix_json(a) for a in x.action]} for x in m.parts],
        "f": [_matrix_json(x) for x in m.f],
        "g": [_matrix_json(x) for x in m.g],
    }


def module_from_json(data: dict, lam: PresentedAlgebra) -> PiModule:
    field = lam.field
    n = int(data["n"])
    if n < 1 or len(data["parts"]) != n:
        raise ValueError("part count does not match n")
    parts = []
    for p in data["parts"]:
        d = int(p["dim"])
        if len(p["action"]) != lam.dim:
            raise ValueError("need one action matrix per Lambda basis element")
        parts.append(AModule(lam, d, tuple(_matrix_from_json(field, a, d, d) for a in p["action"])))
    dims = [x.dim for x in parts]
    f = tuple(_matrix_from_json(field, x, dims[i + 1], dims[i]) for i, x in enumerate(data["f"]))
    g = tuple(_matrix_from_json(field, x, dims[i], dims[i + 1]) for i, x in enumerate(data["g"]))
    m = PiModule(lam, tuple(parts), f, g)
    problems = check_pi_relations(m)
    if problems:
        raise ValueError("invalid module: " + "; ".join(problems))
    return m


def morphism_to_json(phi: PiMorphism) -> dict:
    return {"a": [_matrix_json(a) for a in phi.components]}


def morphism_from_json(data: dict, source: PiModule, target: PiModule) -> PiMorphism:
    field = source.field
    comps = tuple(_matrix_from_json(field, a, target.dims[i], source.dims[i]) for i, a in enumerate(data["a"]))
    return PiMorphism(source, target, comps)


def direct_sum_with_maps(mods: Sequence[PiModule]):
    """``(total, injections, projections)`` for a finite direct sum."""
    mods = list(mods)
    total = direct_sum(mods)
    field = total.field
    injs, projs = [], []
    offs = [0] * total.n
    for m in mods:
        comps = []
        for i in range(total.n):
            arr = field.zeros((total.dims[i], m.dims[i]))
            for j in range(m.dims[i]):
                arr[offs[i] + j, j] = field.element(1)
            comps.append(Matrix._wrap(field, arr))
            offs[i] += m.dims[i]
        inj = PiMorphism(m, total, tuple(comps))
        injs.append(inj)
        projs.append(PiMorphism(total, m, tuple(a.T for a in comps)))
    return total, injs, projs
