"""The functors T1, T2, U1, U2, Z1, Z2, Flip and the Nakayama functor.

Categories involved: Lambda-modules (``AModule``), Pi_n-modules and
Pi_{n-1}-modules (``PiModule``).

    T1(X) = (X, ..., X; f = Id, g = 0)      U1(M) = X_1
    T2(X) = (X, ..., X; f = 0,  g = Id)     U2(M) = X_n
    Z1(N) = (N_1, ..., N_{n-1}, 0)          Z2(N) = (0, N_1, ..., N_{n-1})

with adjoint pairs T1 -| U1 -| T2 -| U2 -| T1, the last two obtained from
the first two by conjugating with Flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import algcore
from . import pimod as pm
from .algcore import AModule, ModuleMap, PresentedAlgebra
from .exactlin import Matrix
from .pimod import PiModule, PiMorphism
from .reports import Report, Tally
from .rng import as_rng

FUNCTORS = ("T1", "T2", "U1", "U2", "Z1", "Z2", "Flip", "Nakayama", "NakayamaInv")


# ---------------------------------------------------------------------------
# object and morphism actions


def _constant(x: AModule, n: int, forward: bool) -> PiModule:
    field = x.field
    ident = Matrix.identity(field, x.dim)
    zero = Matrix.zeros(field, x.dim, x.dim)
    f = (ident if forward else zero,) * (n - 1)
    g = (zero if forward else ident,) * (n - 1)
    return PiModule(x.algebra, (x,) * n, f, g)


def T1(x: AModule, n: int) -> PiModule:
    return _constant(x, n, forward=True)


def T2(x: AModule, n: int) -> PiModule:
    return _constant(x, n, forward=False)


def T1_map(h: ModuleMap, n: int) -> PiMorphism:
    return PiMorphism(T1(h.source, n), T1(h.target, n), (h.matrix,) * n)


def T2_map(h: ModuleMap, n: int) -> PiMorphism:
    return PiMorphism(T2(h.source, n), T2(h.target, n), (h.matrix,) * n)


def U1(m: PiModule) -> AModule:
    return m.parts[0]


def U2(m: PiModule) -> AModule:
    return m.parts[-1]


def U1_map(phi: PiMorphism) -> ModuleMap:
    return ModuleMap(phi.source.parts[0], phi.target.parts[0], phi.components[0])


def U2_map(phi: PiMorphism) -> ModuleMap:
    return ModuleMap(phi.source.parts[-1], phi.target.parts[-1], phi.components[-1])


def _pad(nm: PiModule, left: bool) -> PiModule:
    field = nm.field
    z = algcore.zero_module(nm.lam)
    if left:
        d = nm.dims[0]
        return PiModule(nm.lam, (z,) + nm.parts,
                        (Matrix.zeros(field, d, 0),) + nm.f, (Matrix.zeros(field, 0, d),) + nm.g)
    d = nm.dims[-1]
    return PiModule(nm.lam, nm.parts + (z,),
                    nm.f + (Matrix.zeros(field, 0, d),), nm.g + (Matrix.zeros(field, d, 0),))


def Z1(nm: PiModule) -> PiModule:
    return _pad(nm, left=False)


def Z2(nm: PiModule) -> PiModule:
    return _pad(nm, left=True)


def Z1_map(phi: PiMorphism) -> PiMorphism:
    zero = Matrix.zeros(phi.source.field, 0, 0)
    return PiMorphism(Z1(phi.source), Z1(phi.target), phi.components + (zero,))


def Z2_map(phi: PiMorphism) -> PiMorphism:
    zero = Matrix.zeros(phi.source.field, 0, 0)
    return PiMorphism(Z2(phi.source), Z2(phi.target), (zero,) + phi.components)


Flip = pm.flip
Flip_map = pm.flip_morphism


def nakayama(m: PiModule) -> PiModule:
    """D A ⊗_A m computed on the flat form."""
    return pm.from_flat(algcore.nakayama_flat(pm.to_flat(m)), m.lam, m.n)


def nakayama_inv(m: PiModule) -> PiModule:
    """Hom_A(D A, m) computed on the flat form."""
    return pm.from_flat(algcore.nakayama_inv_flat(pm.to_flat(m)), m.lam, m.n)


def nakayama_lambda(x: AModule) -> AModule:
    return algcore.nakayama_flat(x)


def nakayama_inv_lambda(x: AModule) -> AModule:
    return algcore.nakayama_inv_flat(x)


_OBJECT = {
    "U1": U1, "U2": U2, "Z1": Z1, "Z2": Z2, "Flip": Flip,
    "Nakayama": nakayama, "NakayamaInv": nakayama_inv,
}
_MORPHISM = {
    "U1": U1_map, "U2": U2_map, "Z1": Z1_map, "Z2": Z2_map, "Flip": Flip_map,
}


def apply(name: str, x, n: Optional[int] = None):
    """Apply a functor by name to an object or a morphism.

    ``n`` is needed only by T1 and T2, whose inputs are Lambda-modules.
    """
    if name not in FUNCTORS:
        raise ValueError(f"unknown functor {name!r}")
    if name in ("T1", "T2"):
        if n is None:
            raise ValueError(f"{name} needs the target n")
        if isinstance(x, AModule):
            return (T1 if name == "T1" else T2)(x, n)
        if isinstance(x, ModuleMap):
            return (T1_map if name == "T1" else T2_map)(x, n)
        raise TypeError(f"{name} takes Lambda-modules or Lambda-maps")
    if isinstance(x, PiModule):
        if name in ("Z1", "Z2") and n is not None and x.n != n - 1:
            raise ValueError(f"{name} maps Pi_{n - 1}-modules to Pi_{n}-modules")
        return _OBJECT[name](x)
    if isinstance(x, PiMorphism):
        if name not in _MORPHISM:
            raise NotImplementedError(f"{name} on morphisms is not implemented")
        return _MORPHISM[name](x)
    raise TypeError(f"{name} takes Pi-modules or Pi-morphisms")


# ---------------------------------------------------------------------------
# adjunctions


def counit_T1U1(m: PiModule) -> PiMorphism:
    """T1 U1 M -> M with components Id, f_1, f_2 f_1, ..."""
    field = m.field
    cur = Matrix.identity(field, m.dims[0])
    comps = [cur]
    for i in range(m.n - 1):
        cur = m.f[i] @ cur
        comps.append(cur)
    return PiMorphism(T1(m.parts[0], m.n), m, tuple(comps))


def unit_U1T2(m: PiModule) -> PiMorphism:
    """M -> T2 U1 M with components Id, g_1, g_1 g_2, ..."""
    field = m.field
    cur = Matrix.identity(field, m.dims[0])
    comps = [cur]
    for i in range(m.n - 1):
        cur = cur @ m.g[i]
        comps.append(cur)
    return PiMorphism(m, T2(m.parts[0], m.n), tuple(comps))


def counit_T2U2(m: PiModule) -> PiMorphism:
    return Flip_map(counit_T1U1(Flip(m)))


def unit_U2T1(m: PiModule) -> PiMorphism:
    return Flip_map(unit_U1T2(Flip(m)))


@dataclass(frozen=True)
class AdjunctionData:
    """``left -| right`` with unit ``Id -> right left`` and counit ``left right -> Id``.

    ``left_side`` names the category on which ``left`` is defined: "lambda"
    for Lambda-modules or "pi" for Pi_n-modules.
    """

    left: str
    right: str
    left_side: str
    unit: Callable
    counit: Callable


def _identity_any(x):
    if isinstance(x, PiModule):
        return pm.identity(x)
    return algcore.identity_map(x)


PAIRS = (("T1", "U1"), ("U1", "T2"), ("T2", "U2"), ("U2", "T1"))


def adjunction(pair, n: int) -> AdjunctionData:
    pair = tuple(pair)
    if pair == ("T1", "U1"):
        return AdjunctionData("T1", "U1", "lambda", lambda x: algcore.identity_map(x), counit_T1U1)
    if pair == ("U1", "T2"):
        return AdjunctionData("U1", "T2", "pi", unit_U1T2, lambda x: algcore.identity_map(x))
    if pair == ("T2", "U2"):
        return AdjunctionData("T2", "U2", "lambda", lambda x: algcore.identity_map(x), counit_T2U2)
    if pair == ("U2", "T1"):
        return AdjunctionData("U2", "T1", "pi", unit_U2T1, lambda x: algcore.identity_map(x))
    raise ValueError(f"no adjunction data for {pair}; choose from {PAIRS}")


def _obj(name, x, n):
    return apply(name, x, n)


def _mor(name, h, n):
    return apply(name, h, n)


def _hom_dim(x, y) -> int:
    if isinstance(x, PiModule):
        return pm.hom_dim(x, y)
    return len(algcore.module_hom(x, y))


def _is_morphism(phi) -> bool:
    if isinstance(phi, PiMorphism):
        return pm.is_pi_morphism(phi)
    return algcore.is_module_map(phi.source, phi.target, phi.matrix)


def _same(a, b) -> bool:
    return a.source == b.source and a.target == b.target and a == b


def _random_object(side: str, lam: PresentedAlgebra, n: int, rng, max_dim: int):
    if side == "lambda":
        return algcore.random_module(lam, max_dim, rng)
    if rng.chance(1, 2):
        return pm.random_pi_module(lam, n, rng, max_dim=max_dim)
    return pm.random_pi_module_flat(lam, n, rng, max_dim=max_dim * 2)


def _random_map(x, y, rng):
    if isinstance(x, PiModule):
        return pm.random_morphism(x, y, rng)
    return algcore.random_module_map(x, y, rng)


def _describe(x) -> dict:
    if isinstance(x, PiModule):
        return {"pi_dims": list(x.dims)}
    return {"lambda_dim": x.dim}


def verify_adjunction(pair, lam: PresentedAlgebra, n: int, samples: int = 20, seed=0,
                      data: Optional[AdjunctionData] = None, max_dim: int = 3) -> Report:
    """Certify ``left -| right`` on random objects and morphisms.

    Checks the unit and counit are morphisms, both triangle identities, the
    hom-dimension equality and naturality of unit and counit.  Pass ``data``
    to certify hand-made (for example deliberately broken) unit/counit data.
    """
    data = data or adjunction(pair, n)
    rng = as_rng(seed)
    L, R = data.left, data.right
    c_side = data.left_side
    d_side = "pi" if c_side == "lambda" else "lambda"
    report = Report(f"adjunction {L} -| {R}", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
    tally = Tally()
    for s in range(samples):
        x = _random_object(c_side, lam, n, rng, max_dim)
        y = _random_object(d_side, lam, n, rng, max_dim)
        where = {"sample": s, "X": _describe(x), "Y": _describe(y)}
        eta_x = data.unit(x)
        eps_y = data.counit(y)
        lx, ry = _obj(L, x, n), _obj(R, y, n)
        tally.record("unit is a morphism", _is_morphism(eta_x) and eta_x.target == _obj(R, lx, n), where)
        tally.record("counit is a morphism", _is_morphism(eps_y) and eps_y.source == _obj(L, ry, n), where)
        # eps_{L X} o L(eta_X) = id_{L X}
        left_tri = data.counit(lx) @ _mor(L, eta_x, n)
        tally.record("triangle at L X", _same(left_tri, _identity_any(lx)), where)
        # R(eps_Y) o eta_{R Y} = id_{R Y}
        right_tri = _mor(R, eps_y, n) @ data.unit(ry)
        tally.record("triangle at R Y", _same(right_tri, _identity_any(ry)), where)
        tally.record("dim Hom(L X, Y) = dim Hom(X, R Y)", _hom_dim(lx, y) == _hom_dim(x, ry), where)
        # naturality along random maps X -> X2 and Y -> Y2
        x2 = _random_object(c_side, lam, n, rng, max_dim)
        y2 = _random_object(d_side, lam, n, rng, max_dim)
        phi = _random_map(x, x2, rng)
        psi = _random_map(y, y2, rng)
        lhs = _mor(R, _mor(L, phi, n), n) @ eta_x
        rhs = data.unit(x2) @ phi
        tally.record("unit naturality", lhs == rhs, where)
        lhs = psi @ eps_y
        rhs = data.counit(y2) @ _mor(L, _mor(R, psi, n), n)
        tally.record("counit naturality", lhs == rhs, where)
    tally.flush(report)
    return report


def corrupted(data: AdjunctionData, which: str = "counit", factor: int = 2) -> AdjunctionData:
    """A copy of ``data`` with the unit or counit scaled by ``factor``."""
    if which == "counit":
        return AdjunctionData(data.left, data.right, data.left_side, data.unit,
                              lambda y: data.counit(y).scale(factor))
    return AdjunctionData(data.left, data.right, data.left_side,
                          lambda x: data.unit(x).scale(factor), data.counit)


# ---------------------------------------------------------------------------
# flip, full faithfulness, recollements


def flip_equivalence_check(lam: PresentedAlgebra, n: int, samples: int = 100, seed=0, max_dim: int = 3) -> Report:
    rng = as_rng(seed)
    report = Report("flip equivalence", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
    tally = Tally()
    for s in range(samples):
        m = _random_object("pi", lam, n, rng, max_dim)
        m2 = _random_object("pi", lam, n, rng, max_dim)
        phi = pm.random_morphism(m, m2, rng)
        where = {"sample": s, "dims": list(m.dims)}
        tally.record("F F M = M", Flip(Flip(m)) == m, where)
        tally.record("F F phi = phi", _same(Flip_map(Flip_map(phi)), phi), where)
        tally.record("U2 F M = U1 M", U2(Flip(m)) == U1(m), where)
        tally.record("U2 F phi = U1 phi", _same(U2_map(Flip_map(phi)), U1_map(phi)), where)
        tally.record("F M satisfies the relations", not pm.check_pi_relations(Flip(m)), where)
        x = algcore.random_module(lam, max_dim, rng)
        tally.record("F T1 X = T2 X", Flip(T1(x, n)) == T2(x, n), where)
        if n >= 2:
            nm = pm.random_pi_module(lam, n - 1, rng, max_dim=max_dim)
            tally.record("F Z2 N = Z1 F N", Flip(Z2(nm)) == Z1(Flip(nm)), where)
    tally.flush(report)
    return report


def fully_faithful_check(name: str, lam: PresentedAlgebra, n: int, samples: int, rng, max_dim: int = 3,
                         tally: Optional[Tally] = None) -> Tally:
    """Hom(X, Y) -> Hom(F X, F Y) is bijective on random pairs."""
    tally = tally or Tally()
    for s in range(samples):
        if name in ("T1", "T2"):
            x = algcore.random_module(lam, max_dim, rng)
            y = algcore.random_module(lam, max_dim, rng)
            homs = algcore.module_hom(x, y)
        else:
            x = pm.random_pi_module(lam, n - 1, rng, max_dim=max_dim)
            y = pm.random_pi_module(lam, n - 1, rng, max_dim=max_dim)
            homs = pm.pi_hom(x, y)
        fx, fy = apply(name, x, n), apply(name, y, n)
        images = [apply(name, h, n) for h in homs]
        injective = pm.span_rank(images) == len(homs)
        same_dim = pm.hom_dim(fx, fy) == len(homs)
        tally.record(f"{name} fully faithful", injective and same_dim,
                     {"sample": s, "X": _describe(x), "Y": _describe(y)})
    return tally


def kernel_image_check(which: str, lam: PresentedAlgebra, n: int, samples: int, rng, max_dim: int = 3,
                       tally: Optional[Tally] = None) -> Tally:
    """Ker U1 = Im Z2 (first) or Ker U2 = Im Z1 (second), constructively."""
    tally = tally or Tally()
    first = which == "first"
    U, Z = (U1, Z2) if first else (U2, Z1)
    U_map, Z_map = (U1_map, Z2_map) if first else (U2_map, Z1_map)
    label = "Ker U1 = Im Z2" if first else "Ker U2 = Im Z1"
    zero_slot = 0 if first else n - 1
    for s in range(samples):
        m = pm.random_pi_module(lam, n, rng, max_dim=max_dim, zero_parts=(zero_slot,))
        where = {"sample": s, "dims": list(m.dims)}
        # the maps touching the zero slot are forced to vanish; drop the slot
        if first:
            pre = PiModule(lam, m.parts[1:], m.f[1:], m.g[1:])
            forced = m.f[0].is_zero() and m.g[0].is_zero()
        else:
            pre = PiModule(lam, m.parts[:-1], m.f[:-1], m.g[:-1])
            forced = m.f[-1].is_zero() and m.g[-1].is_zero()
        tally.record(f"{label}: maps at the zero slot vanish", forced, where)
        tally.record(f"{label}: preimage satisfies relations", not pm.check_pi_relations(pre), where)
        tally.record(f"{label}: Z(preimage) = M", Z(pre) == m, where)
        nm = pm.random_pi_module(lam, n - 1, rng, max_dim=max_dim)
        nm2 = pm.random_pi_module(lam, n - 1, rng, max_dim=max_dim)
        phi = pm.random_morphism(nm, nm2, rng)
        tally.record(f"{label}: U Z = 0", U(Z(nm)).dim == 0 and U_map(Z_map(phi)).matrix.shape == (0, 0), where)
    return tally


def verify_recollement(which: str, lam: PresentedAlgebra, n: int, samples: int = 20, seed=0,
                       max_dim: int = 3) -> Report:
    """One of the two recollements of Pi_n-modules.

    first:  (T1, U1, T2) with Ker U1 = Im Z2
    second: (T2, U2, T1) with Ker U2 = Im Z1
    """
    if which not in ("first", "second"):
        raise ValueError("which must be 'first' or 'second'")
    if n < 2:
        raise ValueError("the recollements need n >= 2")
    rng = as_rng(seed)
    report = Report(f"{which} recollement", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
    pairs = (("T1", "U1"), ("U1", "T2")) if which == "first" else (("T2", "U2"), ("U2", "T1"))
    for pair in pairs:
        sub = verify_adjunction(pair, lam, n, samples, rng.fork(1), max_dim=max_dim)
        report.extend(sub, prefix=f"{pair[0]} -| {pair[1]}: ")
    tally = Tally()
    ff = ("T1", "T2", "Z2") if which == "first" else ("T2", "T1", "Z1")
    for name in ff:
        fully_faithful_check(name, lam, n, samples, rng.fork(2), max_dim, tally)
    kernel_image_check(which, lam, n, samples, rng.fork(3), max_dim, tally)
    tally.flush(report)
    return report


# ---------------------------------------------------------------------------
# Nakayama identity and the homological embedding


def is_selfinjective(lam: PresentedAlgebra) -> bool:
    """nu(Lambda) is isomorphic to Lambda as a left module."""
    reg = algcore.regular_module(lam)
    return algcore.module_iso_test(algcore.nakayama_flat(reg), reg)


def verify_nakayama_identity(lam: PresentedAlgebra, samples: int = 30, seed=0, max_dim: int = 3) -> Report:
    """U2 = nu^-1 U1 nu on the projectives of Pi_2(Lambda), and the adjunction
    (nu^-1 U1 nu, T1) at the level of hom dimensions."""
    n = 2
    report = Report("nakayama identity", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
    if not is_selfinjective(lam):
        report.precondition = "Lambda not selfinjective"
        return report
    rng = as_rng(seed)
    for k, p in enumerate(pm.indecomposable_projectives(lam, n)):
        lhs = U2(p)
        rhs = nakayama_inv_lambda(U1(nakayama(p)))
        report.add(f"U2(P{k + 1}) = nu^-1 U1 nu (P{k + 1})", algcore.module_iso_test(lhs, rhs),
                   {"dims": list(p.dims), "lhs_dim": lhs.dim, "rhs_dim": rhs.dim})
    tally = Tally()
    for s in range(samples):
        e = _random_object("pi", lam, n, rng, max_dim)
        x = algcore.random_module(lam, max_dim, rng)
        lhs = len(algcore.module_hom(nakayama_inv_lambda(U1(nakayama(e))), x))
        rhs = pm.hom_dim(e, T1(x, n))
        tally.record("dim Hom(nu^-1 U1 nu E, X) = dim Hom(E, T1 X)", lhs == rhs,
                     {"sample": s, "E": list(e.dims), "X": x.dim, "lhs": lhs, "rhs": rhs})
    tally.flush(report)
    return report


def verify_hom_embedding(lam: PresentedAlgebra, n: int, samples: int = 10, seed=0,
                         max_degree: int = 4, max_dim: int = 3) -> Report:
    """Ext^d_Lambda(X, Y) = Ext^d_Pi(T1 X, T1 Y) for d <= max_degree."""
    rng = as_rng(seed)
    report = Report("homological embedding", info={"n": n, "lambda": lam.name, "samples": samples,
                                                  "seed": seed, "max_degree": max_degree})
    tally = Tally()
    for s in range(samples):
        x = algcore.random_module(lam, max_dim, rng, min_dim=1)
        y = algcore.random_module(lam, max_dim, rng, min_dim=1)
        left = [algcore.ext_dim(x, y, d) for d in range(max_degree + 1)]
        right = pm.ext_dims(T1(x, n), T1(y, n), max_degree)
        tally.record("Ext_Lambda(X, Y) = Ext_Pi(T1 X, T1 Y)", left == right,
                     {"sample": s, "lambda_ext": left, "pi_ext": right})
    tally.flush(report)
    return report


def verify_period_four(lam: PresentedAlgebra, n: int, samples: int = 20, seed=0, max_dim: int = 3) -> Report:
    """All four adjunctions of the cycle T1 -| U1 -| T2 -| U2 -| T1 on one configuration."""
    rng = as_rng(seed)
    report = Report("period-four adjoint cycle", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
    chain = [PAIRS[0][0]] + [p[1] for p in PAIRS]
    report.add("chain closes after four adjunctions", chain[4] == chain[0] and
               all(PAIRS[k][1] == PAIRS[(k + 1) % 4][0] for k in range(4)), {"chain": chain})
    for k, pair in enumerate(PAIRS):
        sub = verify_adjunction(pair, lam, n, samples, rng.fork(k + 1), max_dim=max_dim)
        report.extend(sub, prefix=f"{pair[0]} -| {pair[1]}: ")
    return report
