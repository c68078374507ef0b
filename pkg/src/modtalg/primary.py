"""The primary module W_0 and its structure.

W_0 is spanned by the d+1 vectors E_i* 1.  Its submodule chain W_n (one
step per p-adic valuation of the valencies), the reachability relation on
relation indices, the composition factors cut out by strongly connected
components, the uniserial criterion, and contragredient duals all live
here.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import IndexOutOfRange, InternalInconsistency
from .ffmat import FieldCtx, Subspace, kernel_array, rref_array
from .scheme import SchemeData, Strata
from .talg import TalgContext

__all__ = [
    "GeneratorAction",
    "PrimaryModule",
    "build_primary",
    "filtration",
    "ClosureDigraph",
    "closure_digraph",
    "CompositionFactor",
    "CompositionReport",
    "composition_factors",
    "factor_action",
    "uniserial_check",
    "verify_Ml_iso",
    "contragredient_action",
    "hom_space",
    "IsoVerdict",
    "is_selfcontragredient",
    "selfcontra_W0",
    "factor_selfcontra",
]


@dataclass(frozen=True, eq=False)
class GeneratorAction:
    """Representation matrices of the algebra generators on one module.

    actA[j] and actE[j] are the m x m matrices of A_j and E_j*.  The
    converse map drives the transpose rule A_j -> A_{j'}, E_j* -> E_j*
    needed for contragredients.
    """

    field: FieldCtx
    converse: np.ndarray
    actA: np.ndarray
    actE: np.ndarray

    @property
    def dim(self) -> int:
        return self.actA.shape[1]

    def all_mats(self) -> np.ndarray:
        return np.concatenate([self.actA, self.actE], axis=0)

    def contragredient(self) -> "GeneratorAction":
        conv = self.converse
        dualA = self.actA[conv].transpose(0, 2, 1).copy()
        dualE = self.actE.transpose(0, 2, 1).copy()
        return GeneratorAction(self.field, conv, dualA % self.field.p, dualE % self.field.p)


def contragredient_action(action: GeneratorAction) -> GeneratorAction:
    """Dual-module action: rho(g) goes to transpose(rho(g^t))."""
    return action.contragredient()


class PrimaryModule:
    """W_0 in the basis {E_i* 1}, with per-generator action matrices.

    Action matrices come from direct n-dimensional arithmetic and are
    verified against the structure-constant formula: A_j sends the h-th
    basis vector to sum_i (p_{h j'}^i mod p) times the i-th one.
    """

    __slots__ = ("ctx", "vectors", "reps", "action")

    def __init__(self, ctx: TalgContext):
        self.ctx = ctx
        n, d, p = ctx.n, ctx.d, ctx.field.p
        vectors = np.stack([e.apply(ctx.ones) for e in ctx.Estar])
        if rref_array(vectors, p)[1] != d + 1:
            raise InternalInconsistency("the vectors E_i* 1 are not independent")
        self.vectors = vectors
        row = ctx.scheme.table.entries[ctx.x]
        self.reps = np.array([int(np.nonzero(row == i)[0][0]) for i in range(d + 1)])
        actA = np.stack([self._matrix_of(a.a) for a in ctx.A])
        actE = np.stack([self._matrix_of(e.a) for e in ctx.Estar])
        self.action = GeneratorAction(ctx.field, ctx.scheme.converse.copy(), actA, actE)
        self._verify_action()

    @property
    def dim(self) -> int:
        return self.ctx.d + 1

    def coords(self, w: np.ndarray) -> np.ndarray:
        """Coordinates in the basis {E_i* 1}; the basis vectors have disjoint
        supports, so coordinates read off at support representatives."""
        p = self.ctx.field.p
        w = np.asarray(w, dtype=np.int64) % p
        c = w[self.reps]
        if not np.array_equal((c @ self.vectors) % p, w):
            raise InternalInconsistency("vector outside the span of {E_i* 1}")
        return c

    def _matrix_of(self, g: np.ndarray) -> np.ndarray:
        p = self.ctx.field.p
        images = (g @ self.vectors.T) % p
        return images[self.reps]

    def _verify_action(self) -> None:
        ctx = self.ctx
        p = ctx.field.p
        tensor = ctx.scheme.tensor
        conv = ctx.scheme.converse
        d = ctx.d
        for j in range(d + 1):
            expect = np.zeros((d + 1, d + 1), dtype=np.int64)
            for h in range(d + 1):
                expect[:, h] = tensor[h, conv[j], :] % p
            if not np.array_equal(self.action.actA[j], expect):
                raise InternalInconsistency(f"action of A_{j} disagrees with p_{{h j'}}^i")
            unit = np.zeros((d + 1, d + 1), dtype=np.int64)
            unit[j, j] = 1
            if not np.array_equal(self.action.actE[j], unit):
                raise InternalInconsistency(f"action of E_{j}* is not the coordinate projector")


def build_primary(ctx: TalgContext) -> PrimaryModule:
    return PrimaryModule(ctx)


def filtration(ctx: TalgContext, strata_: Strata, module: PrimaryModule | None = None) -> list[Subspace]:
    """Chain of subspaces W_0 > W_1 >= ... with W_m spanned by the E_i* 1
    whose valency is divisible by p^m; index eps+1 is the zero space.
    Every W_m is verified invariant under every generator."""
    if module is None:
        module = build_primary(ctx)
    f = ctx.field
    p = f.p
    n = ctx.n
    chain: list[Subspace] = []
    gens = np.concatenate([np.stack([a.a for a in ctx.A]), np.stack([e.a for e in ctx.Estar])])
    for m in range(strata_.epsilon + 2):
        keep = np.nonzero(strata_.valuations >= m)[0]
        if keep.size == 0:
            sub = Subspace.zero(f, n)
        else:
            sub = Subspace.span(f, module.vectors[keep], ambient_dim=n)
        if sub.dim != keep.size:
            raise InternalInconsistency("filtration dimensions collapsed")
        if sub.dim:
            images = np.einsum("gij,bj->gbi", gens, sub.basis) % p
            if sub.coords(images.reshape(-1, n)) is None:
                raise InternalInconsistency(f"W_{m} is not invariant")
        chain.append(sub)
    return chain


@dataclass(frozen=True, eq=False)
class ClosureDigraph:
    """Digraph on relation indices: i -> l when some p_{l b}^i is a unit
    mod p.  Mutual reachability is exactly the reachability relation that
    groups composition factors, so classes are strongly connected
    components."""

    d: int
    adj: np.ndarray
    scc_ids: np.ndarray
    components: tuple[tuple[int, ...], ...]

    def same_class(self, i: int, j: int) -> bool:
        for idx in (i, j):
            if not 0 <= idx <= self.d:
                raise IndexOutOfRange(f"relation index {idx} outside [0, {self.d}]")
        return bool(self.scc_ids[i] == self.scc_ids[j])


def _tarjan(adj: np.ndarray) -> list[list[int]]:
    """Iterative Tarjan strongly-connected components."""
    n = adj.shape[0]
    succ = [list(np.nonzero(adj[v])[0]) for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    comps: list[list[int]] = []
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for next_pi in range(pi, len(succ[v])):
                w = succ[v][next_pi]
                if index[w] == -1:
                    work.append((v, next_pi + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def closure_digraph(s: SchemeData, f: FieldCtx) -> ClosureDigraph:
    p = f.p
    d = s.d
    adj = (s.tensor % p != 0).any(axis=1).T
    if not adj.diagonal().all():
        raise InternalInconsistency("missing self-loop: some p_{i 0}^i != 1")
    comps = sorted((tuple(c) for c in _tarjan(adj)), key=min)
    ids = np.zeros(d + 1, dtype=np.int64)
    for cid, comp in enumerate(comps):
        for v in comp:
            ids[v] = cid
    return ClosureDigraph(d=d, adj=adj, scc_ids=ids, components=tuple(comps))


@dataclass(frozen=True, eq=False)
class CompositionFactor:
    level: int
    cls: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.cls)


@dataclass(eq=False)
class CompositionReport:
    epsilon: int
    strata_sets: tuple[tuple[int, ...], ...]
    qn: list[list[tuple[int, ...]]]
    factors: list[CompositionFactor]
    composition_length: int
    uniserial: bool | None = dc_field(default=None)


def factor_action(module: PrimaryModule, cls: tuple[int, ...]) -> GeneratorAction:
    """Action matrices restricted to the coordinates of one factor class."""
    ix = np.ix_(list(cls), list(cls))
    actA = np.stack([m[ix] for m in module.action.actA])
    actE = np.stack([m[ix] for m in module.action.actE])
    return GeneratorAction(module.ctx.field, module.action.converse, actA, actE)


def _cyclic_span(field: FieldCtx, mats: np.ndarray, seed: np.ndarray) -> Subspace:
    m = mats.shape[1]
    space = Subspace.span(field, seed, ambient_dim=m)
    while True:
        images = np.einsum("gij,bj->gbi", mats, space.basis) % field.p
        grown = space.sum(Subspace.span(field, images.reshape(-1, m), ambient_dim=m))
        if grown.dim == space.dim:
            return space
        space = grown


def composition_factors(
    ctx: TalgContext,
    strata_: Strata,
    digraph: ClosureDigraph,
    module: PrimaryModule | None = None,
) -> CompositionReport:
    """Classes of each stratum under mutual reachability, one irreducible
    factor per class of dimension |class|.

    Classes come from the strongly connected components of the full
    digraph restricted to S_n (connecting paths may leave S_n).  Each
    factor is verified invariant in the W_n/W_{n+1} quotient, and
    irreducibility is witnessed by regenerating the whole factor from
    every single basis coordinate.
    """
    if module is None:
        module = build_primary(ctx)
    p = ctx.field.p
    val = strata_.valuations
    qn: list[list[tuple[int, ...]]] = []
    factors: list[CompositionFactor] = []
    allA = module.action.actA
    allE = module.action.actE
    gens = np.concatenate([allA, allE], axis=0)
    for n_level in range(strata_.epsilon + 1):
        sn = list(strata_.sets[n_level])
        classes: list[tuple[int, ...]] = []
        if sn:
            lower = np.nonzero(val < n_level)[0]
            cols = np.array(sn)
            if lower.size and (gens[:, lower[:, None], cols[None, :]] % p).any():
                raise InternalInconsistency(f"W_{n_level} leaks below its level")
            by_scc: dict[int, list[int]] = {}
            for i in sn:
                by_scc.setdefault(int(digraph.scc_ids[i]), []).append(i)
            classes = sorted((tuple(sorted(v)) for v in by_scc.values()), key=min)
        qn.append(classes)
        if n_level == 0 and len(classes) != 1:
            raise InternalInconsistency("the bottom stratum must form a single class")
        for cls in classes:
            others = [i for i in sn if i not in cls]
            if others and (gens[:, np.array(others)[:, None], np.array(cls)[None, :]] % p).any():
                raise InternalInconsistency(f"factor class {cls} is not invariant")
            fact = factor_action(module, cls)
            fmats = fact.all_mats()
            m = len(cls)
            for h in range(m):
                seed = np.zeros(m, dtype=np.int64)
                seed[h] = 1
                if _cyclic_span(ctx.field, fmats, seed).dim != m:
                    raise InternalInconsistency(
                        f"factor {cls} not regenerated from coordinate {cls[h]}"
                    )
            factors.append(CompositionFactor(level=n_level, cls=cls))
    labels = [(f.level, f.cls) for f in factors]
    if len(set(labels)) != len(labels):
        raise InternalInconsistency("repeated composition factor label")
    return CompositionReport(
        epsilon=strata_.epsilon,
        strata_sets=strata_.sets,
        qn=qn,
        factors=factors,
        composition_length=sum(len(c) for c in qn),
    )


def uniserial_check(
    ctx: TalgContext,
    report: CompositionReport,
    rad: Subspace,
    filt: list[Subspace],
) -> bool:
    """W_0 has a totally ordered submodule lattice iff every nontrivial
    filtration step has a single class and the radical pushes each W_n onto
    exactly W_{n+1}."""
    p = ctx.field.p
    n = ctx.n
    rad_mats = rad.basis.reshape(-1, n, n)
    result = True
    for level in range(report.epsilon + 1):
        if filt[level].dim == filt[level + 1].dim:
            continue
        if len(report.qn[level]) != 1:
            result = False
            break
        if rad.dim == 0 or filt[level].dim == 0:
            pushed = Subspace.zero(ctx.field, n)
        else:
            images = np.einsum("rij,bj->rbi", rad_mats, filt[level].basis) % p
            pushed = Subspace.span(ctx.field, images.reshape(-1, n), ambient_dim=n)
        if pushed != filt[level + 1]:
            result = False
            break
    report.uniserial = result
    return result


def verify_Ml_iso(ctx: TalgContext, l: int, module: PrimaryModule | None = None) -> bool:
    """Check that E_i* 1 -> E_i* J E_l* intertwines every generator, i.e.
    the column module at l is a copy of W_0."""
    if not 0 <= l <= ctx.d:
        raise IndexOutOfRange(f"relation index {l} outside [0, {ctx.d}]")
    if module is None:
        module = build_primary(ctx)
    p = ctx.field.p
    targets = np.stack([ctx.eje(i, l).a for i in range(ctx.d + 1)])
    gens = [a.a for a in ctx.A] + [e.a for e in ctx.Estar]
    acts = np.concatenate([module.action.actA, module.action.actE], axis=0)
    for g, act in zip(gens, acts):
        for h in range(ctx.d + 1):
            lhs = np.tensordot(act[:, h], targets, axes=(0, 0)) % p
            rhs = (g @ targets[h]) % p
            if not np.array_equal(lhs, rhs):
                return False
    return True


def hom_space(src: GeneratorAction, dst: GeneratorAction) -> np.ndarray:
    """Basis of the intertwiner space {Phi : Phi rho_src(g) = rho_dst(g) Phi}
    as a stack of dst.dim x src.dim matrices."""
    p = src.field.p
    m1, m2 = src.dim, dst.dim
    rows = []
    for g1, g2 in zip(src.all_mats(), dst.all_mats()):
        constraint = np.kron(np.eye(m2, dtype=np.int64), g1.T) - np.kron(g2, np.eye(m1, dtype=np.int64))
        rows.append(constraint % p)
    stacked = np.concatenate(rows, axis=0)
    ker = kernel_array(stacked, p)
    return ker.reshape(-1, m2, m1)


@dataclass(frozen=True)
class IsoVerdict:
    """certified=False marks a verdict from random sampling only (the
    explicit probably-not flag); certified verdicts are exhaustive."""

    isomorphic: bool
    certified: bool


PROJECTIVE_ENUM_LIMIT = 100_000
SAMPLE_COUNT = 256


def _projective_reps(p: int, h: int):
    import itertools

    for lead in range(h):
        for tail in itertools.product(range(p), repeat=h - lead - 1):
            coeffs = np.zeros(h, dtype=np.int64)
            coeffs[lead] = 1
            coeffs[lead + 1 :] = tail
            yield coeffs


def is_selfcontragredient(action: GeneratorAction) -> IsoVerdict:
    """Decide whether a module is isomorphic to its contragredient dual.

    Looks for an invertible element of the intertwiner space: exhaustively
    over projective representatives when that is cheap, otherwise by
    deterministic-seed sampling (flagged uncertified on total failure).
    """
    p = action.field.p
    dual = action.contragredient()
    homs = hom_space(action, dual)
    h = homs.shape[0]
    m = action.dim
    if h == 0:
        return IsoVerdict(isomorphic=False, certified=True)
    count = (p**h - 1) // (p - 1)
    if count <= PROJECTIVE_ENUM_LIMIT:
        for coeffs in _projective_reps(p, h):
            phi = np.tensordot(coeffs, homs, axes=(0, 0)) % p
            if rref_array(phi, p)[1] == m:
                return IsoVerdict(isomorphic=True, certified=True)
        return IsoVerdict(isomorphic=False, certified=True)
    rng = np.random.default_rng(0)
    for _ in range(SAMPLE_COUNT):
        coeffs = rng.integers(0, p, size=h)
        if not coeffs.any():
            continue
        phi = np.tensordot(coeffs, homs, axes=(0, 0)) % p
        if rref_array(phi, p)[1] == m:
            return IsoVerdict(isomorphic=True, certified=True)
    return IsoVerdict(isomorphic=False, certified=False)


def selfcontra_W0(module: PrimaryModule, strata_: Strata) -> IsoVerdict:
    """Self-contragredience of W_0, cross-checked against the p'-valenced
    flag (the two are provably equivalent, so a mismatch is a bug)."""
    verdict = is_selfcontragredient(module.action)
    if verdict.isomorphic != strata_.p_prime_valenced:
        raise InternalInconsistency(
            f"W_0 self-contragredient verdict {verdict.isomorphic} contradicts "
            f"p'-valenced flag {strata_.p_prime_valenced}"
        )
    return verdict


def factor_selfcontra(
    module: PrimaryModule, strata_: Strata, factor: CompositionFactor
) -> bool:
    """Verify the explicit self-duality of one composition factor: with
    k_i = p^level q_i, the diagonal map e_i -> q_i (dual basis) intertwines
    the factor action with its contragredient."""
    p = module.ctx.field.p
    k = module.ctx.scheme.valencies
    q = []
    for i in factor.cls:
        ki = int(k[i])
        ki //= p**factor.level
        if ki % p == 0:
            raise InternalInconsistency("stratum member with wrong valuation")
        q.append(ki % p)
    phi = np.diag(np.array(q, dtype=np.int64))
    act = factor_action(module, factor.cls)
    dual = act.contragredient()
    for g1, g2 in zip(act.all_mats(), dual.all_mats()):
        if not np.array_equal((phi @ g1) % p, (g2 @ phi) % p):
            return False
    return True
