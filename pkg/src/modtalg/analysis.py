"""Per (scheme, prime, base point) analysis pipeline and its JSON report.

Everything downstream of a validated scheme is computed here once and
shared: algebra, ideals, radical, annihilator, primary module structure,
and the characterization verdicts.  Reports serialize to key-sorted JSON,
byte-identical across runs on identical input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .characterize import CharReport, CorollaryReport, check_corollary, check_equivalences
from .errors import InternalInconsistency
from .ffmat import FieldCtx, Subspace
from .primary import (
    ClosureDigraph,
    CompositionReport,
    IsoVerdict,
    PrimaryModule,
    build_primary,
    closure_digraph,
    composition_factors,
    filtration,
    selfcontra_W0,
    uniserial_check,
)
from .scheme import SchemeData, Strata, strata
from .talg import (
    AlgebraBasis,
    TalgContext,
    annihilator_W0,
    b0_b1,
    build_context,
    generate_algebra,
    radical,
)

__all__ = ["Artifacts", "compute_artifacts", "AnalysisReport", "analyze", "report_to_json"]

SCHEMA_VERSION = 1


@dataclass(eq=False)
class Artifacts:
    scheme: SchemeData
    field: FieldCtx
    x: int
    strata: Strata
    ctx: TalgContext
    talgebra: AlgebraBasis
    b0: AlgebraBasis
    b1: AlgebraBasis
    rad: Subspace
    ann: Subspace
    module: PrimaryModule
    filt: list[Subspace]
    digraph: ClosureDigraph
    comp: CompositionReport
    uniserial: bool
    w0_selfcontra: IsoVerdict
    warnings: list[str] = dc_field(default_factory=list)


def compute_artifacts(s: SchemeData, f: FieldCtx, x: int = 0) -> Artifacts:
    strata_ = strata(s, f)
    ctx = build_context(s, f, x)
    talgebra = generate_algebra(ctx)
    b0, b1 = b0_b1(ctx, talgebra)
    rad = radical(talgebra)
    ann = annihilator_W0(ctx, talgebra)
    module = build_primary(ctx)
    filt = filtration(ctx, strata_, module)
    digraph = closure_digraph(s, f)
    comp = composition_factors(ctx, strata_, digraph, module)
    uniserial = uniserial_check(ctx, comp, rad, filt)
    w0sc = selfcontra_W0(module, strata_)
    warnings: list[str] = []
    if not w0sc.certified:
        warnings.append("self-contragredient verdict for W_0 decided by random sampling")
    art = Artifacts(
        scheme=s,
        field=f,
        x=x,
        strata=strata_,
        ctx=ctx,
        talgebra=talgebra,
        b0=b0,
        b1=b1,
        rad=rad,
        ann=ann,
        module=module,
        filt=filt,
        digraph=digraph,
        comp=comp,
        uniserial=uniserial,
        w0_selfcontra=w0sc,
        warnings=warnings,
    )
    _cross_checks(art)
    return art


def _cross_checks(art: Artifacts) -> None:
    """Provable identities tying independent artifacts together."""
    p = art.field.p
    n = art.ctx.n
    # Rad(T) W_0 is the radical of the module, which is exactly W_1
    if art.rad.dim == 0:
        pushed = Subspace.zero(art.field, n)
    else:
        rmats = art.rad.basis.reshape(-1, n, n)
        images = np.einsum("rij,bj->rbi", rmats, art.filt[0].basis) % p
        pushed = Subspace.span(art.field, images.reshape(-1, n), ambient_dim=n)
    if pushed != art.filt[1]:
        raise InternalInconsistency("Rad(T) W_0 != W_1")
    if not art.rad.contains(art.b1.space):
        raise InternalInconsistency("B1 escapes the radical")
    if art.strata.p_prime_valenced and not art.ann.contains(art.rad):
        raise InternalInconsistency("irreducible W_0 but Rad(T) not inside Ann(W_0)")


@dataclass(eq=False)
class AnalysisReport:
    scheme_id: str
    n: int
    d: int
    valencies: tuple[int, ...]
    prime: int
    base_points: tuple[int, ...]
    dim_T: tuple[int, ...]
    dim_B0: int
    dim_B1: int
    dim_rad: tuple[int, ...]
    dim_ann: tuple[int, ...]
    strata: Strata
    composition: CompositionReport
    uniserial: bool
    self_contragredient_W0: bool
    characterization: CharReport
    corollary: CorollaryReport
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        comp = [
            {"level": f.level, "class": list(f.cls), "dim": f.dim}
            for f in self.composition.factors
        ]
        return {
            "schema": SCHEMA_VERSION,
            "field": f"GF({self.prime})",
            "scheme_id": self.scheme_id,
            "n": self.n,
            "d": self.d,
            "valencies": list(self.valencies),
            "prime": self.prime,
            "base_points": list(self.base_points),
            "dim_T": list(self.dim_T),
            "dim_B0": self.dim_B0,
            "dim_B1": self.dim_B1,
            "dim_rad": list(self.dim_rad),
            "dim_ann": list(self.dim_ann),
            "strata": {
                "epsilon": self.strata.epsilon,
                "sets": [list(t) for t in self.strata.sets],
                "thin": list(self.strata.thin),
                "p_prime_valenced": self.strata.p_prime_valenced,
            },
            "composition": comp,
            "composition_length": self.composition.composition_length,
            "uniserial": self.uniserial,
            "self_contragredient_W0": self.self_contragredient_W0,
            "characterization": {
                **self.characterization.computed(),
                "implied": self.characterization.implied,
                "ix_certified": self.characterization.ix_certified,
                "consistent": self.characterization.consistent,
            },
            "corollary": {
                "b0_simple_unital": self.corollary.b0_simple_unital,
                "rad_thin_kills": self.corollary.rad_thin_kills,
                "implied_summands": self.corollary.implied_summands,
                "consistent": self.corollary.consistent,
            },
            "warnings": list(self.warnings),
        }


def analyze(
    s: SchemeData, f: FieldCtx, base_points, scheme_id: str = "scheme"
) -> AnalysisReport:
    """Run the full pipeline at each requested base point.

    Per-base-point dimensions may differ, but every characterization
    boolean must agree across base points; a flip raises
    InternalInconsistency.
    """
    base_points = tuple(int(x) for x in base_points)
    if not base_points:
        raise InternalInconsistency("no base points requested")
    dim_T: list[int] = []
    dim_rad: list[int] = []
    dim_ann: list[int] = []
    warnings: list[str] = []
    first: Artifacts | None = None
    char: CharReport | None = None
    coro: CorollaryReport | None = None
    for x in base_points:
        art = compute_artifacts(s, f, x)
        c = check_equivalences(art)
        cc = check_corollary(art, c)
        dim_T.append(art.talgebra.dim)
        dim_rad.append(art.rad.dim)
        dim_ann.append(art.ann.dim)
        for w in art.warnings:
            tagged = f"x={x}: {w}"
            if tagged not in warnings:
                warnings.append(tagged)
        if first is None:
            first, char, coro = art, c, cc
        elif c.computed() != char.computed():
            raise InternalInconsistency(
                f"characterization booleans changed between base points "
                f"{base_points[0]} and {x}"
            )
    assert first is not None and char is not None and coro is not None
    return AnalysisReport(
        scheme_id=scheme_id,
        n=s.n,
        d=s.d,
        valencies=tuple(int(v) for v in s.valencies),
        prime=f.p,
        base_points=base_points,
        dim_T=tuple(dim_T),
        dim_B0=first.b0.dim,
        dim_B1=first.b1.dim,
        dim_rad=tuple(dim_rad),
        dim_ann=tuple(dim_ann),
        strata=first.strata,
        composition=first.comp,
        uniserial=first.uniserial,
        self_contragredient_W0=first.w0_selfcontra.isomorphic,
        characterization=char,
        corollary=coro,
        warnings=tuple(warnings),
    )


def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
