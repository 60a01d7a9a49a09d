"""Pipeline orchestration: group -> modulus -> space -> forms -> geometry -> report."""

from __future__ import annotations

import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator

from app.config import settings
from app.documents import PauliDocument, dump_document, group_to_document, load_spec
from app.errors import ConditionViolation, ExportError, FpsError
from app.exporters.incidence_export import FileSink, export_graph, export_incidence
from app.forms import (
    ConditionReport,
    Level,
    bilinear_form,
    check_conditions,
    choose_generator,
    enumerate_admissible_N,
    radical,
    raise_for,
    squares_in_derived,
)
from app.geometry.gq import derive_gq24
from app.geometry.incidence import IncidenceStructure, structure_from_flats
from app.geometry.polar import PolarSpaceW, commutation_matrix, condensation, quotient_polar_space
from app.geometry.projective import Flat, point_label
from app.geometry.quadric import Quadric, join_with_nucleus, quadric_of_group
from app.groups.core import (
    FiniteGroup,
    Subgroup,
    center,
    derived_subgroup,
    generated_subgroup,
    n0_subgroup,
    torsion_center_K,
)
from app.linear.gfp import SubspaceGF, all_subspaces, vector_space
from app.utils import sha256

log = logging.getLogger(__name__)

AUTO_N0, AUTO_K, AUTO_CENTER = "auto_N0", "auto_K", "auto_center"
SELECTORS = ("report", "incidence", "polar", "quadric", "commutation_graph", "group")


class AnalysisOptions(BaseModel):
    p: int = Field(default_factory=lambda: settings.default_prime)
    n_select: Union[str, list[int]] = AUTO_CENTER
    g_index: Optional[int] = None
    level: Level = Level.bilinear

    @field_validator("n_select")
    @classmethod
    def _selector(cls, v):
        if isinstance(v, str) and v not in (AUTO_N0, AUTO_K, AUTO_CENTER):
            raise ValueError(f"n_select must be {AUTO_N0}, {AUTO_K}, {AUTO_CENTER} or a list of ids")
        return v


class GroupSummary(BaseModel):
    name: str
    order: int
    derived_order: int
    center_order: int
    K_order: int
    N0_order: int
    commutative: bool
    derived: list[str]
    center: list[str]
    squares_in_derived: bool


class Candidate(BaseModel):
    name: str
    order: int
    members: list[str]
    conditions: ConditionReport


class Violation(BaseModel):
    condition: int
    message: str
    witness: list[str]


class FormSummary(BaseModel):
    generator: str
    psi: dict[str, int]
    gram: list[list[int]]
    radical_dim: int
    degenerate: bool


class PolarSummary(BaseModel):
    symbol: str
    rank: int
    points: int
    flats: dict[str, int]
    point_labels: list[str]
    lines: list[list[str]]
    flat_dimensions: dict[str, int] = Field(default_factory=dict)


class QuadricSummary(BaseModel):
    symbol: str
    tag: str
    k: int
    witt: int
    points: int
    singular_flats: dict[str, int]
    singular_labels: list[str]
    nucleus: Optional[str]
    shading: dict[str, int]
    nucleus_join: Optional[dict[str, int]] = None


class AnalysisReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    group: GroupSummary
    p: int
    selection: str
    modulus: Candidate
    candidates: list[Candidate]
    dimension: Optional[int] = None
    form: Optional[FormSummary] = None
    polar: Optional[PolarSummary] = None
    quadric: Optional[QuadricSummary] = None
    admissible: list[list[str]] = Field(default_factory=list)
    condensation: dict[str, list[str]] = Field(default_factory=dict)
    notices: list[str] = Field(default_factory=list)
    violations: list[Violation] = Field(default_factory=list)

    _artifacts: dict[str, Any] = PrivateAttr(default_factory=dict)

    def artifact(self, name: str) -> Any:
        if self._artifacts.get(name) is None:
            raise ExportError(f"report has no {name} artifact")
        return self._artifacts[name]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def _labels(S: Subgroup) -> list[str]:
    return [S.parent.labels[x] for x in S.members]


def _candidate(G: FiniteGroup, name: str, N: Subgroup, p: int) -> Candidate:
    return Candidate(name=name, order=N.order, members=_labels(N), conditions=check_conditions(G, N, p))


def _violation(G: FiniteGroup, e: ConditionViolation) -> Violation:
    return Violation(condition=e.condition, message=str(e), witness=[G.labels[x] for x in e.witness])


def _resolve_modulus(G: FiniteGroup, opts: AnalysisOptions, notices: list[str]) -> tuple[str, Subgroup]:
    sel = opts.n_select
    if isinstance(sel, list):
        return "explicit", generated_subgroup(G, sel)
    if sel == AUTO_N0:
        return AUTO_N0, n0_subgroup(G, opts.p)
    if sel == AUTO_K:
        K = torsion_center_K(G)
        report = check_conditions(G, K, opts.p)
        if opts.p == 2 and report.holds(1, 2, 3, 4, 5):
            return AUTO_K, K
        failed = report.first_failure(1, 2, 3, 4, 5) if opts.p == 2 else None
        why = f"Condition {failed} fails for K" if failed else f"quadratic forms need p = 2, got p = {opts.p}"
        notices.append(f"auto_K is not feasible ({why}); falling back to auto_center")
    return AUTO_CENTER, center(G)


def _polar_summary(W: PolarSpaceW) -> PolarSummary:
    labels = W.labels()
    lines = [[labels[W.point_index(P)] for P in F.points] for F in W.lines]
    dims: Counter = Counter()
    if W.lifts is not None:
        for qf in W.lifts.values():
            a, b = qf.dimensions
            dims[f"{a}/{b}"] += 1
    return PolarSummary(
        symbol=f"W({2 * W.rank - 1},{W.p})", rank=W.rank, points=len(W.points),
        flats={str(k): len(v) for k, v in sorted(W.iso_flats.items())},
        point_labels=labels, lines=lines, flat_dimensions=dict(sorted(dims.items())),
    )


def _quadric_summary(Qd: Quadric) -> QuadricSummary:
    V = Qd.space
    shades = Counter(Qd.shading(P) for P in Qd.points)
    return QuadricSummary(
        symbol=Qd.symbol, tag=Qd.tag, k=Qd.k, witt=Qd.witt, points=len(Qd.singular_points),
        singular_flats={str(k): len(v) for k, v in sorted(Qd.singular_flats.items())},
        singular_labels=[point_label(V, P) for P in Qd.singular_points],
        nucleus=point_label(V, Qd.nucleus) if Qd.nucleus is not None else None,
        shading=dict(sorted(shades.items())),
    )


def quadric_structure(Qd: Quadric) -> IncidenceStructure:
    """P(V) with shading; all projective lines for a plane, singular lines otherwise."""
    V = Qd.space
    if V.dim == 3:
        lines = [Flat(S) for S in all_subspaces(V, 2)]
    else:
        lines = Qd.lines
    return structure_from_flats(Qd.symbol, [point_label(V, P) for P in Qd.points], Qd.points, lines,
                                shading=[Qd.shading(P) for P in Qd.points])


def polar_structure(W: PolarSpaceW, Qd: Optional[Quadric] = None) -> IncidenceStructure:
    shading = None
    if Qd is not None and Qd.space is W.space:
        shading = [Qd.shading(P) for P in W.points]
    return structure_from_flats(f"W({2 * W.rank - 1},{W.p})", W.labels(), W.points, W.lines, shading=shading)


def analyze(G: FiniteGroup, options: Optional[AnalysisOptions] = None) -> AnalysisReport:
    """Run every stage that the chosen modulus admits; failures become report entries."""
    opts = options or AnalysisOptions()
    p = opts.p
    notices: list[str] = []
    violations: list[Violation] = []
    artifacts: dict[str, Any] = {"group": G}

    D, Z, K, N0 = derived_subgroup(G), center(G), torsion_center_K(G), n0_subgroup(G, p)
    summary = GroupSummary(
        name=G.name, order=G.order, derived_order=D.order, center_order=Z.order, K_order=K.order,
        N0_order=N0.order, commutative=G.is_commutative, derived=_labels(D), center=_labels(Z),
        squares_in_derived=squares_in_derived(G),
    )
    selection, N = _resolve_modulus(G, opts, notices)
    candidates = [_candidate(G, name, S, p) for name, S in (("N0", N0), ("K", K), ("Z(G)", Z))]
    modulus = _candidate(G, selection, N, p)
    conds = modulus.conditions
    artifacts["modulus"] = N

    dimension = form_summary = polar_summary = quadric_summary = None
    cond_dict: dict[str, list[str]] = {}
    try:
        # a non-normal N cannot contain G', so Condition 1 already fails for it
        raise_for(G, conds, 1)
        V = vector_space(G, N, p)
        dimension = V.dim
        artifacts["space"] = V
        gc = choose_generator(G, p, opts.g_index)
        form = bilinear_form(V, gc)
        artifacts["form"] = form
        rad = radical(form)
        form_summary = FormSummary(
            generator=G.labels[gc.g],
            psi={G.labels[x]: int(gc.psi_table[x]) for x in D.members},
            gram=form.gram.tolist(), radical_dim=rad.dim, degenerate=bool(rad.dim),
        )
        W = quotient_polar_space(G, N, p, opts.g_index)
        artifacts["polar"] = W
        polar_summary = _polar_summary(W)
        for P in W.points:
            c = condensation(G, W.space.modulus, P)
            cond_dict[c.label] = list(c.labels)
    except ConditionViolation as e:
        violations.append(_violation(G, e))
        notices.append(f"analysis stopped: {e}")

    Qd = None
    if p != 2:
        notices.append(f"no quadratic form: quadratic forms need p = 2, got p = {p}")
    elif N != K:
        failed = conds.first_failure(4, 5)
        reason = f"Condition {failed} fails" if failed else "N is not K"
        witness = [G.labels[x] for x in conds.witnesses.get(f"cond{failed}", [])] if failed else []
        notices.append(f"no quadratic form on V: {reason}" + (f" (witness: {', '.join(witness)})" if witness else ""))
    elif "polar" in artifacts:
        try:
            Qd = quadric_of_group(G, N)
            artifacts["quadric"] = Qd
            quadric_summary = _quadric_summary(Qd)
            if Qd.nucleus is not None:
                join = join_with_nucleus(Qd)
                artifacts["join"] = join
                quadric_summary.nucleus_join = dict(sorted(Counter(
                    str(qf.flat.proj_dim) for qf in join.images.values()).items()))
        except ConditionViolation as e:
            violations.append(_violation(G, e))

    if "polar" in artifacts:
        if Qd is not None and Qd.nucleus is not None and Qd.space.dim == 3:
            artifacts["incidence"] = quadric_structure(Qd)
        else:
            artifacts["incidence"] = polar_structure(artifacts["polar"], Qd)

    admissible: list[list[str]] = []
    try:
        admissible = [_labels(S) for S in enumerate_admissible_N(G, p, opts.level)]
    except FpsError as e:
        notices.append(f"no admissible moduli at level {opts.level.value}: {e}")

    report = AnalysisReport(
        group=summary, p=p, selection=selection, modulus=modulus, candidates=candidates,
        dimension=dimension, form=form_summary, polar=polar_summary, quadric=quadric_summary,
        admissible=admissible, condensation=cond_dict, notices=notices, violations=violations,
    )
    report._artifacts = artifacts
    log.info("[Report] %s: |N|=%d, dim=%s, %d notices", G.name, N.order, dimension, len(notices))
    return report


def render_text(report: AnalysisReport) -> str:
    g = report.group
    out = [
        f"group {g.name}: order {g.order}, |G'| = {g.derived_order}, |Z(G)| = {g.center_order}, "
        f"|K| = {g.K_order}, |N0| = {g.N0_order}",
        f"modulus ({report.selection}): order {report.modulus.order} {{{', '.join(report.modulus.members)}}}",
    ]
    c = report.modulus.conditions
    out.append("conditions: " + " ".join(
        f"{i}={'n/a' if getattr(c, f'cond{i}') is None else ('yes' if getattr(c, f'cond{i}') else 'no')}"
        for i in range(1, 6)))
    if report.dimension is not None:
        out.append(f"vector space: GF({report.p})^{report.dimension}")
    if report.form is not None:
        out.append(f"form: g = {report.form.generator}, radical dimension {report.form.radical_dim}")
    if report.polar is not None:
        flats = ", ".join(f"{n} of dimension {k}" for k, n in report.polar.flats.items())
        out.append(f"polar space {report.polar.symbol}: {report.polar.points} points; isotropic flats {flats}")
    if report.quadric is not None:
        q = report.quadric
        out.append(f"quadric {q.symbol} ({q.tag}): {q.points} points"
                   + (f", nucleus {q.nucleus}" if q.nucleus else "")
                   + "; shading " + ", ".join(f"{k} {v}" for k, v in q.shading.items()))
    for n in report.notices:
        out.append(f"note: {n}")
    for v in report.violations:
        out.append(f"violation: {v.message}")
    return "\n".join(out) + "\n"


def export(report: AnalysisReport, what: str = "report", fmt: Optional[str] = None,
           destination: Optional[str | Path] = None) -> str:
    fmt = (fmt or settings.export_format).lower()
    if what == "report":
        if fmt in ("structured", "json"):
            doc = report.to_json()
        elif fmt == "text":
            doc = render_text(report)
        else:
            raise ExportError(f"unknown report format {fmt!r}")
    elif what in ("incidence", "polar", "quadric"):
        if what == "incidence":
            S = report.artifact("incidence")
        elif what == "polar":
            S = polar_structure(report.artifact("polar"), report._artifacts.get("quadric"))
        else:
            S = quadric_structure(report.artifact("quadric"))
        doc = export_incidence(S, "text" if fmt == "structured" else fmt)
    elif what == "commutation_graph":
        W = report.artifact("polar")
        doc = export_graph(W.labels(), commutation_matrix(W), "dot" if fmt == "structured" else fmt,
                           name=f"commutation graph of {report.group.name}")
    elif what == "group":
        doc = dump_document(group_to_document(report.artifact("group")))
    else:
        raise ExportError(f"unknown export selector {what!r}; expected one of {', '.join(SELECTORS)}")
    if destination is not None:
        dest = Path(destination)
        FileSink(str(dest.parent)).send([(dest.name, doc)])
    return doc


def gq_structure(report: AnalysisReport, u_index: int = 0) -> IncidenceStructure:
    W = report.artifact("polar")
    if not 0 <= u_index < len(W.points):
        raise ExportError(f"point index {u_index} outside 0..{len(W.points) - 1}")
    return derive_gq24(W, W.points[u_index])


EXAMPLES: dict[str, tuple[PauliDocument, AnalysisOptions]] = {
    "example1": (PauliDocument(p=2, n=1, flavor="complex_qubit"), AnalysisOptions(p=2, n_select=AUTO_K)),
    "example1_center": (PauliDocument(p=2, n=1, flavor="complex_qubit"), AnalysisOptions(p=2, n_select=AUTO_CENTER)),
    "example2": (PauliDocument(p=2, n=2, flavor="complex_qubit"), AnalysisOptions(p=2, n_select=AUTO_K)),
    "example3": (PauliDocument(p=2, n=1, flavor="real_qubit"), AnalysisOptions(p=2, n_select=AUTO_CENTER)),
    "example4": (PauliDocument(p=2, n=2, flavor="real_qubit"), AnalysisOptions(p=2, n_select=AUTO_CENTER)),
    "example5": (PauliDocument(p=3, n=2, flavor="qudit_odd"), AnalysisOptions(p=3, n_select=AUTO_CENTER)),
}


def reproduce_paper(out_dir: Optional[str] = None) -> dict[str, str]:
    """Write report, incidence text and DOT for every worked example; returns file -> sha256."""
    docs: list[tuple[str, str]] = []
    reports: dict[str, AnalysisReport] = {}
    for name, (doc, opts) in EXAMPLES.items():
        report = analyze(load_spec(doc), opts)
        reports[name] = report
        docs.append((f"{name}.report.json", report.to_json()))
        docs.append((f"{name}.incidence.txt", export(report, "incidence", "text")))
        docs.append((f"{name}.dot", export(report, "incidence", "dot")))
    gq = gq_structure(reports["example5"])
    docs.append(("gq24.incidence.txt", export_incidence(gq, "text")))
    docs.append(("gq24.dot", export_incidence(gq, "dot")))

    manifest = {name: sha256(text) for name, text in docs}
    docs.append(("manifest.json", json.dumps(manifest, sort_keys=True, indent=2) + "\n"))
    if out_dir is not None:
        res = FileSink(out_dir).send(docs)
        log.info("[Report] reproduced %d documents into %s", res["ok"], out_dir)
    return manifest
