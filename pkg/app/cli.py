"""Command line entry point.

    python -m app.cli analyze '{"kind":"pauli","p":2,"n":1,"flavor":"complex_qubit"}' --n-select auto_K
    python -m app.cli gq spec.json --p 3 --u 0 --format dot
    python -m app.cli reproduce-paper --out exports
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.config import settings
from app.documents import load_spec, load_spec_file
from app.errors import (
    ConditionViolation,
    DegeneracyError,
    DocumentError,
    ExportError,
    FpsError,
    GroupAxiomError,
    GroupSizeError,
    InconsistencyError,
    InvalidElementError,
    NormalityError,
    NotApplicableError,
    SpecError,
)
from app.exporters.incidence_export import FileSink, export_incidence
from app.forms import Level
from app.groups.core import FiniteGroup
from app.report import (
    AUTO_CENTER,
    AUTO_K,
    AUTO_N0,
    SELECTORS,
    AnalysisOptions,
    analyze,
    export,
    gq_structure,
    render_text,
    reproduce_paper,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_CONDITION = 0, 2, 3

# first match wins
EXIT_CODES: tuple[tuple[type[FpsError], int], ...] = (
    (ConditionViolation, EXIT_CONDITION),
    (DocumentError, EXIT_INPUT),
    (GroupAxiomError, EXIT_INPUT),
    (GroupSizeError, EXIT_INPUT),
    (SpecError, EXIT_INPUT),
    (InvalidElementError, EXIT_INPUT),
    (NormalityError, EXIT_INPUT),
    (NotApplicableError, EXIT_INPUT),
    (DegeneracyError, EXIT_INPUT),
    (ExportError, EXIT_INPUT),
    (InconsistencyError, EXIT_INPUT),
)


def _group(spec: str) -> FiniteGroup:
    if spec.lstrip().startswith("{"):
        return load_spec(spec)
    return load_spec_file(spec)


def _n_select(raw: str):
    if raw.startswith("auto_"):
        if raw not in (AUTO_N0, AUTO_K, AUTO_CENTER):
            raise DocumentError(f"unknown selector {raw!r}; expected {AUTO_N0}, {AUTO_K} or {AUTO_CENTER}", "--n-select")
        return raw
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError as e:
        raise DocumentError(f"--n-select expects auto_N0, auto_K, auto_center or comma-separated ids, got {raw!r}") from e


def _options(args: argparse.Namespace) -> AnalysisOptions:
    try:
        return AnalysisOptions(p=args.p, n_select=_n_select(args.n_select), g_index=args.g_index, level=args.level)
    except ValidationError as e:
        err = e.errors()[0]
        raise DocumentError(err["msg"], ".".join(str(x) for x in err["loc"]) or None) from e


def exit_code(e: FpsError) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(e, cls):
            return code
    return EXIT_INPUT


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        dest = Path(out)
        FileSink(str(dest.parent)).send([(dest.name, text)])
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=settings.default_prime, help="prime of the vector spaces")
    common.add_argument("--n-select", default="auto_center", help="auto_N0 | auto_K | auto_center | id,id,...")
    common.add_argument("--g-index", type=int, default=None, help="which non-identity element of G' is g")
    common.add_argument("--level", default=Level.bilinear.value, choices=[lv.value for lv in Level])
    common.add_argument("--format", default=None, help="structured | text | dot")
    common.add_argument("--out", default=None, help="output file (directory for reproduce-paper)")
    common.add_argument("--strict", action="store_true", default=settings.strict,
                        help="exit with code 3 when a condition is violated")
    common.add_argument("--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="fps", description="Factor groups, polar spaces and quadrics over GF(p).")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, helptext in (("analyze", "full report"), ("conditions", "Conditions 1-5 for the chosen modulus"),
                           ("polar", "symplectic polar space as an incidence document"),
                           ("quadric", "quadric over GF(2) as an incidence document")):
        sp = sub.add_parser(verb, parents=[common], help=helptext)
        sp.add_argument("spec", help="group document file, or inline JSON")
    sp = sub.add_parser("gq", parents=[common], help="GQ(2,4) from W(3,3)")
    sp.add_argument("spec")
    sp.add_argument("--u", type=int, default=0, help="index of the point U")
    sp = sub.add_parser("export", parents=[common], help="export one artifact")
    sp.add_argument("spec")
    sp.add_argument("--what", default="report", choices=SELECTORS)
    sub.add_parser("reproduce-paper", parents=[common], help="golden documents for the worked examples")
    return ap


def run(args: argparse.Namespace) -> int:
    if args.verb == "reproduce-paper":
        manifest = reproduce_paper(args.out or settings.export_dir)
        sys.stdout.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        return EXIT_OK

    report = analyze(_group(args.spec), _options(args))
    fmt = args.format
    if args.verb == "analyze":
        text = export(report, "report", fmt)
    elif args.verb == "conditions":
        if (fmt or settings.export_format) == "text":
            text = render_text(report)
        else:
            text = json.dumps({"modulus": report.modulus.model_dump(mode="json"),
                               "candidates": [c.model_dump(mode="json") for c in report.candidates]},
                              sort_keys=True, indent=2) + "\n"
    elif args.verb in ("polar", "quadric"):
        text = export(report, args.verb, fmt or "text")
    elif args.verb == "gq":
        text = export_incidence(gq_structure(report, args.u), fmt if fmt in ("text", "dot") else "text")
    else:
        text = export(report, args.what, fmt)
    _emit(text, args.out)

    if args.strict and report.violations:
        v = report.violations[0]
        log.error("[CLI] %s", v.message)
        return EXIT_CONDITION
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else settings.log_level.upper(),
                        format="%(levelname)s %(name)s %(message)s", stream=sys.stderr)
    try:
        return run(args)
    except FpsError as e:
        code = exit_code(e)
        log.error("[CLI] %s%s", "invalid input: " if code == EXIT_INPUT else "", e)
        return code


if __name__ == "__main__":
    sys.exit(main())
