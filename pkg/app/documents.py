"""Group specification documents: {"kind": "pauli", ...} or {"kind": "cayley_table", ...}."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from app.errors import DocumentError
from app.groups.core import FiniteGroup
from app.groups.pauli import Flavor, PauliGroup, PauliSpec, build_pauli_group

log = logging.getLogger(__name__)


class PauliDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["pauli"] = "pauli"
    p: int = Field(ge=2)
    n: int = Field(ge=1)
    flavor: Flavor


class CayleyTableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["cayley_table"] = "cayley_table"
    order: int = Field(ge=1)
    table: list[list[int]]
    labels: Optional[list[str]] = None
    name: str = "G"

    @model_validator(mode="after")
    def _shape(self) -> "CayleyTableDocument":
        if len(self.table) != self.order or any(len(row) != self.order for row in self.table):
            raise ValueError(f"table must be {self.order} x {self.order}")
        if self.labels is not None and len(self.labels) != self.order:
            raise ValueError(f"expected {self.order} labels, got {len(self.labels)}")
        return self


GroupSpecDocument = Annotated[Union[PauliDocument, CayleyTableDocument], Field(discriminator="kind")]
_adapter: TypeAdapter = TypeAdapter(GroupSpecDocument)


def _position(err: ValidationError) -> str:
    first = err.errors()[0]
    return ".".join(str(part) for part in first.get("loc", ())) or "<root>"


def parse_document(raw: str | bytes | dict) -> PauliDocument | CayleyTableDocument:
    try:
        if isinstance(raw, dict):
            return _adapter.validate_python(raw)
        return _adapter.validate_json(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise DocumentError(f"malformed group document: {first.get('msg')}", position=_position(e)) from e


def load_spec(document: str | bytes | dict | PauliDocument | CayleyTableDocument) -> FiniteGroup:
    doc = document if isinstance(document, (PauliDocument, CayleyTableDocument)) else parse_document(document)
    if isinstance(doc, PauliDocument):
        group: FiniteGroup = build_pauli_group(PauliSpec(doc.p, doc.n, doc.flavor))
    else:
        group = FiniteGroup(doc.table, labels=doc.labels, name=doc.name)
    log.info("[Documents] loaded %s (order %d)", group.name, group.order)
    return group


def load_spec_file(path: str | Path) -> FiniteGroup:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read group document: {e}", position=str(path)) from e
    return load_spec(raw)


def group_to_document(G: FiniteGroup) -> CayleyTableDocument:
    return CayleyTableDocument(order=G.order, table=G.mul.tolist(), labels=list(G.labels), name=G.name)


def pauli_document_of(G: PauliGroup) -> PauliDocument:
    return PauliDocument(p=G.spec.p, n=G.spec.n, flavor=G.spec.flavor)


def dump_document(doc: PauliDocument | CayleyTableDocument) -> str:
    return json.dumps(doc.model_dump(mode="json"), sort_keys=True) + "\n"
