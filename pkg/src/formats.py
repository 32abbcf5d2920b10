#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Algebra and report files.

Both are canonical JSON: UTF-8, two-space indentation, sorted keys, LF newlines and a trailing
newline. Field elements only ever appear as scalar text, never as JSON numbers.
"""

import json
import logging
from typing import Any, Dict, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, StrictInt, StrictStr, ValidationError, root_validator, validator

from biderive import (
    BiderSolutionSpace,
    BiderTensor,
    DerivationMatrix,
    PostLieReport,
    PropertyReport,
    RadicalResult,
)
from chevalley import ChevalleyError, ChevalleyFrame, root_system
from exactla import (
    SCALAR_PATTERN,
    ExactArithmeticError,
    MatrixExact,
    Scalar,
    ScalarDomain,
    VectorExact,
)
from liecore import LieAlgebra, LieAlgebraError, Subspace
from literals import FORMAT_VERSION, TOOL_VERSION
from utils import safe_get_file, safe_write_to_file, sha256_hex
from witt import FilteredBiderProblem, GeneratorRow

logger = logging.getLogger(__name__)


class FormatError(Exception):
    """A file that is not valid JSON or does not match its schema."""

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class PrimeField(BaseModel):
    prime: StrictInt


class ConstantEntry(BaseModel):
    """Nonzero coefficients of [b_i, b_j] as (k, scalar text) pairs."""

    i: StrictInt
    j: StrictInt
    coeffs: List[Tuple[StrictInt, StrictStr]]

    @validator("j")
    @classmethod
    def ordered_pair(cls, value: int, values: Dict[str, Any]) -> int:
        """Check that only brackets with i < j are stored."""
        if "i" in values and not 0 <= values["i"] < value:
            raise ValueError(f"constants need 0 <= i < j, got i={values['i']}, j={value}")
        return value

    @validator("coeffs")
    @classmethod
    def scalar_text(cls, value: List[Tuple[int, str]]) -> List[Tuple[int, str]]:
        """Check every coefficient is scalar text."""
        for _, text in value:
            if not SCALAR_PATTERN.fullmatch(text):
                raise ValueError(f"malformed scalar {text!r}")
        return value


class FrameBlock(BaseModel):
    """Root datum and basis positions of the Chevalley generators."""

    type: StrictStr
    rank: StrictInt
    roots: List[List[StrictInt]]
    positive_roots: List[StrictInt]
    simple_roots: List[StrictInt]
    highest_root: StrictInt
    long_roots: List[StrictInt]
    e_index: List[Tuple[StrictInt, StrictInt]]
    h_index: List[Tuple[StrictInt, StrictInt]]
    f_index: List[Tuple[StrictInt, StrictInt]]


class AlgebraFile(BaseModel):
    format_version: StrictInt
    field: Union[Literal["rational"], PrimeField]
    dim: StrictInt
    labels: List[StrictStr]
    constants: List[ConstantEntry]
    frame: Optional[FrameBlock] = None

    @validator("format_version")
    @classmethod
    def supported_version(cls, value: int) -> int:
        """Check that the file was written by a compatible version."""
        if value != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {value}, expected {FORMAT_VERSION}")
        return value

    @validator("dim")
    @classmethod
    def non_negative(cls, value: int) -> int:
        """Check value greater or equal than zero."""
        if value < 0:
            raise ValueError("Value below 0. Accepted values are greater or equal than 0.")
        return value

    @root_validator(skip_on_failure=True)
    @classmethod
    def consistent_sizes(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Check labels and constants against the dimension."""
        dim = values["dim"]
        if len(values["labels"]) != dim:
            raise ValueError(f"expected {dim} labels, got {len(values['labels'])}")

        seen = set()
        for entry in values["constants"]:
            if entry.j >= dim or any(not 0 <= k < dim for k, _ in entry.coeffs):
                raise ValueError(f"constant ({entry.i}, {entry.j}) indexes beyond dim {dim}")
            if (entry.i, entry.j) in seen:
                raise ValueError(f"constant ({entry.i}, {entry.j}) is listed twice")
            seen.add((entry.i, entry.j))
        return values

    @property
    def domain(self) -> ScalarDomain:
        if isinstance(self.field, PrimeField):
            return ScalarDomain.prime(self.field.prime)
        return ScalarDomain.rational()


class AlgebraDocument(NamedTuple):
    algebra: LieAlgebra
    frame: Optional[FrameBlock]


def dump_json(data: Any) -> str:
    """Canonical JSON text."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def field_descriptor(domain: ScalarDomain) -> Union[str, Dict[str, int]]:
    return "rational" if domain.is_rational else {"prime": domain.characteristic}


def frame_block(frame: ChevalleyFrame) -> FrameBlock:
    datum = frame.datum
    return FrameBlock(
        type=datum.type_letter,
        rank=datum.rank,
        roots=[list(root) for root in datum.roots],
        positive_roots=list(datum.positive_roots),
        simple_roots=list(datum.simple_roots),
        highest_root=datum.highest_root,
        long_roots=sorted(datum.long_roots),
        e_index=sorted(frame.e_index.items()),
        h_index=sorted(frame.h_index.items()),
        f_index=sorted(frame.f_index.items()),
    )


def frame_from_block(L: LieAlgebra, block: FrameBlock) -> ChevalleyFrame:
    """Rebuilds the frame of a loaded classical algebra.

    Raises:
        FormatError: if the block disagrees with the root system of its type
    """
    try:
        datum = root_system(block.type, block.rank)
    except ChevalleyError as e:
        raise FormatError(f"frame block: {e.message}")
    if [list(root) for root in datum.roots] != block.roots:
        raise FormatError(f"frame block roots differ from those of {block.type}{block.rank}")

    h_index = dict(block.h_index)
    indices = list(dict(block.e_index).values()) + list(h_index.values())
    if any(not 0 <= i < L.dim for i in indices + list(dict(block.f_index).values())):
        raise FormatError("frame block indexes beyond the algebra")
    cartan = Subspace.span((L.basis_vector(i) for i in h_index.values()), L.dim, L.domain)
    return ChevalleyFrame(L, datum, dict(block.e_index), dict(block.f_index), h_index, cartan)


def algebra_model(L: LieAlgebra, block: Optional[FrameBlock] = None) -> AlgebraFile:
    constants = [
        ConstantEntry(
            i=i,
            j=j,
            coeffs=[(k, L.domain.format(v)) for k, v in sorted(row.items())],
        )
        for (i, j), row in sorted(L.constants.items())
    ]
    return AlgebraFile(
        format_version=FORMAT_VERSION,
        field=field_descriptor(L.domain),
        dim=L.dim,
        labels=list(L.labels),
        constants=constants,
        frame=block,
    )


def render_algebra(L: LieAlgebra, block: Optional[FrameBlock] = None) -> str:
    return dump_json(algebra_model(L, block).dict(exclude_none=True))


def parse_algebra(text: str) -> AlgebraDocument:
    """Reads an algebra file.

    Args:
        text: the JSON file content

    Returns:
        The algebra with its frame block, if any

    Raises:
        FormatError: if the content is not JSON, breaks the schema or holds bad scalars
    """
    try:
        model = AlgebraFile.parse_obj(json.loads(text))
        domain = model.domain
        constants = {
            (entry.i, entry.j): {k: domain.parse(v) for k, v in entry.coeffs}
            for entry in model.constants
        }
        algebra = LieAlgebra(model.dim, domain, constants, model.labels)
    except json.JSONDecodeError as e:
        raise FormatError(f"not a JSON document: {e}")
    except ValidationError as e:
        raise FormatError(f"algebra file does not match the schema: {e}")
    except (ExactArithmeticError, LieAlgebraError) as e:
        raise FormatError(e.message)

    return AlgebraDocument(algebra, model.frame)


def load_algebra(path: str) -> AlgebraDocument:
    """Loads an algebra file.

    Raises:
        FileNotFoundError: if the file does not exist
        FormatError: if the content is not a valid algebra file
    """
    raw = safe_get_file(path)
    if raw is None:
        raise FileNotFoundError(path)
    document = parse_algebra(raw)
    logger.debug(f"loaded {document.algebra!r} from {path}")
    return document


def save_algebra(path: str, L: LieAlgebra, block: Optional[FrameBlock] = None) -> None:
    safe_write_to_file(render_algebra(L, block), path)
    logger.debug(f"wrote {L!r} to {path}")


def vector_records(v: VectorExact) -> List[List[Any]]:
    return [[i, v.domain.format(value)] for i, value in v.items()]


def tensor_records(d: BiderTensor) -> List[List[Any]]:
    return [[i, j, k, d.domain.format(v)] for i, j, k, v in d.records()]


def matrix_records(m: MatrixExact) -> List[List[Any]]:
    return [[r, c, m.domain.format(v)] for r, c, v in m.entries()]


def _scalars(values: Sequence[Scalar], domain: ScalarDomain) -> List[str]:
    return [domain.format(v) for v in values]


def space_task(task: str, space: BiderSolutionSpace) -> Dict[str, Any]:
    return {
        "task": task,
        "mode": space.mode.value,
        "dim": space.dim_solution,
        "basis": [tensor_records(d) for d in space.basis],
    }


def derivation_task(
    derivations: Sequence[DerivationMatrix], inner: Subspace, outer_dim: int
) -> Dict[str, Any]:
    return {
        "task": "der",
        "dim": len(derivations),
        "inner_dim": inner.dim,
        "outer_dim": outer_dim,
        "basis": [matrix_records(d.matrix) for d in derivations],
    }


def radical_task(result: RadicalResult, properties: PropertyReport) -> Dict[str, Any]:
    return {
        "task": "radical",
        "dim": result.radical.dim,
        "symmetric_dim": result.space.dim_solution,
        "basis": [vector_records(v) for v in result.radical.vectors()],
        "witnesses": [[a, s, j] for a, (s, j) in result.witnesses.items()],
        "properties": {
            "subalgebra": properties.subalgebra,
            "ideal": properties.is_ideal,
            "annihilated": properties.annihilated,
            "stable": list(properties.stable),
        },
    }


def postlie_task(report: PostLieReport) -> Dict[str, Any]:
    domain = report.space.domain
    return {
        "task": "postlie",
        "param_dim": report.param_dim,
        "verdict": report.verdict.value,
        "method": report.method,
        "points": [_scalars(point, domain) for point in report.points],
        "system": [
            {
                "linear": [[s, domain.format(c)] for s, c in poly.linear],
                "quadratic": [[s, t, domain.format(c)] for (s, t), c in poly.quadratic],
            }
            for poly in report.system
        ],
        "parameter_basis": [tensor_records(d) for d in report.space.basis],
    }


def witt_task(problem: FilteredBiderProblem, generators: Sequence[GeneratorRow]) -> Dict[str, Any]:
    labels = problem.truncation.labels
    return {
        "task": f"witt:{problem.mode.value}",
        "mode": problem.mode.value,
        "dim": problem.dim_solution,
        "active_instances": problem.active_instances,
        "window": [labels[a] for a in problem.window],
        "basis": [tensor_records(d) for d in problem.basis],
        "support": [
            {"interior": [list(p) for p in c.interior], "boundary": [list(p) for p in c.boundary]}
            for c in problem.support_classes()
        ],
        "generators": [
            {
                "index": row.index,
                "label": row.label,
                "status": row.status.value,
                "partners": list(row.partners),
            }
            for row in generators
        ],
    }


class ReportFile(BaseModel):
    format_version: StrictInt
    tool_version: StrictStr
    algebra_fingerprint: StrictStr
    field: StrictStr
    window: Optional[Dict[str, StrictInt]] = None
    tasks: List[Dict[str, Any]]
    timing_ms: Dict[str, StrictInt]
    determinism_digest: StrictStr

    @property
    def expected_digest(self) -> str:
        return report_digest(self.dict(exclude_none=True))


def report_digest(data: Dict[str, Any]) -> str:
    """sha256 of the canonical report without its timing and digest fields."""
    payload = {k: v for k, v in data.items() if k not in ("timing_ms", "determinism_digest")}
    return sha256_hex(dump_json(payload))


def build_report(
    fingerprint: str,
    domain: ScalarDomain,
    tasks: Sequence[Dict[str, Any]],
    timing_ms: Dict[str, int],
    window: Optional[Dict[str, int]] = None,
) -> ReportFile:
    data: Dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "tool_version": TOOL_VERSION,
        "algebra_fingerprint": fingerprint,
        "field": domain.spec,
        "tasks": list(tasks),
        "timing_ms": {name: int(ms) for name, ms in timing_ms.items()},
    }
    if window is not None:
        data["window"] = dict(window)
    # a JSON round trip turns tuples into lists, so the digest matches a reloaded file
    data = json.loads(json.dumps(data))
    data["determinism_digest"] = report_digest(data)
    return ReportFile.parse_obj(data)


def render_report(report: ReportFile) -> str:
    return dump_json(report.dict(exclude_none=True))


def parse_report(text: str) -> ReportFile:
    """Reads a report file.

    Raises:
        FormatError: if the content is not JSON or breaks the schema
    """
    try:
        return ReportFile.parse_obj(json.loads(text))
    except json.JSONDecodeError as e:
        raise FormatError(f"not a JSON document: {e}")
    except ValidationError as e:
        raise FormatError(f"report file does not match the schema: {e}")
