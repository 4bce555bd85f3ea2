"""
JSON system descriptor.

A descriptor names its ``kind`` and lists the coefficient blocks of the
system; any block left out defaults to zero and every slope pair to (-1, +1).
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..utils.exceptions import DescriptorError, ModelError
from .types import NonsmoothQuadCoeffs, PlanarSystem, SlopePair, SmoothCoeffs, System3D, SystemND

Pair = Tuple[float, float]
Matrix2 = List[List[float]]

_ABS_PAIR: Pair = (-1.0, 1.0)


def _zeros2() -> Matrix2:
    return [[0.0, 0.0], [0.0, 0.0]]


def _check_2x2(value: Matrix2, name: str) -> Matrix2:
    if len(value) != 2 or any(len(row) != 2 for row in value):
        raise ValueError(f"{name} must be a 2x2 matrix")
    return value


class QuadBlock(BaseModel):
    """Modulus coefficients a, b and their eight slope pairs."""

    model_config = ConfigDict(extra="forbid")

    a: Matrix2 = Field(default_factory=_zeros2)
    b: Matrix2 = Field(default_factory=_zeros2)
    slopes: List[Pair] = Field(default_factory=lambda: [_ABS_PAIR] * 8)

    @field_validator("a", "b")
    @classmethod
    def _square(cls, value: Matrix2, info) -> Matrix2:
        return _check_2x2(value, info.field_name)

    @field_validator("slopes")
    @classmethod
    def _eight(cls, value: List[Pair]) -> List[Pair]:
        if len(value) != 8:
            raise ValueError(f"slopes needs 8 pairs, got {len(value)}")
        return value

    def to_coeffs(self) -> NonsmoothQuadCoeffs:
        return NonsmoothQuadCoeffs.from_matrices(self.a, self.b, [SlopePair(*p) for p in self.slopes])


class SmoothBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quadratic: List[float] = Field(default_factory=lambda: [0.0] * 6)
    cubic: List[float] = Field(default_factory=lambda: [0.0] * 8)

    @model_validator(mode="after")
    def _lengths(self) -> "SmoothBlock":
        if len(self.quadratic) != 6 or len(self.cubic) != 8:
            raise ValueError("smooth block needs 6 quadratic and 8 cubic values")
        return self

    def to_coeffs(self) -> SmoothCoeffs:
        return SmoothCoeffs.from_lists(self.quadratic, self.cubic)


class Couplings(BaseModel):
    """Vector couplings of u into the planar equations (nd kind)."""

    model_config = ConfigDict(extra="forbid")

    c6: Optional[List[float]] = None
    c7: Optional[List[float]] = None
    c8: Optional[List[float]] = None
    c9: Optional[List[float]] = None


class SystemDescriptor(BaseModel):
    """
    Parsed system descriptor.

    ``c`` holds c1..c9 for kind "3d" and the seven shimmy constants
    c~1..c~7 for kind "shimmy". ``h`` is 2x2 for "3d" and k x 2 x 2 for "nd".
    """

    model_config = ConfigDict(extra="forbid")

    kind: Literal["planar-nf", "planar-general", "3d", "nd", "shimmy"]
    linear: Optional[Matrix2] = None
    mu: float = 0.0
    omega: float = 1.0
    quad: QuadBlock = Field(default_factory=QuadBlock)
    smooth: SmoothBlock = Field(default_factory=SmoothBlock)
    c: Optional[List[float]] = None
    h: Optional[List[Any]] = None
    h_slopes: Optional[List[Any]] = None
    transverse: Optional[List[List[float]]] = None
    couplings: Couplings = Field(default_factory=Couplings)
    uu: Optional[List[Any]] = None
    uv: Optional[List[List[float]]] = None
    uw: Optional[List[List[float]]] = None
    vw: Optional[List[float]] = None

    @model_validator(mode="after")
    def _kind_requirements(self) -> "SystemDescriptor":
        if self.kind == "planar-general":
            if self.linear is None:
                raise ValueError("kind 'planar-general' requires 'linear'")
            _check_2x2(self.linear, "linear")
        elif self.linear is not None:
            raise ValueError(f"'linear' is only allowed for kind 'planar-general', not '{self.kind}'")
        if self.kind == "3d" and self.c is not None and len(self.c) != 9:
            raise ValueError(f"kind '3d' needs 9 c-coefficients, got {len(self.c)}")
        if self.kind == "shimmy" and (self.c is None or len(self.c) != 7):
            raise ValueError("kind 'shimmy' needs 7 constants c~1..c~7 in 'c'")
        if self.kind == "nd" and self.transverse is None:
            raise ValueError("kind 'nd' requires 'transverse'")
        return self

    def to_system(self) -> Union[PlanarSystem, System3D, SystemND, Any]:
        """Convert into the immutable core type (or ShimmyParams)."""
        try:
            return self._build()
        except ModelError as e:
            raise DescriptorError(f"Invalid system: {e.message}", details=e.details) from e

    def _planar(self) -> PlanarSystem:
        linear = None
        if self.linear is not None:
            linear = (tuple(self.linear[0]), tuple(self.linear[1]))
        return PlanarSystem(
            mu=self.mu, omega=self.omega,
            quad=self.quad.to_coeffs(), smooth=self.smooth.to_coeffs(), linear=linear,
        )

    def _build(self):
        if self.kind in ("planar-nf", "planar-general"):
            return self._planar()
        if self.kind == "3d":
            return System3D.from_lists(
                self._planar(),
                self.c if self.c is not None else [0.0] * 9,
                self.h if self.h is not None else _zeros2(),
                None if self.h_slopes is None else [SlopePair(*p) for p in self.h_slopes],
            )
        if self.kind == "nd":
            k = len(self.transverse)
            slopes = None
            if self.h_slopes is not None:
                slopes = [[SlopePair(*p) for p in group] for group in self.h_slopes]
            return SystemND(
                planar=self._planar(),
                transverse=self.transverse,
                c6=self.couplings.c6, c7=self.couplings.c7,
                c8=self.couplings.c8, c9=self.couplings.c9,
                uu=self.uu, uv=self.uv, uw=self.uw, vw=self.vw,
                h=self.h, h_slopes=slopes if slopes is not None else [None] * k,
            )
        from ..shimmy.model import ShimmyParams

        return ShimmyParams.from_list(self.c)


def parse_descriptor(data: Union[str, bytes, Dict[str, Any]]) -> SystemDescriptor:
    """Validate a descriptor given as JSON text or an already decoded mapping."""
    try:
        if isinstance(data, (str, bytes)):
            return SystemDescriptor.model_validate_json(data)
        return SystemDescriptor.model_validate(data)
    except ValidationError as e:
        raise DescriptorError(
            "System descriptor does not match the schema",
            details={"errors": json.loads(e.json(include_url=False))},
        ) from e


def load_descriptor(path: Union[str, Path]) -> SystemDescriptor:
    """Read and validate a descriptor file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DescriptorError(f"Cannot read descriptor: {path}", details={"path": str(path)}) from e
    return parse_descriptor(text)


def load_system(path: Union[str, Path]):
    return load_descriptor(path).to_system()
