"""Scenario configuration (pydantic, unknown keys rejected)."""

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SurfaceSpec(_Strict):
    kind: Optional[Literal["plate", "cylinder", "sphere", "cone", "torus"]] = None
    params: dict[str, float] = Field(default_factory=dict)
    partials: Literal["analytic", "fd"] = "analytic"
    fd_step: float = 1e-5
    # deliberate corruption for negative tests
    curvature_scale: tuple[float, float] = (1.0, 1.0)
    # tabulated surface: vector2 field files (A1, A2) and (k1, k2)
    lame_file: Optional[str] = None
    curvature_file: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        tab = self.lame_file is not None or self.curvature_file is not None
        if tab and self.kind is not None:
            raise ValueError("give either a canonical kind or tabulated files, not both")
        if not tab and self.kind is None:
            raise ValueError("surface needs a canonical kind or lame_file/curvature_file")
        if tab and (self.lame_file is None or self.curvature_file is None):
            raise ValueError("tabulated surfaces need both lame_file and curvature_file")
        return self


class MaterialSpec(_Strict):
    E: float = 1.0
    nu: float = 0.3
    rho: float = 1.0
    h: float = 0.01


class GridSpec(_Strict):
    n: tuple[int, int] = (32, 32)
    domain: Optional[tuple[tuple[float, float], tuple[float, float]]] = None


class FieldSpec(_Strict):
    """Named analytic preset or field files."""

    preset: str = "zero"
    params: dict[str, float] = Field(default_factory=dict)
    u_file: Optional[str] = None
    w_file: Optional[str] = None


class LoadSpec(_Strict):
    preset: str = "zero"
    params: dict[str, float] = Field(default_factory=dict)


class CheckOptions(_Strict):
    probe: int = 8
    tol: float = 1e-8


class StrainOptions(_Strict):
    oracle_z: list[float] = Field(default_factory=list)
    oracle_eps: float = 1e-4
    oracle_probe: int = 4


class ResultantOptions(_Strict):
    tol: float = 1e-12


class DispersionOptions(_Strict):
    kind: Literal["plate_bending", "cylinder_breathing", "sphere_breathing", "cylinder_axisymmetric"] = "plate_bending"
    k: list[float] = Field(default_factory=list)
    n: int = 64
    coupled: bool = False
    tol: Optional[float] = None


class SimulateOptions(_Strict):
    dt: Optional[float] = None
    dt_per_period: Optional[float] = 200.0
    periods: float = 10.0
    steps: Optional[int] = None
    mode: Literal["cylinder_breathing", "sphere_breathing", "plate_bending"] = "cylinder_breathing"
    k: float = 1.0
    checkpoint_every: int = 0
    energy_tol: float = 1e-2


class ScenarioConfig(_Strict):
    surface: SurfaceSpec
    material: MaterialSpec = Field(default_factory=MaterialSpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    displacement: FieldSpec = Field(default_factory=FieldSpec)
    acceleration: FieldSpec = Field(default_factory=FieldSpec)
    loads: LoadSpec = Field(default_factory=LoadSpec)
    check: CheckOptions = Field(default_factory=CheckOptions)
    strain: StrainOptions = Field(default_factory=StrainOptions)
    resultants: ResultantOptions = Field(default_factory=ResultantOptions)
    dispersion: DispersionOptions = Field(default_factory=DispersionOptions)
    simulate: SimulateOptions = Field(default_factory=SimulateOptions)


def parse_config(text, suffix=".json"):
    if suffix in (".yaml", ".yml"):
        import yaml

        return ScenarioConfig.model_validate(yaml.safe_load(text))
    return ScenarioConfig.model_validate(json.loads(text))


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), path.suffix.lower())


def dump_config(cfg):
    return cfg.model_dump_json(indent=2)
