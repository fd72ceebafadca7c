"""Request and response models for the HTTP service."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class HealthResponse(BaseModel):
    status: str


class ServiceInfo(BaseModel):
    version: str
    table_path: str
    table_digest: str
    knot_count: int
    default_cap: int


class KnotSummary(BaseModel):
    name: str
    crossing_number: Optional[int] = None
    determinant: int
    signature: int
    s: Optional[int] = None
    tau: Optional[int] = None
    u_min: Optional[int] = None
    u_max: Optional[int] = None
    alternating: Optional[bool] = None
    bridge_number: Optional[int] = None


class KnotsResponse(BaseModel):
    table_digest: str
    knots: List[KnotSummary]


class InfoResponse(BaseModel):
    """Invariants of one knot expression."""

    expr: str
    canonical: str
    determinant: int
    signature: int
    s: Optional[int] = None
    tau: Optional[int] = None
    u_min: Optional[int] = None
    u_max: Optional[int] = None
    group_order: int
    orders: List[int]
    gram: List[List[str]]
    fp_ranks: Dict[int, int]


class BoundRequest(BaseModel):
    expr_j: str
    expr_k: str
    eps: Optional[int] = None
    cap: Optional[int] = Field(default=None, ge=1)

    @field_validator("eps")
    @classmethod
    def _eps_sign(cls, v):
        if v not in (None, 1, -1):
            raise ValueError("eps must be 1, -1 or null")
        return v


class ClassicalBoundsModel(BaseModel):
    sigma_bound: int
    s_bound: Optional[int] = None
    tau_bound: Optional[int] = None
    fp_bound: int
    fp_best_p: Optional[int] = None
    u_sum_min: Optional[int] = None
    u_sum_max: Optional[int] = None


class BoundResponse(BaseModel):
    expr_j: str
    expr_k: str
    canonical_j: str
    canonical_k: str
    det_j: int
    det_k: int
    coprime: bool
    bounds: ClassicalBoundsModel
    d1_status: str
    d1_detail: dict
    d2_status: str
    d2_detail: dict
    lower: int
    lower_source: str
    upper: Optional[int] = None
    exact: bool
    verdict: str


class CandidateModel(BaseModel):
    a: int
    b: int
    c: int
    matrix: List[List[int]]


class CandidatesResponse(BaseModel):
    d: int
    candidates: List[CandidateModel]


class ScanRequest(BaseModel):
    max_composite_crossings: int = Field(default=0, ge=0)
    cap: Optional[int] = Field(default=None, ge=1)
    jobs: int = Field(default=1, ge=1)
    eps: Optional[int] = None

    @field_validator("eps")
    @classmethod
    def _eps_sign(cls, v):
        if v not in (None, 1, -1):
            raise ValueError("eps must be 1, -1 or null")
        return v


class ScanResponse(BaseModel):
    rows: List[dict]
    summary: dict
