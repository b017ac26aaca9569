"""HTTP service wrapping the enumeration engine.

Request and response shapes are pydantic models; each subcommand of the
command-line client maps to one handler function here, so the CLI and the
FastAPI app share one implementation.  Handlers raise ValueError (or
pydantic's subclass) on bad input, NotSlotBounded when a class has no
regular encoding in the requested mode, and ResourceCapExceeded or
StateCapExceeded when a cap is hit.

Caps are resolved per call: an explicit request value wins, then the
environment (CAYENC_MAX_STATES, CAYENC_MAX_SIZE), then the defaults.
"""

from __future__ import annotations

import os
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .classify import (
    is_horizontal_regular,
    is_vertical_regular,
    missing_jux_classes,
    survey_size3,
)
from .core import (
    ResourceCapExceeded,
    count_avoiders,
    format_basis,
    format_pattern,
    parse_basis,
    parse_pattern,
)
from .encodings import (
    InvalidWord,
    horizontal_decode,
    horizontal_encode,
    parse_horizontal_word,
    parse_vertical_word,
    vertical_decode,
    vertical_encode,
    word_to_text,
)
from .engine import (
    DEFAULT_STATE_CAP,
    NotSlotBounded,
    StateCapExceeded,
    explore,
    export_automaton,
    grammar_text,
    rule_system_to_json,
    series,
    solve_gf,
)
from .tilings import root_tiling, tiling_to_json, tiling_to_text

DEFAULT_SIZE_CAP = 10

Mode = Literal["vertical", "horizontal", "both"]
SingleMode = Literal["vertical", "horizontal"]


def state_cap(override: int | None) -> int:
    if override is not None:
        return override
    return int(os.environ.get("CAYENC_MAX_STATES", DEFAULT_STATE_CAP))


def size_cap(override: int | None) -> int:
    if override is not None:
        return override
    return int(os.environ.get("CAYENC_MAX_SIZE", DEFAULT_SIZE_CAP))


def _check_size(n: int, override: int | None) -> None:
    cap = size_cap(override)
    if n > cap:
        raise ResourceCapExceeded(
            f"size cap exceeded: {n} > {cap} (raise --max-size or CAYENC_MAX_SIZE)"
        )


def _resolve_mode(basis, mode: str) -> str:
    """Pick the working mode; "both" prefers vertical."""
    if mode != "both":
        return mode
    if is_vertical_regular(basis):
        return "vertical"
    if is_horizontal_regular(basis):
        return "horizontal"
    raise NotSlotBounded(
        f"Av({format_basis(basis)}) is not slot-bounded in either mode"
    )


class ClassifyRequest(BaseModel):
    basis: list[str] = Field(min_length=1)
    mode: Mode = "both"


class ModeVerdict(BaseModel):
    mode: SingleMode
    regular: bool
    missing: list[str]


class ClassifyResponse(BaseModel):
    basis: str
    verdicts: list[ModeVerdict]


def handle_classify(req: ClassifyRequest) -> ClassifyResponse:
    basis = parse_basis(req.basis)
    modes = ("vertical", "horizontal") if req.mode == "both" else (req.mode,)
    verdicts = []
    for mode in modes:
        missing = missing_jux_classes(basis, mode)
        verdicts.append(
            ModeVerdict(mode=mode, regular=not missing, missing=list(missing))
        )
    return ClassifyResponse(basis=format_basis(basis), verdicts=verdicts)


class GfRequest(BaseModel):
    basis: list[str] = Field(min_length=1)
    mode: Mode = "vertical"
    terms: int = Field(default=10, ge=1)
    max_states: int | None = Field(default=None, ge=1)


class GfResponse(BaseModel):
    basis: str
    mode: SingleMode
    states: int
    gf: str
    num: list[int]
    den: list[int]
    terms: list[int]


def handle_gf(req: GfRequest) -> GfResponse:
    basis = parse_basis(req.basis)
    mode = _resolve_mode(basis, req.mode)
    system = explore(basis, mode, state_cap(req.max_states))
    g = solve_gf(system)
    return GfResponse(
        basis=format_basis(basis),
        mode=mode,
        states=len(system.productions),
        gf=str(g),
        num=list(g.num.coeffs),
        den=list(g.den.coeffs),
        terms=list(series(g, req.terms)),
    )


class CountRequest(BaseModel):
    basis: list[str] = Field(min_length=1)
    terms: int = Field(default=10, ge=1)
    max_size: int | None = Field(default=None, ge=1)


class CountResponse(BaseModel):
    basis: str
    terms: list[int]


def handle_count(req: CountRequest) -> CountResponse:
    basis = parse_basis(req.basis)
    _check_size(req.terms, req.max_size)
    counts = [count_avoiders(basis, n) for n in range(1, req.terms + 1)]
    return CountResponse(basis=format_basis(basis), terms=counts)


class EncodeRequest(BaseModel):
    perm: str
    mode: Mode = "vertical"


class EncodeResponse(BaseModel):
    perm: str
    words: dict[SingleMode, str]


def handle_encode(req: EncodeRequest) -> EncodeResponse:
    p = parse_pattern(req.perm)
    modes = ("vertical", "horizontal") if req.mode == "both" else (req.mode,)
    words = {}
    for mode in modes:
        encode = vertical_encode if mode == "vertical" else horizontal_encode
        words[mode] = word_to_text(encode(p))
    return EncodeResponse(perm=format_pattern(p), words=words)


class DecodeRequest(BaseModel):
    word: str
    mode: SingleMode = "vertical"


class DecodeResponse(BaseModel):
    word: str
    mode: SingleMode
    perm: str


def handle_decode(req: DecodeRequest) -> DecodeResponse:
    if req.mode == "vertical":
        p = vertical_decode(parse_vertical_word(req.word))
    else:
        p = horizontal_decode(parse_horizontal_word(req.word))
    return DecodeResponse(word=req.word, mode=req.mode, perm=format_pattern(p))


class SurveyRow(BaseModel):
    size: int
    bases: int
    vertical: int
    horizontal: int
    either: int


class SurveyResponse(BaseModel):
    rows: list[SurveyRow]
    total_either: int


def handle_survey() -> SurveyResponse:
    data = survey_size3()
    rows = [
        SurveyRow(
            size=size,
            bases=row["classes"],
            vertical=row["vertical"],
            horizontal=row["horizontal"],
            either=row["either"],
        )
        for size, row in sorted(data["rows"].items())
    ]
    return SurveyResponse(rows=rows, total_either=data["total_either"])


class VerifyRequest(BaseModel):
    basis: list[str] = Field(min_length=1)
    mode: Mode = "both"
    terms: int = Field(default=10, ge=1)
    max_states: int | None = Field(default=None, ge=1)
    max_size: int | None = Field(default=None, ge=1)


class VerifyRow(BaseModel):
    n: int
    from_gf: int
    brute: int
    match: bool


class VerifyResponse(BaseModel):
    basis: str
    mode: SingleMode
    rows: list[VerifyRow]
    agree: bool


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    basis = parse_basis(req.basis)
    _check_size(req.terms, req.max_size)
    mode = _resolve_mode(basis, req.mode)
    system = explore(basis, mode, state_cap(req.max_states))
    coeffs = series(solve_gf(system), req.terms)
    rows = []
    for n in range(1, req.terms + 1):
        brute = count_avoiders(basis, n)
        rows.append(
            VerifyRow(n=n, from_gf=coeffs[n - 1], brute=brute, match=coeffs[n - 1] == brute)
        )
    return VerifyResponse(
        basis=format_basis(basis),
        mode=mode,
        rows=rows,
        agree=all(r.match for r in rows),
    )


class ExportRequest(BaseModel):
    basis: list[str] = Field(min_length=1)
    kind: Literal["grammar", "tiling"] = "grammar"
    mode: Mode = "vertical"
    format: Literal["text", "json", "dot"] = "text"
    max_states: int | None = Field(default=None, ge=1)


class ExportResponse(BaseModel):
    kind: str
    format: str
    content: str


def handle_export(req: ExportRequest) -> ExportResponse:
    basis = parse_basis(req.basis)
    if req.kind == "tiling":
        if req.format == "dot":
            raise ValueError("tilings have no dot form; use --format text or json")
        root = root_tiling(basis)
        content = tiling_to_json(root) if req.format == "json" else tiling_to_text(root)
    else:
        mode = _resolve_mode(basis, req.mode)
        system = explore(basis, mode, state_cap(req.max_states))
        if req.format == "json":
            content = rule_system_to_json(system)
        elif req.format == "dot":
            content = export_automaton(system, "dot")
        else:
            content = grammar_text(system)
    return ExportResponse(kind=req.kind, format=req.format, content=content)


def create_app() -> FastAPI:
    app = FastAPI(title="cayenc", description="Cayley permutation class enumeration")

    @app.exception_handler(ValueError)
    def _invalid(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(InvalidWord)
    def _bad_word(request: Request, exc: InvalidWord) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(NotSlotBounded)
    def _not_bounded(request: Request, exc: NotSlotBounded) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ResourceCapExceeded)
    def _cap(request: Request, exc: ResourceCapExceeded) -> JSONResponse:
        return JSONResponse(status_code=429, content={"detail": str(exc)})

    @app.exception_handler(StateCapExceeded)
    def _state_cap(request: Request, exc: StateCapExceeded) -> JSONResponse:
        return JSONResponse(status_code=429, content={"detail": str(exc)})

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(req: ClassifyRequest) -> ClassifyResponse:
        return handle_classify(req)

    @app.post("/gf", response_model=GfResponse)
    def gf(req: GfRequest) -> GfResponse:
        return handle_gf(req)

    @app.post("/count", response_model=CountResponse)
    def count(req: CountRequest) -> CountResponse:
        return handle_count(req)

    @app.post("/encode", response_model=EncodeResponse)
    def encode(req: EncodeRequest) -> EncodeResponse:
        return handle_encode(req)

    @app.post("/decode", response_model=DecodeResponse)
    def decode(req: DecodeRequest) -> DecodeResponse:
        return handle_decode(req)

    @app.get("/survey", response_model=SurveyResponse)
    def survey() -> SurveyResponse:
        return handle_survey()

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return handle_verify(req)

    @app.post("/export", response_model=ExportResponse)
    def export(req: ExportRequest) -> ExportResponse:
        return handle_export(req)

    return app
