"""HTTP front end for the workbench commands.

The service and the command line share ``workbench.run``-style entry points,
so a request body here produces the same report as the equivalent CLI call.
Run with ``uvicorn ptilt.service:app``.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import workbench as wb
from .algebra import AlgebraError
from .morcat import MorError
from .repmod import RepError, ResourceRefusal


class OptionsModel(BaseModel):
    prime: Optional[int] = None
    mult_cap: int = Field(2, ge=1)
    seed: int = 0
    allow_inconclusive: bool = False
    six_term_form: str = Field("stated", pattern="^(stated|unpulled)$")
    injective_witnesses: bool = False

    def to_options(self) -> wb.Options:
        return wb.Options(**self.model_dump())


class SessionRequest(BaseModel):
    # either a corpus name or the text of a session file
    corpus: Optional[str] = None
    text: Optional[str] = None
    name: str = "session"
    options: OptionsModel = OptionsModel()


class ReportModel(BaseModel):
    command: str
    algebra: str
    options: Dict[str, Any]
    sources: Dict[str, str]
    rows: List[List[str]]
    failures: List[List[str]]
    inconclusive: List[List[str]]
    summary: Dict[str, Any]
    refused: str
    status: str


app = FastAPI(title="ptilt workbench")


def _session(req: SessionRequest) -> wb.Session:
    opts = req.options.to_options()
    if (req.corpus is None) == (req.text is None):
        raise HTTPException(status_code=422, detail="give exactly one of 'corpus' and 'text'")
    try:
        if req.corpus is not None:
            return wb.open_session(req.corpus, opts)
        return wb.parse_session(req.text, req.name, opts)
    except (wb.InputError, AlgebraError, RepError, MorError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except ResourceRefusal as exc:
        raise HTTPException(status_code=413, detail=str(exc))


def _run(fn, req: SessionRequest, *args) -> ReportModel:
    session = _session(req)
    try:
        report = fn(session, *args)
    except (wb.InputError, AlgebraError, RepError, MorError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except ResourceRefusal as exc:
        report = wb.Report(fn.__name__, session.algebra.name, session.options.snapshot(),
                           dict(session.sources), refused=str(exc))
    return ReportModel(**report.to_dict())


@app.get("/corpus")
def corpus() -> List[str]:
    return list(wb.CORPUS)


@app.post("/load", response_model=ReportModel)
def load(req: SessionRequest):
    return _run(wb.cmd_load, req)


@app.post("/table1", response_model=ReportModel)
def table1(req: SessionRequest):
    return _run(wb.cmd_table1, req)


@app.post("/verify/{target}", response_model=ReportModel)
def verify(target: str, req: SessionRequest):
    if target not in wb.VERIFY_TARGETS:
        raise HTTPException(status_code=404, detail=f"unknown target {target!r}")
    return _run(wb.cmd_verify, req, target)


@app.post("/enumerate/{what}", response_model=ReportModel)
def enumerate_(what: str, req: SessionRequest):
    if what not in wb.ENUMERATE_TARGETS:
        raise HTTPException(status_code=404, detail=f"unknown target {what!r}")
    return _run(wb.cmd_enumerate, req, what)
