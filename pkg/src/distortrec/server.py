"""Local audit HTTP API: recognize, inspect, edit, undo, save, diff.

One working model per server process. Edits are serialized through a lock;
recognition reads a consistent snapshot. The server binds loopback by
default and never writes client texts to disk.
"""

from __future__ import annotations

import threading
from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .model import Model, diff_models, edit_entry, load_model, save_model
from .recognizer import NgramIndex, RecognitionConfig, recognize, result_to_dict
from .textprep import tokenize

UNDO_DEPTH = 1000


class RecognizeBody(BaseModel):
    text: str
    DT: int = 50
    weighted: bool = True


class EntryPatch(BaseModel):
    distortion: str
    ngram: Union[list[str], str]
    weight: Optional[float] = None

    def ngram_tuple(self) -> tuple[str, ...]:
        if isinstance(self.ngram, str):
            return tuple(self.ngram.split())
        return tuple(self.ngram)


class SaveBody(BaseModel):
    dir: Optional[str] = None


class Session:
    def __init__(self, model: Model | None = None, model_dir: str | None = None):
        self.lock = threading.Lock()
        self.model_dir = model_dir
        self.baseline = model
        self.working = model
        self.index = NgramIndex(model) if model else None
        # (distortion, ngram, weight to restore; None = entry was absent)
        self.undo_log: list[tuple[str, tuple[str, ...], float | None]] = []

    def require_model(self) -> Model:
        if self.working is None:
            raise HTTPException(status_code=409, detail="no model loaded")
        return self.working

    def apply_edit(self, distortion: str, ngram: tuple[str, ...], weight: float | None):
        with self.lock:
            model = self.require_model()
            try:
                dictionary = model.dictionary(distortion)
            except KeyError:
                raise HTTPException(status_code=404,
                                    detail=f"unknown distortion {distortion!r}") from None
            previous = dictionary.entries.get(ngram)
            try:
                new_model, changed = edit_entry(model, distortion, ngram, weight)
            except ValueError as e:
                raise HTTPException(status_code=422, detail=str(e)) from None
            if changed:
                self.working = new_model
                self.index = NgramIndex(new_model)
                self.undo_log.append((distortion, ngram, previous))
                del self.undo_log[:-UNDO_DEPTH]
            return changed

    def undo(self) -> bool:
        with self.lock:
            self.require_model()
            if not self.undo_log:
                return False
            distortion, ngram, previous = self.undo_log.pop()
            self.working, _ = edit_entry(self.working, distortion, ngram, previous)
            self.index = NgramIndex(self.working)
            return True


def create_app(model_dir: str | None = None, model: Model | None = None) -> FastAPI:
    if model is None and model_dir is not None:
        model = load_model(model_dir)
    session = Session(model=model, model_dir=model_dir)
    app = FastAPI(title="distortrec audit API")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.session = session

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.post("/recognize")
    def post_recognize(body: RecognizeBody):
        session.require_model()
        index = session.index  # consistent snapshot
        cfg = RecognitionConfig(dt=body.DT, weighted=body.weighted)
        result = recognize(tokenize(body.text), index, cfg)
        return result_to_dict(result)

    @app.get("/model")
    def get_model(distortion: str | None = None, filter: str | None = None,
                  page: int = 0, page_size: int = 100):
        model = session.require_model()
        if distortion is not None and distortion not in model.labels:
            raise HTTPException(status_code=404, detail=f"unknown distortion {distortion!r}")
        entries = []
        for d in model.dictionaries:
            if distortion and d.distortion != distortion:
                continue
            for g, w in d.entries.items():
                text = " ".join(g)
                if filter and filter.lower() not in text:
                    continue
                entries.append({"distortion": d.distortion, "ngram": list(g), "weight": w})
        entries.sort(key=lambda e: (e["distortion"], -e["weight"], e["ngram"]))
        total = len(entries)
        lo = page * page_size
        return {
            "labels": model.labels,
            "nm": model.nm,
            "total": total,
            "page": page,
            "page_size": page_size,
            "entries": entries[lo:lo + page_size],
        }

    @app.patch("/model/entries")
    def patch_entry(body: EntryPatch):
        ngram = body.ngram_tuple()
        if not ngram or any(not t for t in ngram):
            raise HTTPException(status_code=422, detail="empty N-gram")
        changed = session.apply_edit(body.distortion, ngram, body.weight)
        return {"changed": changed, "undo_depth": len(session.undo_log)}

    @app.post("/model/undo")
    def post_undo():
        undone = session.undo()
        return {"undone": undone, "undo_depth": len(session.undo_log)}

    @app.post("/model/save")
    def post_save(body: SaveBody | None = None):
        model = session.require_model()
        target = (body.dir if body and body.dir else session.model_dir)
        if not target:
            raise HTTPException(status_code=400, detail="no target directory")
        save_model(model, target)
        return {"saved_to": str(target)}

    @app.get("/model/diff")
    def get_diff():
        session.require_model()
        d = diff_models(session.baseline, session.working)
        def render(entries):
            return {
                label: [{"ngram": list(g), **({"weight": v} if not isinstance(v, tuple)
                                              else {"from": v[0], "to": v[1]})}
                        for g, v in sorted(items.items())]
                for label, items in entries.items()
            }
        return {
            "added": render(d.added),
            "removed": render(d.removed),
            "reweighted": render(d.reweighted),
            "empty": d.is_empty(),
        }

    return app
