"""HTTP JSON API behind the feedback page.

Every mutation is validated, appended to the event log, then applied to the
in-memory engine through the same fold used at startup, so a restart replays
to byte-identical responses.  Ratings of zero reshape the user's tag lists
synchronously; list regeneration happens only at cycle time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from tagrec.engine import CycleParams, Engine, load_engine, mint_token
from tagrec.errors import NotFoundError
from tagrec.store import append_event, state_dir, write_json, write_text

CONFIG_KEYS = ("listen", "data_dir", "admin_secret", "session_ttl_days", "base_url")


@dataclass
class ServiceConfig:
    listen: str = "127.0.0.1:8000"
    data_dir: str = "data"
    admin_secret: str = "change-me"
    session_ttl_days: int = 30
    base_url: str = ""

    def resolved_base_url(self) -> str:
        return self.base_url or f"http://{self.listen}"


def load_service_config(path: str | None = None, **overrides) -> ServiceConfig:
    """Key=value file, then TAGREC_* environment, then explicit overrides."""
    values: dict[str, str] = {}
    if path:
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if "=" in line:
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
    for key in CONFIG_KEYS:
        env = os.environ.get(f"TAGREC_{key.upper()}")
        if env is not None:
            values[key] = env
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    cfg = ServiceConfig()
    if "listen" in values:
        cfg.listen = values["listen"]
    if "data_dir" in values:
        cfg.data_dir = values["data_dir"]
    if "admin_secret" in values:
        cfg.admin_secret = values["admin_secret"]
    if "session_ttl_days" in values:
        cfg.session_ttl_days = int(values["session_ttl_days"])
    if "base_url" in values:
        cfg.base_url = values["base_url"]
    return cfg


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _expired(expires_at: str) -> bool:
    return _now() > datetime.fromisoformat(expires_at)


def persist_outputs(engine: Engine, data_dir: str | Path, base_url: str,
                    tokens: dict[str, str] | None = None) -> None:
    """Write the per-cycle artifacts: snapshot, lists, matrix CSV, outbox."""
    out = state_dir(data_dir)
    write_json(out / "profiles.json", engine.profiles_snapshot())
    write_json(out / "lists.json", engine.lists_json_obj())
    if engine.matrix is not None:
        write_text(out / "matrix.csv", engine.matrix.to_csv())
    if tokens:
        lines = [f"{user}\t{base_url}/ui/#{tokens[user]}" for user in sorted(tokens)]
        write_text(out / "outbox.txt", "\n".join(lines) + "\n")


def run_cycle_and_mint(engine: Engine, data_dir: str | Path, config: ServiceConfig,
                       params: CycleParams) -> tuple[dict, dict[str, str]]:
    """Append + apply a cycle event, then one session event per listed user."""
    seq = engine.cycle_seq + 1
    now = _now()
    cycle_event = {"type": "cycle", "seq": seq, "params": params.to_json_obj(),
                   "at": now.isoformat()}
    append_event(data_dir, cycle_event)
    engine.apply_event(cycle_event)

    tokens: dict[str, str] = {}
    expires = (now + timedelta(days=config.session_ttl_days)).isoformat()
    for user in sorted(engine.lists):
        token = mint_token(config.admin_secret, user, seq)
        event = {"type": "session", "token": token, "user_id": user,
                 "created_at": now.isoformat(), "expires_at": expires, "cycle_seq": seq}
        append_event(data_dir, event)
        engine.apply_event(event)
        tokens[user] = token

    persist_outputs(engine, data_dir, config.resolved_base_url(), tokens)
    summary = engine.last_summary
    return {
        "cycle_seq": summary.seq,
        "users": summary.users,
        "lists": summary.lists,
        "mean_list_length": summary.mean_list_length,
        "skipped_cold_start": summary.skipped_cold_start,
    }, tokens


def _enriched_list(engine: Engine, user_id: str) -> dict:
    rec_list = engine.lists.get(user_id)
    items = []
    if rec_list is not None:
        for item in rec_list.items:
            obj = item.to_json_obj()
            if item.item_kind == "book":
                book = engine.corpus.books.get(item.item_id)
                obj["title"] = book.title if book else ""
                obj["detail_url"] = None
            else:
                doc = engine.corpus.documents.get(item.item_id)
                obj["title"] = doc.title if doc else ""
                obj["detail_url"] = doc.detail_url if doc else None
            items.append(obj)
    return {
        "user_id": user_id,
        "generated_at": rec_list.generated_at if rec_list else "",
        "items": items,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="tagrec")
    app.state.config = config
    app.state.engine = load_engine(config.data_dir)

    def session_or_error(token: str, expired_status: int):
        session = app.state.engine.sessions.get(token)
        if session is None:
            return None, JSONResponse({"error": "unknown token"}, status_code=404)
        if _expired(session.expires_at):
            return None, JSONResponse({"error": "session expired"}, status_code=expired_status)
        return session, None

    @app.get("/api/v1/recommendations/{token}")
    def get_recommendations(token: str):
        session, error = session_or_error(token, expired_status=410)
        if error:
            return error
        engine: Engine = app.state.engine
        payload = _enriched_list(engine, session.user_id)
        payload.update(engine.tag_lists_for(session.user_id))
        return payload

    @app.post("/api/v1/recommendations/{token}/ratings")
    async def post_rating(token: str, request: Request):
        session, error = session_or_error(token, expired_status=409)
        if error:
            return error
        engine: Engine = app.state.engine
        body = await request.json()
        score = body.get("score")
        if not isinstance(score, int) or score not in (0, 1, 2, 3):
            return JSONResponse({"error": "score must be an integer 0..3"}, status_code=400)
        item_id = str(body.get("item_id", ""))
        item_kind = str(body.get("item_kind", ""))
        rec_list = engine.lists.get(session.user_id)
        listed = rec_list is not None and any(
            it.item_id == item_id and it.item_kind == item_kind for it in rec_list.items)
        if not listed:
            return JSONResponse({"error": "item not in the user's list"}, status_code=404)
        event = {"type": "rating", "user_id": session.user_id, "item_id": item_id,
                 "item_kind": item_kind, "score": score, "rated_at": _now().isoformat()}
        append_event(config.data_dir, event)
        engine.apply_event(event)
        response = {"saved": True, "item_id": item_id, "item_kind": item_kind, "score": score}
        response.update(engine.tag_lists_for(session.user_id))
        return response

    @app.post("/api/v1/recommendations/{token}/tags/reallocate")
    async def post_reallocate(token: str, request: Request):
        session, error = session_or_error(token, expired_status=409)
        if error:
            return error
        engine: Engine = app.state.engine
        body = await request.json()
        tag = str(body.get("tag", ""))
        direction = str(body.get("direction", ""))
        if direction not in ("to_irrelevant", "to_relevant"):
            return JSONResponse({"error": "direction must be to_irrelevant|to_relevant"},
                                status_code=400)
        profile = engine.profiles.get(session.user_id)
        irrelevant = engine.irrelevant.get(session.user_id)
        in_source = (
            (direction == "to_irrelevant" and profile is not None and tag in profile.entries)
            or (direction == "to_relevant" and irrelevant is not None and tag in irrelevant.tags)
        )
        if not in_source:
            return JSONResponse({"error": "tag not in source list"}, status_code=404)
        event = {"type": "reallocate", "user_id": session.user_id, "tag": tag,
                 "direction": direction, "at": _now().isoformat()}
        append_event(config.data_dir, event)
        try:
            engine.apply_event(event)
        except NotFoundError:
            return JSONResponse({"error": "tag not in source list"}, status_code=404)
        response = {"moved": tag, "direction": direction}
        response.update(engine.tag_lists_for(session.user_id))
        return response

    @app.post("/api/v1/admin/cycle")
    async def post_cycle(request: Request, x_admin_secret: str | None = Header(default=None)):
        if x_admin_secret != config.admin_secret:
            return JSONResponse({"error": "admin secret required"}, status_code=401)
        engine: Engine = app.state.engine
        body = {}
        if (await request.body()):
            body = await request.json()
        if engine.last_params is not None:
            base = engine.last_params
        else:
            base = CycleParams(as_of=engine.default_as_of())
        params = CycleParams(
            as_of=date.fromisoformat(body["as_of"]) if "as_of" in body else base.as_of,
            weighting=base.weighting,
            grouping=base.grouping,
            cf=base.cf,
            min_token_length=base.min_token_length,
            preserved_characters=base.preserved_characters,
            stemming_enabled=base.stemming_enabled,
        )
        summary, _ = run_cycle_and_mint(engine, config.data_dir, config, params)
        return summary

    ui_dir = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
