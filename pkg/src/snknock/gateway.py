"""HTTP surface for the whole challenge flow.

Create a challenge, serve the answer page data, take the audio upload,
stream audio back to the owner, and record decisions. JSON responses are
the contract; the two pages a human hits directly (challenge creation and
the answer page) also render a minimal HTML fallback for browser clients.

Requester-facing responses never include the owner's email address. Review
and decision endpoints require the per-challenge owner token (returned once
at creation) in the X-Owner-Token header.
"""

from __future__ import annotations

import hmac
import html
import secrets
import threading
import time
from random import SystemRandom

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import HTMLResponse, JSONResponse, Response

from . import core, notify, store as store_mod
from .config import ServiceConfig
from .core import AnswerRecord, AudioBlob, Language, hash_token
from .store import Store

OWNER_TOKEN_HEADER = "X-Owner-Token"

PROFILE_MESSAGE = (
    "Please, to be my friend, send the friend request then click on this"
    " link and answer my question using your voice, I do that because I"
    " would like to avoid fake accounts and profile cloning attacks"
)


class RateLimiter:
    """In-memory token bucket per source address."""

    def __init__(self, per_hour: int):
        self.per_hour = per_hour
        self._buckets: dict[str, tuple[float, float]] = {}
        self._lock = threading.Lock()

    def allow(self, key: str) -> bool:
        if self.per_hour <= 0:
            return True
        now = time.monotonic()
        rate = self.per_hour / 3600.0
        with self._lock:
            tokens, last = self._buckets.get(key, (float(self.per_hour), now))
            tokens = min(float(self.per_hour), tokens + (now - last) * rate)
            allowed = tokens >= 1.0
            if allowed:
                tokens -= 1.0
            self._buckets[key] = (tokens, now)
        return allowed


def _wants_html(request: Request) -> bool:
    accept = request.headers.get("accept", "")
    return "text/html" in accept and "application/json" not in accept


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(
    config: ServiceConfig,
    store: Store | None = None,
    transport: notify.Transport | None = None,
) -> FastAPI:
    config.validate()
    if store is None:
        store = Store(config.data_dir, blob_cap=config.max_upload_bytes)
    if transport is None:
        from .config import transport_from_config

        transport = transport_from_config(config)

    app = FastAPI(title="SNKnock", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store
    app.state.transport = transport
    app.state.limiter = RateLimiter(config.upload_rate_per_hour)
    app.state.name_rng = SystemRandom()

    def check_owner_token(request: Request, challenge_id: int) -> Response | None:
        """None when authorized, else the 401 response."""
        if not config.owner_token_required:
            return None
        stored = store.get_owner_token_hash(challenge_id)
        presented = request.headers.get(OWNER_TOKEN_HEADER)
        if not presented or stored is None:
            return _error(401, "owner token required")
        if not hmac.compare_digest(hash_token(presented), stored):
            return _error(401, "owner token does not match")
        return None

    @app.post("/challenges")
    def create_challenge(
        request: Request,
        user_email: str | None = Form(None),
        user_questions: str | None = Form(None),
        language: str | None = Form(None),
    ):
        if user_email is None:
            return _error(400, "user_email is required")
        if user_questions is None:
            return _error(400, "user_questions is required")
        try:
            lang = Language(language) if language else config.language_default
        except ValueError:
            return _error(400, f"unsupported language: {language!r}")
        try:
            record = core.new_challenge(
                user_email, core.split_questions(user_questions), lang
            )
        except core.ChallengeError as exc:
            return _error(400, str(exc))
        owner_token = secrets.token_hex(16)
        try:
            record = store.put_challenge(
                record, owner_token_hash=hash_token(owner_token)
            )
        except store_mod.StorageFailure as exc:
            return _error(500, str(exc))
        link = core.build_answer_url(config.public_base_url, lang, record.id)
        if _wants_html(request):
            return HTMLResponse(_challenge_created_page(link, owner_token))
        return {
            "challenge_id": record.id,
            "link": link,
            "owner_token": owner_token,
        }

    @app.get("/suggestions")
    def suggestions(lang: str = "en"):
        try:
            questions = core.suggested_questions(lang)
        except core.UnsupportedLanguage:
            return _error(400, f"unsupported language: {lang!r}")
        return {"language": lang, "questions": questions}

    @app.get("/{lang}/answer")
    def answer_page(request: Request, lang: str, code: str | None = None):
        if lang not in (Language.EN.value, Language.AR.value):
            return _error(404, f"unknown language segment: {lang!r}")
        try:
            code_number = int(code) if code is not None else None
        except ValueError:
            code_number = None
        if code_number is None:
            return _error(400, f"malformed code: {code!r}")
        try:
            challenge = store.get_challenge(code_number)
        except store_mod.NotFound:
            return _error(404, "no challenge with that code")
        payload = {
            "code": challenge.id,
            "questions": challenge.question_lines,
            "upload_endpoint": "/answers",
            "language": lang,
        }
        if _wants_html(request):
            return HTMLResponse(_answer_page_html(challenge.question_lines, lang))
        return payload

    @app.post("/answers")
    def upload_answer(
        request: Request,
        code: str | None = Form(None),
        audio: UploadFile | None = File(None),
    ):
        client = request.client.host if request.client else "unknown"
        if not app.state.limiter.allow(client):
            return _error(429, "upload rate limit exceeded")
        try:
            code_number = int(code) if code is not None else None
        except ValueError:
            code_number = None
        if code_number is None:
            return _error(400, f"malformed code: {code!r}")
        try:
            challenge = store.get_challenge(code_number)
        except store_mod.NotFound:
            return _error(404, "no challenge with that code")
        if audio is None:
            return _error(400, "audio part is missing")
        media_type = audio.content_type or ""
        if not media_type.startswith("audio/"):
            return _error(415, f"not an audio media type: {media_type!r}")
        data = audio.file.read(config.max_upload_bytes + 1)
        if len(data) == 0:
            return _error(400, "audio part is empty")
        if len(data) > config.max_upload_bytes:
            return _error(413, "audio exceeds the upload size limit")
        record = AnswerRecord(
            challenge_id=challenge.id,
            audio_name=core.new_answer_name(app.state.name_rng),
            media_type=media_type,
            size_bytes=len(data),
            submitted_at=core.now_utc(),
        )
        try:
            record = store.put_answer(record, AudioBlob(data, media_type))
        except store_mod.BlobTooLarge:
            return _error(413, "audio exceeds the stored blob cap")
        except store_mod.ChallengeNotFound:
            return _error(404, "no challenge with that code")
        except store_mod.StorageFailure as exc:
            return _error(500, str(exc))
        notified = True
        try:
            message = notify.compose_notification(
                challenge, record, config.public_base_url
            )
            notify.send(message, transport)
        except notify.NotifyError:
            # The requester did nothing wrong; keep the answer, flag the miss.
            notified = False
        return {"answer_id": record.id, "notified": notified}

    @app.get("/audio/{audio_name}")
    def fetch_audio(audio_name: str):
        if not core.ANSWER_NAME_RE.match(audio_name):
            return _error(400, "not an answer audio name")
        try:
            blob = store.get_blob(audio_name)
        except store_mod.NotFound:
            return _error(404, "no such audio")
        return Response(content=blob.data, media_type=blob.media_type)

    @app.get("/challenges/{challenge_id}/answers")
    def list_challenge_answers(request: Request, challenge_id: int):
        try:
            records = store.list_answers(challenge_id)
        except store_mod.ChallengeNotFound:
            return _error(404, "no such challenge")
        denied = check_owner_token(request, challenge_id)
        if denied is not None:
            return denied
        return {
            "challenge_id": challenge_id,
            "answers": [_answer_summary(r, config.public_base_url) for r in records],
        }

    @app.post("/answers/{answer_id}/decision")
    async def decide(request: Request, answer_id: int):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "body must be JSON")
        verdict = body.get("verdict") if isinstance(body, dict) else None
        if verdict not in (core.Decision.ACCEPTED.value, core.Decision.REJECTED.value):
            return _error(400, f"verdict must be accepted or rejected, got {verdict!r}")
        try:
            record = store.get_answer(answer_id)
        except store_mod.NotFound:
            return _error(404, "no such answer")
        denied = check_owner_token(request, record.challenge_id)
        if denied is not None:
            return denied
        try:
            decided = core.decide_answer(
                record, core.Decision(verdict), core.now_utc()
            )
            store.update_answer_decision(decided)
        except (core.AlreadyDecided, store_mod.InvalidTransition):
            return _error(409, "answer is already decided")
        return _answer_summary(decided, config.public_base_url)

    @app.get("/challenges")
    def admin_listing():
        if not config.admin_listing_enabled:
            return _error(404, "listing disabled")
        rows = []
        for challenge_id in store.list_challenge_ids():
            challenge = store.get_challenge(challenge_id)
            rows.append(
                {
                    "challenge_id": challenge.id,
                    "language": challenge.language.value,
                    "created_at": challenge.created_at.isoformat(),
                    "n_questions": len(challenge.question_lines),
                }
            )
        return {"challenges": rows}

    return app


def _answer_summary(record: AnswerRecord, base_url: str) -> dict:
    return {
        "answer_id": record.id,
        "audio_name": record.audio_name,
        "audio_url": f"{base_url}/audio/{record.audio_name}",
        "media_type": record.media_type,
        "size_bytes": record.size_bytes,
        "submitted_at": record.submitted_at.isoformat(),
        "decision": record.decision.value,
        "decided_at": record.decided_at.isoformat() if record.decided_at else None,
    }


def _challenge_created_page(link: str, owner_token: str) -> str:
    return (
        "<html><body>"
        "<p>Generated link : "
        f'<a href="{html.escape(link, quote=True)}">{html.escape(link)}</a></p>'
        f"<p>Suggested profile message: {html.escape(PROFILE_MESSAGE)}</p>"
        f"<p>Owner token (shown once): <code>{html.escape(owner_token)}</code></p>"
        "</body></html>"
    )


def _answer_page_html(questions: list[str], lang: str) -> str:
    direction = "rtl" if lang == Language.AR.value else "ltr"
    lines = "".join(f"<p>{html.escape(q)}</p>" for q in questions)
    return (
        f'<html dir="{direction}"><body>'
        f"{lines}"
        '<p>Record your spoken answer and send it to <code>POST /answers</code>'
        " (multipart fields: code, audio).</p>"
        "</body></html>"
    )
