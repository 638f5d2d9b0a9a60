"""Durable storage for challenges, answers and audio blobs.

Records live in a single SQLite file (ids via AUTOINCREMENT, so they are
strictly increasing and never reused, across restarts). Audio bytes live as
one file per answer in a blob directory, written with a temp-then-rename
discipline: the record row is committed only after the blob is durable, and
startup recovery deletes temp files and any blob without a committed record.

On-disk layout under the data directory:

    records.sqlite3        record database (schema version in PRAGMA user_version)
    blobs/<audio_name><ext>    one file per answer, extension from media_type
    blobs/*.part               in-flight temp files, removed at startup
"""

from __future__ import annotations

import mimetypes
import os
import sqlite3
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path

from .core import (
    ANSWER_NAME_RE,
    AnswerRecord,
    AudioBlob,
    ChallengeRecord,
    Decision,
    Language,
    serialize_questions,
    split_questions,
)

DEFAULT_BLOB_CAP = 10 * 1024 * 1024  # ~ several minutes of compressed speech

SCHEMA_VERSION = 1

_SCHEMA = """
CREATE TABLE IF NOT EXISTS challenges (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    owner_email TEXT NOT NULL,
    questions TEXT NOT NULL,
    language TEXT NOT NULL,
    created_at TEXT NOT NULL,
    owner_token_hash TEXT
);
CREATE TABLE IF NOT EXISTS answers (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    challenge_id INTEGER NOT NULL,
    audio_name TEXT NOT NULL UNIQUE,
    media_type TEXT NOT NULL,
    size_bytes INTEGER NOT NULL,
    submitted_at TEXT NOT NULL,
    decision TEXT NOT NULL DEFAULT 'pending',
    decided_at TEXT
);
"""

_AUDIO_EXTENSIONS = {
    "audio/webm": ".webm",
    "audio/ogg": ".ogg",
    "audio/mpeg": ".mp3",
    "audio/mp4": ".m4a",
    "audio/wav": ".wav",
    "audio/x-wav": ".wav",
    "audio/flac": ".flac",
}


class StoreError(Exception):
    pass


class StorageFailure(StoreError):
    pass


class NotFound(StoreError):
    pass


class ChallengeNotFound(NotFound):
    pass


class BlobTooLarge(StoreError):
    pass


class InvalidTransition(StoreError):
    pass


@dataclass(frozen=True)
class StoreLayout:
    data_dir: Path
    records_file: Path
    blobs_dir: Path

    @classmethod
    def at(cls, data_dir: Path | str) -> "StoreLayout":
        data_dir = Path(data_dir)
        return cls(
            data_dir=data_dir,
            records_file=data_dir / "records.sqlite3",
            blobs_dir=data_dir / "blobs",
        )


def extension_for(media_type: str) -> str:
    base = media_type.split(";", 1)[0].strip().lower()
    if base in _AUDIO_EXTENSIONS:
        return _AUDIO_EXTENSIONS[base]
    return mimetypes.guess_extension(base) or ".bin"


def _fsync_dir(path: Path) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


class Store:
    """Single-node store. Writes are serialized by an internal lock, so a
    single instance is safe to share across request handler threads.

    ``fault_hook``, when set, is called with a stage label at the commit
    points inside put_answer; crash-recovery tests use it to abort mid-write.
    """

    def __init__(self, data_dir: Path | str, blob_cap: int = DEFAULT_BLOB_CAP):
        self.layout = StoreLayout.at(data_dir)
        self.blob_cap = blob_cap
        self.fault_hook = None
        self._lock = threading.RLock()
        self.layout.data_dir.mkdir(parents=True, exist_ok=True)
        self.layout.blobs_dir.mkdir(parents=True, exist_ok=True)
        try:
            self._db = sqlite3.connect(
                str(self.layout.records_file), check_same_thread=False
            )
            self._db.executescript(_SCHEMA)
            self._db.execute(f"PRAGMA user_version = {SCHEMA_VERSION}")
            self._db.commit()
        except sqlite3.Error as exc:
            raise StorageFailure(f"cannot open record database: {exc}") from exc
        self._recover()

    def close(self) -> None:
        self._db.close()

    # -- crash recovery -----------------------------------------------------

    def _recover(self) -> None:
        """Delete in-flight temp files and blobs without a committed record."""
        with self._lock:
            rows = self._db.execute(
                "SELECT audio_name, media_type FROM answers"
            ).fetchall()
            committed = {name + extension_for(mt) for name, mt in rows}
            for path in self.layout.blobs_dir.iterdir():
                if path.name not in committed:
                    path.unlink(missing_ok=True)

    # -- challenges ---------------------------------------------------------

    def put_challenge(
        self, record: ChallengeRecord, owner_token_hash: str | None = None
    ) -> ChallengeRecord:
        """Persist a new challenge, assigning the next id (starting at 1)."""
        if record.id is not None:
            raise ValueError("record already has an id")
        with self._lock:
            try:
                cur = self._db.execute(
                    "INSERT INTO challenges"
                    " (owner_email, questions, language, created_at, owner_token_hash)"
                    " VALUES (?, ?, ?, ?, ?)",
                    (
                        record.owner_email,
                        serialize_questions(record.question_lines),
                        record.language.value,
                        record.created_at.isoformat(),
                        owner_token_hash,
                    ),
                )
                self._db.commit()
            except sqlite3.Error as exc:
                self._db.rollback()
                raise StorageFailure(f"challenge insert failed: {exc}") from exc
        return replace(record, id=cur.lastrowid)

    def get_challenge(self, challenge_id: int) -> ChallengeRecord:
        with self._lock:
            row = self._db.execute(
                "SELECT id, owner_email, questions, language, created_at"
                " FROM challenges WHERE id = ?",
                (challenge_id,),
            ).fetchone()
        if row is None:
            raise NotFound(f"no challenge with id {challenge_id}")
        return ChallengeRecord(
            id=row[0],
            owner_email=row[1],
            question_lines=split_questions(row[2]),
            language=Language(row[3]),
            created_at=datetime.fromisoformat(row[4]),
        )

    def list_challenge_ids(self) -> list[int]:
        with self._lock:
            rows = self._db.execute(
                "SELECT id FROM challenges ORDER BY id ASC"
            ).fetchall()
        return [row[0] for row in rows]

    def get_owner_token_hash(self, challenge_id: int) -> str | None:
        with self._lock:
            row = self._db.execute(
                "SELECT owner_token_hash FROM challenges WHERE id = ?",
                (challenge_id,),
            ).fetchone()
        if row is None:
            raise NotFound(f"no challenge with id {challenge_id}")
        return row[0]

    # -- answers ------------------------------------------------------------

    def put_answer(self, record: AnswerRecord, blob: AudioBlob) -> AnswerRecord:
        """Store blob then record. The blob is durable (temp + rename +
        fsync) before the record row commits, so a committed record always
        has its audio."""
        if record.id is not None:
            raise ValueError("record already has an id")
        if not ANSWER_NAME_RE.match(record.audio_name):
            raise ValueError(f"bad audio name: {record.audio_name!r}")
        if record.media_type != blob.media_type:
            raise ValueError("record and blob media types differ")
        if len(blob.data) == 0:
            raise ValueError("blob is empty")
        if len(blob.data) != record.size_bytes:
            raise ValueError("record.size_bytes does not match blob length")
        if len(blob.data) > self.blob_cap:
            raise BlobTooLarge(
                f"blob of {len(blob.data)} bytes exceeds cap {self.blob_cap}"
            )
        with self._lock:
            if not self._challenge_exists(record.challenge_id):
                raise ChallengeNotFound(
                    f"no challenge with id {record.challenge_id}"
                )
            ext = extension_for(record.media_type)
            final = self.layout.blobs_dir / f"{record.audio_name}{ext}"
            tmp = final.with_name(final.name + ".part")
            try:
                with open(tmp, "wb") as fh:
                    fh.write(blob.data)
                    fh.flush()
                    os.fsync(fh.fileno())
                if self.fault_hook is not None:
                    self.fault_hook("blob_written")
                os.replace(tmp, final)
                _fsync_dir(self.layout.blobs_dir)
            except OSError as exc:
                tmp.unlink(missing_ok=True)
                raise StorageFailure(f"blob write failed: {exc}") from exc
            if self.fault_hook is not None:
                self.fault_hook("blob_renamed")
            try:
                cur = self._db.execute(
                    "INSERT INTO answers"
                    " (challenge_id, audio_name, media_type, size_bytes,"
                    "  submitted_at, decision, decided_at)"
                    " VALUES (?, ?, ?, ?, ?, ?, ?)",
                    (
                        record.challenge_id,
                        record.audio_name,
                        record.media_type,
                        record.size_bytes,
                        record.submitted_at.isoformat(),
                        record.decision.value,
                        record.decided_at.isoformat() if record.decided_at else None,
                    ),
                )
                self._db.commit()
            except sqlite3.Error as exc:
                self._db.rollback()
                final.unlink(missing_ok=True)
                raise StorageFailure(f"answer insert failed: {exc}") from exc
        return replace(record, id=cur.lastrowid)

    def get_answer(self, answer_id: int) -> AnswerRecord:
        with self._lock:
            row = self._db.execute(
                f"SELECT {_ANSWER_COLS} FROM answers WHERE id = ?", (answer_id,)
            ).fetchone()
        if row is None:
            raise NotFound(f"no answer with id {answer_id}")
        return _answer_from_row(row)

    def get_answer_by_name(self, audio_name: str) -> AnswerRecord:
        with self._lock:
            row = self._db.execute(
                f"SELECT {_ANSWER_COLS} FROM answers WHERE audio_name = ?",
                (audio_name,),
            ).fetchone()
        if row is None:
            raise NotFound(f"no answer named {audio_name!r}")
        return _answer_from_row(row)

    def get_blob(self, audio_name: str) -> AudioBlob:
        """Read back an answer's audio, byte-identical to what was stored."""
        if not ANSWER_NAME_RE.match(audio_name):
            raise NotFound(f"no blob named {audio_name!r}")
        record = self.get_answer_by_name(audio_name)
        path = self.layout.blobs_dir / (
            audio_name + extension_for(record.media_type)
        )
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StorageFailure(f"blob file unreadable: {exc}") from exc
        return AudioBlob(data=data, media_type=record.media_type)

    def list_answers(self, challenge_id: int) -> list[AnswerRecord]:
        """All answers for a challenge, oldest first (ties broken by id)."""
        with self._lock:
            if not self._challenge_exists(challenge_id):
                raise ChallengeNotFound(f"no challenge with id {challenge_id}")
            rows = self._db.execute(
                f"SELECT {_ANSWER_COLS} FROM answers WHERE challenge_id = ?"
                " ORDER BY submitted_at ASC, id ASC",
                (challenge_id,),
            ).fetchall()
        return [_answer_from_row(row) for row in rows]

    def update_answer_decision(self, record: AnswerRecord) -> None:
        """Persist a decision already applied via core.decide_answer."""
        if record.id is None:
            raise ValueError("record has no id")
        with self._lock:
            row = self._db.execute(
                "SELECT decision FROM answers WHERE id = ?", (record.id,)
            ).fetchone()
            if row is None:
                raise NotFound(f"no answer with id {record.id}")
            stored = Decision(row[0])
            if stored is not Decision.PENDING or record.decision not in (
                Decision.ACCEPTED,
                Decision.REJECTED,
            ):
                raise InvalidTransition(
                    f"cannot move answer {record.id} from {stored.value}"
                    f" to {record.decision.value}"
                )
            try:
                self._db.execute(
                    "UPDATE answers SET decision = ?, decided_at = ? WHERE id = ?",
                    (
                        record.decision.value,
                        record.decided_at.isoformat() if record.decided_at else None,
                        record.id,
                    ),
                )
                self._db.commit()
            except sqlite3.Error as exc:
                self._db.rollback()
                raise StorageFailure(f"decision update failed: {exc}") from exc

    def _challenge_exists(self, challenge_id: int) -> bool:
        row = self._db.execute(
            "SELECT 1 FROM challenges WHERE id = ?", (challenge_id,)
        ).fetchone()
        return row is not None


_ANSWER_COLS = (
    "id, challenge_id, audio_name, media_type, size_bytes,"
    " submitted_at, decision, decided_at"
)


def _answer_from_row(row) -> AnswerRecord:
    return AnswerRecord(
        id=row[0],
        challenge_id=row[1],
        audio_name=row[2],
        media_type=row[3],
        size_bytes=row[4],
        submitted_at=datetime.fromisoformat(row[5]),
        decision=Decision(row[6]),
        decided_at=datetime.fromisoformat(row[7]) if row[7] else None,
    )
