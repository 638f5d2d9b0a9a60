"""Owner notification: compose the email carrying the answer's audio link
and hand it to a transport.

Two transports ship: a real SMTP relay client, and a file outbox that
appends one .eml file per message so tests and offline setups need no mail
server. A delivery failure never loses the answer; callers surface it as
"stored but not notified" and may retry later.
"""

from __future__ import annotations

import email.utils
import os
import smtplib
import threading
from dataclasses import dataclass
from datetime import datetime
from email.message import EmailMessage as MimeMessage
from pathlib import Path
from typing import Protocol

from .core import AnswerRecord, ChallengeRecord, now_utc
from .i18n import notification_body

SUBJECT_TEMPLATE = "SNKnock: new voice answer for challenge {id}"


class NotifyError(Exception):
    pass


class MismatchedAnswer(NotifyError):
    pass


class TransportFailure(NotifyError):
    pass


@dataclass
class EmailMessage:
    to: str
    subject: str
    body_text: str
    created_at: datetime


@dataclass(frozen=True)
class OutboxEntry:
    sequence: int
    message: EmailMessage
    delivered: bool


@dataclass(frozen=True)
class DeliveryReceipt:
    transport: str
    reference: str


class Transport(Protocol):
    name: str

    def deliver(self, message: EmailMessage) -> str:
        """Hand off one message; returns a reference (sequence or relay id).
        Raises TransportFailure."""
        ...


def compose_notification(
    challenge: ChallengeRecord, answer: AnswerRecord, base_url: str
) -> EmailMessage:
    """Build the owner's notification for one stored answer.

    The body is localized to the challenge's language and contains the
    question lines plus exactly one audio URL. Raises MismatchedAnswer if
    the answer belongs to a different challenge.
    """
    if answer.challenge_id != challenge.id:
        raise MismatchedAnswer(
            f"answer {answer.id} belongs to challenge {answer.challenge_id},"
            f" not {challenge.id}"
        )
    audio_url = f"{base_url}/audio/{answer.audio_name}"
    return EmailMessage(
        to=challenge.owner_email,
        subject=SUBJECT_TEMPLATE.format(id=challenge.id),
        body_text=notification_body(
            challenge.language, challenge.question_lines, audio_url
        ),
        created_at=now_utc(),
    )


def send(message: EmailMessage, transport: Transport) -> DeliveryReceipt:
    """Deliver through the given transport. TransportFailure propagates;
    the message is never silently dropped."""
    reference = transport.deliver(message)
    return DeliveryReceipt(transport=transport.name, reference=reference)


class FileOutboxTransport:
    """Appends messages to a directory, one ``{sequence:08}.eml`` file each:
    To/Subject/Date headers, a blank line, then the UTF-8 body."""

    name = "outbox"

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._next = 1 + max(
            (int(p.stem) for p in self.directory.glob("*.eml") if p.stem.isdigit()),
            default=0,
        )

    def deliver(self, message: EmailMessage) -> str:
        with self._lock:
            sequence = self._next
            path = self.directory / f"{sequence:08}.eml"
            tmp = path.with_suffix(".eml.part")
            text = (
                f"To: {message.to}\n"
                f"Subject: {message.subject}\n"
                f"Date: {email.utils.format_datetime(message.created_at)}\n"
                f"\n"
                f"{message.body_text}"
            )
            try:
                with open(tmp, "w", encoding="utf-8") as fh:
                    fh.write(text)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, path)
            except OSError as exc:
                tmp.unlink(missing_ok=True)
                raise TransportFailure(f"outbox write failed: {exc}") from exc
            self._next = sequence + 1
        return str(sequence)

    def entries(self) -> list[OutboxEntry]:
        """All stored messages in sequence order."""
        out = []
        for path in sorted(self.directory.glob("*.eml")):
            if not path.stem.isdigit():
                continue
            out.append(
                OutboxEntry(
                    sequence=int(path.stem),
                    message=_parse_eml(path.read_text(encoding="utf-8")),
                    delivered=True,
                )
            )
        return out


def _parse_eml(text: str) -> EmailMessage:
    head, _, body = text.partition("\n\n")
    headers = {}
    for line in head.splitlines():
        name, _, value = line.partition(":")
        headers[name.strip().lower()] = value.strip()
    return EmailMessage(
        to=headers.get("to", ""),
        subject=headers.get("subject", ""),
        body_text=body,
        created_at=email.utils.parsedate_to_datetime(headers["date"]),
    )


class SmtpTransport:
    """Delivers through an SMTP relay. ``smtp_factory`` exists so tests can
    substitute a fake client."""

    name = "smtp"

    def __init__(
        self,
        host: str,
        port: int = 25,
        sender: str = "snknock@localhost",
        username: str | None = None,
        password: str | None = None,
        use_tls: bool = False,
        smtp_factory=smtplib.SMTP,
    ):
        self.host = host
        self.port = port
        self.sender = sender
        self.username = username
        self.password = password
        self.use_tls = use_tls
        self._factory = smtp_factory

    def deliver(self, message: EmailMessage) -> str:
        mime = MimeMessage()
        mime["From"] = self.sender
        mime["To"] = message.to
        mime["Subject"] = message.subject
        mime["Date"] = email.utils.format_datetime(message.created_at)
        message_id = email.utils.make_msgid()
        mime["Message-ID"] = message_id
        mime.set_content(message.body_text)
        try:
            with self._factory(self.host, self.port, timeout=30) as client:
                if self.use_tls:
                    client.starttls()
                if self.username:
                    client.login(self.username, self.password or "")
                client.send_message(mime)
        except (OSError, smtplib.SMTPException) as exc:
            raise TransportFailure(f"relay {self.host}:{self.port}: {exc}") from exc
        return message_id
