"""Domain logic for voice challenges.

A challenge is an owner's email address plus an ordered list of questions.
Sharing its generated link lets a friend requester record a spoken answer,
which the owner reviews before accepting or rejecting the request. Everything
here is pure; persistence lives in the store module.
"""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from random import Random

ANSWER_NAME_RE = re.compile(r"^answerfile_[0-9a-f]{32}$")

MAX_QUESTION_LINES = 20
MAX_LINE_CHARS = 500

_LINE_BREAK_RE = re.compile(r"\r\n|\r|\n")


class Language(str, enum.Enum):
    EN = "en"
    AR = "ar"


class Decision(str, enum.Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class ChallengeError(Exception):
    """Base class for challenge domain errors."""


class InvalidEmail(ChallengeError):
    pass


class EmptyQuestions(ChallengeError):
    pass


class QuestionLimitExceeded(ChallengeError):
    pass


class UnsupportedLanguage(ChallengeError):
    pass


class AlreadyDecided(ChallengeError):
    pass


@dataclass
class ChallengeRecord:
    """One owner's challenge. ``id`` is None until the store assigns it."""

    owner_email: str
    question_lines: list[str]
    language: Language
    created_at: datetime
    id: int | None = None


@dataclass
class AnswerRecord:
    """One recorded answer to a challenge, plus its review decision."""

    challenge_id: int
    audio_name: str
    media_type: str
    size_bytes: int
    submitted_at: datetime
    decision: Decision = Decision.PENDING
    decided_at: datetime | None = None
    id: int | None = None


@dataclass
class AudioBlob:
    data: bytes
    media_type: str


SUGGESTED_QUESTIONS_EN = [
    "Talk to me about yourself?",
    "Talk to me about myself?",
    "Talk to me about our relationship?",
    "Talk to me about our friendship?",
    "What is your name?",
    "What is your SN Account Name?",
    "What is your country & city?",
    "What is your job?",
    "How old are you?",
    "What is my job?",
    "How many children I have?",
]

SUGGESTED_QUESTIONS_AR = [
    "تحدث معي عن نفسك؟",
    "تحدث معي عني؟",
    "تحدث معي عن علاقتنا؟",
    "تحدث معي عن صداقتنا؟",
    "ما اسمك؟",
    "ما اسم حسابك في الشبكة الاجتماعية؟",
    "ما بلدك ومدينتك؟",
    "ما وظيفتك؟",
    "كم عمرك؟",
    "ما وظيفتي؟",
    "كم عدد أطفالي؟",
]


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


def is_valid_email(address: str) -> bool:
    """Syntactic check only: exactly one "@", non-empty local and domain
    parts, no whitespace. Deliverability is not our problem."""
    if not address or address.count("@") != 1:
        return False
    if any(c.isspace() for c in address):
        return False
    local, domain = address.split("@")
    return bool(local) and bool(domain)


def new_challenge(
    owner_email: str,
    question_lines: list[str],
    language: Language = Language.EN,
) -> ChallengeRecord:
    """Build an unpersisted challenge, validating email and questions.

    Lines are kept in input order, untouched. Raises InvalidEmail,
    EmptyQuestions, or QuestionLimitExceeded.
    """
    if not is_valid_email(owner_email):
        raise InvalidEmail(f"not a valid email address: {owner_email!r}")
    language = Language(language)
    if not question_lines or any(not line.strip() for line in question_lines):
        raise EmptyQuestions("need at least one non-blank question line")
    if len(question_lines) > MAX_QUESTION_LINES:
        raise QuestionLimitExceeded(
            f"at most {MAX_QUESTION_LINES} questions per challenge"
        )
    if any(len(line) > MAX_LINE_CHARS for line in question_lines):
        raise QuestionLimitExceeded(
            f"question lines are limited to {MAX_LINE_CHARS} characters"
        )
    return ChallengeRecord(
        owner_email=owner_email,
        question_lines=list(question_lines),
        language=language,
        created_at=now_utc(),
    )


def serialize_questions(lines: list[str]) -> str:
    """Join question lines into the single stored text column (LF, no
    trailing separator)."""
    return "\n".join(lines)


def split_questions(stored: str) -> list[str]:
    """Split stored question text back into lines.

    Accepts any mix of CRLF, LF and CR. Interior empty lines survive; one
    trailing empty segment from a final line break is dropped. Empty input
    gives an empty list.
    """
    if stored == "":
        return []
    lines = _LINE_BREAK_RE.split(stored)
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def build_answer_url(base_url: str, language: Language, code: int) -> str:
    """Format the shareable answer-page link for a stored challenge."""
    if base_url.endswith("/"):
        raise ValueError("base_url must not end with a slash")
    if code < 1:
        raise ValueError("code must be >= 1")
    return f"{base_url}/{Language(language).value}/answer?code={code}"


def suggested_questions(language: Language) -> list[str]:
    """The 11 ready-made questions offered in the challenge builder."""
    try:
        language = Language(language)
    except ValueError:
        raise UnsupportedLanguage(str(language)) from None
    if language is Language.EN:
        return list(SUGGESTED_QUESTIONS_EN)
    return list(SUGGESTED_QUESTIONS_AR)


def new_answer_name(rng: Random) -> str:
    """Fresh storage name for a recorded answer: the answerfile_ prefix
    plus 128 random bits as lowercase hex."""
    return "answerfile_%032x" % rng.getrandbits(128)


def hash_token(token: str) -> str:
    """Digest an owner token for storage; the plain token is never kept."""
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def decide_answer(
    record: AnswerRecord, verdict: Decision, at: datetime
) -> AnswerRecord:
    """Apply the owner's one-shot verdict to a pending answer.

    Transitions are pending -> accepted and pending -> rejected only;
    anything else raises AlreadyDecided (or ValueError for a non-verdict).
    """
    verdict = Decision(verdict)
    if verdict not in (Decision.ACCEPTED, Decision.REJECTED):
        raise ValueError(f"verdict must be accepted or rejected, got {verdict}")
    if record.decision is not Decision.PENDING:
        raise AlreadyDecided(
            f"answer {record.id} is already {record.decision.value}"
        )
    return replace(record, decision=verdict, decided_at=at)
