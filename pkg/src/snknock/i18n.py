"""Translated strings for owner-facing notification text.

Question content is always shown verbatim; only the surrounding wording is
localized. The browser UI keeps its own label table and pulls the suggested
questions from the gateway, so question lists cannot drift.
"""

from __future__ import annotations

from .core import Language

NOTIFICATION_BODY = {
    Language.EN: (
        "A new voice answer was recorded for your challenge.\n"
        "\n"
        "Questions asked:\n"
        "{questions}\n"
        "\n"
        "Listen to the answer:\n"
        "{audio_url}\n"
        "\n"
        "After listening, accept or reject the friend request.\n"
    ),
    Language.AR: (
        "تم تسجيل إجابة صوتية جديدة على أسئلتك.\n"
        "\n"
        "الأسئلة المطروحة:\n"
        "{questions}\n"
        "\n"
        "استمع إلى الإجابة:\n"
        "{audio_url}\n"
        "\n"
        "بعد الاستماع، اقبل طلب الصداقة أو ارفضه.\n"
    ),
}


def notification_body(language: Language, questions: list[str], audio_url: str) -> str:
    template = NOTIFICATION_BODY[Language(language)]
    block = "\n".join(f"  - {line}" for line in questions)
    return template.format(questions=block, audio_url=audio_url)
