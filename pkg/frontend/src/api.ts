/** Typed client for the verification service's JSON endpoints.
 *
 * Status codes the UI must react to (401, 404, 409, 400) come back as
 * discriminated results instead of exceptions; only transport-level
 * failures throw, and they are normalized to GatewayUnreachable so the
 * caller can show one offline banner.
 *
 * This module never assembles an answer link: the link shown to the owner
 * is the `link` field of the creation response, verbatim.
 */

export interface CreatedChallenge {
  challengeId: number
  link: string
  ownerToken: string
}

export interface AnswerPageData {
  code: number
  questions: string[]
  language: string
}

export interface AnswerSummary {
  id: number
  decision: 'pending' | 'accepted' | 'rejected'
  mediaType: string
  sizeBytes: number
  submittedAt: string
  audioUrl: string
}

export type CreateResult =
  | { kind: 'created'; challenge: CreatedChallenge }
  | { kind: 'invalid'; detail: string }

export type AnswerPageResult =
  | { kind: 'ok'; page: AnswerPageData }
  | { kind: 'not-found' }
  | { kind: 'invalid'; detail: string }

export type UploadResult =
  | { kind: 'uploaded'; answerId: number }
  | { kind: 'rejected'; detail: string }

export type InboxResult =
  | { kind: 'ok'; answers: AnswerSummary[] }
  | { kind: 'unauthorized' }
  | { kind: 'not-found' }

export type DecisionResult =
  | { kind: 'decided'; decision: string }
  | { kind: 'conflict' }
  | { kind: 'unauthorized' }
  | { kind: 'not-found' }

export class GatewayUnreachable extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class Gateway {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async call(path: string, init?: RequestInit): Promise<Response> {
    try {
      return await this.fetchFn(this.baseUrl + path, init)
    } catch (err) {
      throw new GatewayUnreachable(String(err))
    }
  }

  async createChallenge(
    email: string,
    questions: string[],
    language: string,
  ): Promise<CreateResult> {
    const form = new FormData()
    form.set('user_email', email)
    form.set('user_questions', questions.join('\n'))
    form.set('language', language)
    const resp = await this.call('/challenges', { method: 'POST', body: form })
    if (resp.status === 400) {
      return { kind: 'invalid', detail: (await resp.json()).detail }
    }
    const body = await resp.json()
    return {
      kind: 'created',
      challenge: {
        challengeId: body.challenge_id,
        link: body.link,
        ownerToken: body.owner_token,
      },
    }
  }

  async suggestions(language: string): Promise<string[]> {
    const resp = await this.call(`/suggestions?lang=${language}`)
    return (await resp.json()).questions
  }

  async answerPage(language: string, code: string): Promise<AnswerPageResult> {
    const resp = await this.call(
      `/${language}/answer?code=${encodeURIComponent(code)}`,
      { headers: { accept: 'application/json' } },
    )
    if (resp.status === 404) return { kind: 'not-found' }
    if (resp.status === 400) {
      return { kind: 'invalid', detail: (await resp.json()).detail }
    }
    const body = await resp.json()
    return {
      kind: 'ok',
      page: { code: body.code, questions: body.questions, language: body.language },
    }
  }

  async uploadAnswer(code: number, clip: Blob): Promise<UploadResult> {
    const form = new FormData()
    form.set('code', String(code))
    const name = clip.type.includes('ogg') ? 'answer.ogg' : 'answer.webm'
    form.set('audio', new File([clip], name, { type: clip.type || 'audio/webm' }))
    const resp = await this.call('/answers', { method: 'POST', body: form })
    if (!resp.ok) {
      return { kind: 'rejected', detail: (await resp.json()).detail }
    }
    return { kind: 'uploaded', answerId: (await resp.json()).answer_id }
  }

  async listAnswers(challengeId: number, token: string): Promise<InboxResult> {
    const resp = await this.call(`/challenges/${challengeId}/answers`, {
      headers: { 'X-Owner-Token': token },
    })
    if (resp.status === 401) return { kind: 'unauthorized' }
    if (resp.status === 404) return { kind: 'not-found' }
    const body = await resp.json()
    return {
      kind: 'ok',
      answers: body.answers.map((a: Record<string, unknown>) => ({
        id: a.answer_id,
        decision: a.decision,
        mediaType: a.media_type,
        sizeBytes: a.size_bytes,
        submittedAt: a.submitted_at,
        audioUrl: a.audio_url,
      })),
    }
  }

  async decide(
    answerId: number,
    token: string,
    verdict: 'accepted' | 'rejected',
  ): Promise<DecisionResult> {
    const resp = await this.call(`/answers/${answerId}/decision`, {
      method: 'POST',
      headers: { 'content-type': 'application/json', 'X-Owner-Token': token },
      body: JSON.stringify({ verdict }),
    })
    if (resp.status === 409) return { kind: 'conflict' }
    if (resp.status === 401) return { kind: 'unauthorized' }
    if (resp.status === 404) return { kind: 'not-found' }
    return { kind: 'decided', decision: (await resp.json()).decision }
  }
}
