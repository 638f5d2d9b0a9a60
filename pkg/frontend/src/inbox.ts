/** Owner inbox: play each voice answer, accept or reject it once.
 *
 * A 401 opens the token prompt instead of erroring out; a 409 means the
 * answer was decided in another tab or session, so the entry is refreshed
 * to its decided form rather than retried.
 */

import { AnswerSummary, Gateway } from './api'

export interface InboxEntry {
  answer: AnswerSummary
  /** a decision post is in flight; further clicks ignored */
  deciding: boolean
  /** the last decision attempt hit a conflict and the row was refreshed */
  decidedElsewhere: boolean
}

export interface InboxState {
  challengeId: number
  token: string | null
  entries: InboxEntry[]
  tokenPromptVisible: boolean
}

export function initialInbox(challengeId: number, token: string | null): InboxState {
  return { challengeId, token, entries: [], tokenPromptVisible: token === null }
}

export async function refreshInbox(
  state: InboxState,
  gateway: Gateway,
): Promise<InboxState> {
  if (state.token === null) {
    return { ...state, tokenPromptVisible: true }
  }
  const result = await gateway.listAnswers(state.challengeId, state.token)
  if (result.kind === 'unauthorized') {
    return { ...state, tokenPromptVisible: true }
  }
  if (result.kind === 'not-found') {
    return { ...state, entries: [] }
  }
  const previous = new Map(state.entries.map(e => [e.answer.id, e]))
  return {
    ...state,
    tokenPromptVisible: false,
    entries: result.answers.map(answer => ({
      answer,
      deciding: false,
      decidedElsewhere: previous.get(answer.id)?.decidedElsewhere ?? false,
    })),
  }
}

export function provideToken(state: InboxState, token: string): InboxState {
  return { ...state, token, tokenPromptVisible: false }
}

export async function decideAnswer(
  state: InboxState,
  gateway: Gateway,
  answerId: number,
  verdict: 'accepted' | 'rejected',
): Promise<InboxState> {
  const entry = state.entries.find(e => e.answer.id === answerId)
  if (!entry || entry.deciding || entry.answer.decision !== 'pending') {
    return state
  }
  if (state.token === null) {
    return { ...state, tokenPromptVisible: true }
  }
  const pending = withEntry(state, answerId, e => ({ ...e, deciding: true }))
  const result = await gateway.decide(answerId, state.token, verdict)
  switch (result.kind) {
    case 'decided':
      return withEntry(pending, answerId, e => ({
        ...e,
        deciding: false,
        answer: { ...e.answer, decision: verdict },
      }))
    case 'conflict': {
      // someone already decided this one; pull the authoritative state
      const marked = withEntry(pending, answerId, e => ({
        ...e,
        deciding: false,
        decidedElsewhere: true,
      }))
      return refreshInbox(marked, gateway)
    }
    case 'unauthorized':
      return {
        ...withEntry(pending, answerId, e => ({ ...e, deciding: false })),
        tokenPromptVisible: true,
      }
    case 'not-found':
      return withEntry(pending, answerId, e => ({ ...e, deciding: false }))
  }
}

function withEntry(
  state: InboxState,
  answerId: number,
  change: (entry: InboxEntry) => InboxEntry,
): InboxState {
  return {
    ...state,
    entries: state.entries.map(e => (e.answer.id === answerId ? change(e) : e)),
  }
}
