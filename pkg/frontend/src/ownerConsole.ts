/** Owner-side view model: compose a challenge, show the returned link,
 * keep the owner token for the inbox. */

import { CreateResult, Gateway, GatewayUnreachable } from './api'
import { Locale } from './i18n'

export const PROFILE_MESSAGE =
  'To avoid fake accounts and profile cloning attacks, I only accept friend ' +
  'requests that pass my voice check. Open my verification link and answer ' +
  'in your own voice.'

export interface OwnerConsoleState {
  locale: Locale
  email: string
  /** raw textarea content; may hold several lines */
  typedQuestions: string
  /** suggestion strings in click order; the same entry may appear twice */
  selectedSuggestions: string[]
  suggestions: string[]
  link: string | null
  challengeId: number | null
  ownerToken: string | null
  errorMessage: string | null
  offline: boolean
}

export function initialOwnerConsole(locale: Locale = 'en'): OwnerConsoleState {
  return {
    locale,
    email: '',
    typedQuestions: '',
    selectedSuggestions: [],
    suggestions: [],
    link: null,
    challengeId: null,
    ownerToken: null,
    errorMessage: null,
    offline: false,
  }
}

/** The question list that will be submitted: typed lines first, then the
 * selected suggestions, both in their own order, duplicates kept. */
export function questionList(state: OwnerConsoleState): string[] {
  const typed = state.typedQuestions
    .split(/\r\n|\r|\n/)
    .filter(line => line.trim() !== '')
  return [...typed, ...state.selectedSuggestions]
}

export function selectSuggestion(
  state: OwnerConsoleState,
  suggestion: string,
): OwnerConsoleState {
  return {
    ...state,
    selectedSuggestions: [...state.selectedSuggestions, suggestion],
  }
}

export function unselectSuggestion(
  state: OwnerConsoleState,
  index: number,
): OwnerConsoleState {
  const kept = state.selectedSuggestions.filter((_, i) => i !== index)
  return { ...state, selectedSuggestions: kept }
}

export async function loadSuggestions(
  state: OwnerConsoleState,
  gateway: Gateway,
): Promise<OwnerConsoleState> {
  // always served by the gateway so the list cannot drift from the backend
  const suggestions = await gateway.suggestions(state.locale)
  return { ...state, suggestions }
}

const TOKEN_KEY_PREFIX = 'snknock-owner-token-'

type TokenStorage = Pick<Storage, 'getItem' | 'setItem'>

export function storeOwnerToken(
  storage: TokenStorage,
  challengeId: number,
  token: string,
): void {
  storage.setItem(TOKEN_KEY_PREFIX + challengeId, token)
}

export function loadOwnerToken(
  storage: TokenStorage,
  challengeId: number,
): string | null {
  return storage.getItem(TOKEN_KEY_PREFIX + challengeId)
}

export async function submitChallenge(
  state: OwnerConsoleState,
  gateway: Gateway,
  storage: TokenStorage,
): Promise<OwnerConsoleState> {
  if (state.email.trim() === '') {
    // caught locally; no request leaves the browser
    return { ...state, errorMessage: 'email-required', offline: false }
  }
  let result: CreateResult
  try {
    result = await gateway.createChallenge(
      state.email,
      questionList(state),
      state.locale,
    )
  } catch (err) {
    if (err instanceof GatewayUnreachable) {
      return { ...state, offline: true }
    }
    throw err
  }
  if (result.kind === 'invalid') {
    return { ...state, errorMessage: result.detail, offline: false }
  }
  const { challengeId, link, ownerToken } = result.challenge
  storeOwnerToken(storage, challengeId, ownerToken)
  return {
    ...state,
    // shown exactly as the service produced it; the UI never builds links
    link,
    challengeId,
    ownerToken,
    errorMessage: null,
    offline: false,
  }
}
