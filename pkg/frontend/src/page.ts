/** DOM chrome shared by the pages: labeled skeletons whose text lives in
 * the i18n table, and the language link that the toggle criterion tests.
 *
 * Rendering discipline: elements carrying user content (inputs, textareas,
 * question lines fetched from the service) never get a data-i18n key, so a
 * locale switch can only touch chrome. */

import { Locale, MessageKey, applyLocale, message, otherLocale } from './i18n'

function labeled(
  doc: Document,
  tag: string,
  key: MessageKey,
  locale: Locale,
): HTMLElement {
  const el = doc.createElement(tag)
  el.dataset.i18n = key
  el.textContent = message(locale, key)
  return el
}

/** The create-challenge form: email, free-text questions, the suggestion
 * listbox (filled later from the service), submit. */
export function renderOwnerChrome(
  doc: Document,
  root: HTMLElement,
  locale: Locale,
): void {
  root.innerHTML = ''
  root.appendChild(labeled(doc, 'h1', 'appTitle', locale))

  const emailLabel = labeled(doc, 'label', 'emailLabel', locale)
  const email = doc.createElement('input')
  email.type = 'email'
  email.id = 'owner-email'
  root.append(emailLabel, email)

  const questionsLabel = labeled(doc, 'label', 'questionsLabel', locale)
  const typed = doc.createElement('textarea')
  typed.id = 'typed-questions'
  typed.dataset.i18nPlaceholder = 'questionsPlaceholder'
  typed.setAttribute('placeholder', message(locale, 'questionsPlaceholder'))
  root.append(questionsLabel, typed)

  root.appendChild(labeled(doc, 'p', 'suggestionsLabel', locale))
  const listbox = doc.createElement('select')
  listbox.id = 'suggestion-listbox'
  listbox.size = 11
  root.appendChild(listbox)

  const submit = labeled(doc, 'button', 'createButton', locale)
  submit.id = 'create-challenge'
  root.appendChild(submit)

  appendLanguageLink(doc, root, locale)
}

/** Fill the listbox from the service's suggestion list, verbatim. */
export function fillSuggestionListbox(
  doc: Document,
  listbox: HTMLSelectElement,
  suggestions: string[],
): void {
  listbox.innerHTML = ''
  for (const text of suggestions) {
    const option = doc.createElement('option')
    option.textContent = text
    option.value = text
    listbox.appendChild(option)
  }
}

/** The questions a requester must answer, one line each; plus the recorder
 * buttons. Question text is service content, left untouched by i18n. */
export function renderAnswerChrome(
  doc: Document,
  root: HTMLElement,
  locale: Locale,
  questions: string[],
): void {
  root.innerHTML = ''
  root.appendChild(labeled(doc, 'h1', 'appTitle', locale))
  const list = doc.createElement('div')
  list.id = 'question-lines'
  for (const q of questions) {
    const line = doc.createElement('p')
    line.className = 'question'
    line.textContent = q
    list.appendChild(line)
  }
  root.appendChild(list)
  for (const [id, key] of [
    ['record', 'recordButton'],
    ['stop', 'stopButton'],
    ['play', 'playButton'],
    ['send', 'sendButton'],
  ] as Array<[string, MessageKey]>) {
    const button = labeled(doc, 'button', key, locale)
    button.id = `${id}-button`
    root.appendChild(button)
  }
  appendLanguageLink(doc, root, locale)
}

/** Per the layout rule, the toggle is a plain hyperlink at the very bottom
 * of the page. */
export function appendLanguageLink(
  doc: Document,
  root: HTMLElement,
  locale: Locale,
): HTMLAnchorElement {
  const existing = root.querySelector<HTMLAnchorElement>('#language-link')
  existing?.remove()
  const link = doc.createElement('a')
  link.id = 'language-link'
  link.href = '#'
  link.dataset.i18n = 'languageLink'
  link.textContent = message(locale, 'languageLink')
  root.appendChild(link) // last child: page bottom
  return link
}

/** Flip the locale in place: direction, lang attribute, every chrome
 * label. Inputs, textareas, and question lines keep their contents. */
export function toggleLanguage(doc: Document, locale: Locale): Locale {
  const next = otherLocale(locale)
  applyLocale(doc, next)
  return next
}
