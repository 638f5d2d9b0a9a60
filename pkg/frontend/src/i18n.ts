/** Bilingual chrome: every label the UI owns, in English and Arabic.
 * User-entered content (questions, email addresses) is never translated. */

export type Locale = 'en' | 'ar'

export const LOCALES: Locale[] = ['en', 'ar']

export type MessageKey =
  | 'appTitle'
  | 'emailLabel'
  | 'questionsLabel'
  | 'questionsPlaceholder'
  | 'suggestionsLabel'
  | 'createButton'
  | 'linkLabel'
  | 'copyButton'
  | 'copiedNotice'
  | 'profileMessageLabel'
  | 'inboxTitle'
  | 'recordButton'
  | 'stopButton'
  | 'playButton'
  | 'sendButton'
  | 'sendingNotice'
  | 'sentNotice'
  | 'uploadFailedNotice'
  | 'micDeniedNotice'
  | 'notFoundNotice'
  | 'countdownLabel'
  | 'acceptButton'
  | 'rejectButton'
  | 'acceptedVerdict'
  | 'rejectedVerdict'
  | 'decidedElsewhereNotice'
  | 'tokenPromptLabel'
  | 'offlineBanner'
  | 'languageLink'

export const MESSAGES: Record<Locale, Record<MessageKey, string>> = {
  en: {
    appTitle: 'Voice check for friend requests',
    emailLabel: 'Your email address',
    questionsLabel: 'Your questions, one per line',
    questionsPlaceholder: 'Type a question...',
    suggestionsLabel: 'Or pick from the suggestions',
    createButton: 'Create the challenge link',
    linkLabel: 'Share this link with the requester',
    copyButton: 'Copy',
    copiedNotice: 'Copied',
    profileMessageLabel: 'Message to post on your profile',
    inboxTitle: 'Voice answers',
    recordButton: 'Record the answer',
    stopButton: 'Stop recording',
    playButton: 'Play it back',
    sendButton: 'send the answer',
    sendingNotice: 'Sending...',
    sentNotice: 'Your answer was sent.',
    uploadFailedNotice: 'Sending failed. Reload the page to try again.',
    micDeniedNotice: 'Microphone access was refused; recording needs it.',
    notFoundNotice: 'This link does not match any challenge.',
    countdownLabel: 'seconds left',
    acceptButton: 'Accept',
    rejectButton: 'Reject',
    acceptedVerdict: 'Accepted',
    rejectedVerdict: 'Rejected',
    decidedElsewhereNotice: 'Already decided elsewhere; refreshed.',
    tokenPromptLabel: 'Paste your owner token',
    offlineBanner: 'Cannot reach the server.',
    languageLink: 'العربية',
  },
  ar: {
    appTitle: 'التحقق الصوتي من طلبات الصداقة',
    emailLabel: 'بريدك الإلكتروني',
    questionsLabel: 'أسئلتك، سؤال في كل سطر',
    questionsPlaceholder: 'اكتب سؤالاً...',
    suggestionsLabel: 'أو اختر من الاقتراحات',
    createButton: 'أنشئ رابط التحقق',
    linkLabel: 'شارك هذا الرابط مع مقدم الطلب',
    copyButton: 'انسخ',
    copiedNotice: 'تم النسخ',
    profileMessageLabel: 'رسالة لنشرها على صفحتك',
    inboxTitle: 'الإجابات الصوتية',
    recordButton: 'سجل الإجابة',
    stopButton: 'أوقف التسجيل',
    playButton: 'استمع إليها',
    sendButton: 'أرسل الإجابة',
    sendingNotice: 'جارٍ الإرسال...',
    sentNotice: 'أُرسلت إجابتك.',
    uploadFailedNotice: 'فشل الإرسال. أعد تحميل الصفحة للمحاولة مجدداً.',
    micDeniedNotice: 'رُفض الوصول إلى الميكروفون، والتسجيل يحتاجه.',
    notFoundNotice: 'هذا الرابط لا يطابق أي تحدٍّ.',
    countdownLabel: 'ثوانٍ متبقية',
    acceptButton: 'اقبل',
    rejectButton: 'ارفض',
    acceptedVerdict: 'مقبول',
    rejectedVerdict: 'مرفوض',
    decidedElsewhereNotice: 'سبق البتّ فيها من مكان آخر؛ تم التحديث.',
    tokenPromptLabel: 'ألصق رمز المالك',
    offlineBanner: 'تعذّر الوصول إلى الخادم.',
    languageLink: 'English',
  },
}

export function message(locale: Locale, key: MessageKey): string {
  return MESSAGES[locale][key]
}

export function direction(locale: Locale): 'ltr' | 'rtl' {
  return locale === 'ar' ? 'rtl' : 'ltr'
}

/** The toggle target; applying it twice is the identity. */
export function otherLocale(locale: Locale): Locale {
  return locale === 'en' ? 'ar' : 'en'
}

/** Stamp direction and language on the document and refresh every element
 * carrying a data-i18n key. Form values and question text are left alone. */
export function applyLocale(doc: Document, locale: Locale): void {
  doc.documentElement.lang = locale
  doc.documentElement.dir = direction(locale)
  const labeled = doc.querySelectorAll<HTMLElement>('[data-i18n]')
  labeled.forEach(el => {
    const key = el.dataset.i18n as MessageKey
    if (key in MESSAGES[locale]) el.textContent = message(locale, key)
  })
  doc.querySelectorAll<HTMLElement>('[data-i18n-placeholder]').forEach(el => {
    const key = el.dataset.i18nPlaceholder as MessageKey
    if (key in MESSAGES[locale]) el.setAttribute('placeholder', message(locale, key))
  })
}
