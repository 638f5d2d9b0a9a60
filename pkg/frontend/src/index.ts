export * from './api'
export * from './i18n'
export * from './recorder'
export * from './ownerConsole'
export * from './answerPage'
export * from './inbox'
export * from './page'
