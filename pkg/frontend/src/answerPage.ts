/** Requester-side controller: questions, microphone, upload.
 *
 * Holds the recorder machine and drives it from UI callbacks; every async
 * outcome (capture started, permission refused, upload finished) lands as
 * one machine event, so the page can only ever sit in a machine state.
 * Uploads are serialized: pressing send while one is in flight is a no-op
 * because the machine has already left the recorded state.
 */

import { AnswerPageResult, Gateway } from './api'
import {
  AudioCapture,
  RecorderMachine,
  initialMachine,
  mustAutoStop,
  sendEnabled,
  transition,
} from './recorder'

export type AnswerView =
  | { kind: 'loading' }
  | { kind: 'not-found' }
  | { kind: 'ready'; questions: string[]; code: number }

export class AnswerPageController {
  view: AnswerView = { kind: 'loading' }
  machine: RecorderMachine = initialMachine()

  constructor(
    private readonly gateway: Gateway,
    private readonly capture: AudioCapture,
    private readonly onChange: () => void = () => {},
  ) {}

  private apply(event: Parameters<typeof transition>[1]): void {
    this.machine = transition(this.machine, event)
    this.onChange()
  }

  async load(language: string, code: string): Promise<void> {
    const result: AnswerPageResult = await this.gateway.answerPage(language, code)
    if (result.kind === 'ok') {
      this.view = { kind: 'ready', questions: result.page.questions, code: result.page.code }
    } else {
      this.view = { kind: 'not-found' }
    }
    this.onChange()
  }

  async pressRecord(): Promise<void> {
    if (this.machine.state !== 'idle' && this.machine.state !== 'recorded') return
    try {
      await this.capture.start()
    } catch {
      this.apply({ kind: 'permission-denied' })
      return
    }
    this.apply({ kind: 'record' })
  }

  async pressStop(): Promise<void> {
    if (this.machine.state !== 'recording') return
    const clip = await this.capture.stop()
    this.apply({ kind: 'stop', clip })
  }

  /** One countdown second; cuts the capture at zero. */
  async tick(): Promise<void> {
    this.apply({ kind: 'tick' })
    if (mustAutoStop(this.machine)) {
      await this.pressStop()
    }
  }

  async pressSend(): Promise<void> {
    if (!sendEnabled(this.machine) || this.view.kind !== 'ready') return
    const clip = this.machine.clip
    if (clip === null) return
    this.apply({ kind: 'send' })
    try {
      const result = await this.gateway.uploadAnswer(this.view.code, clip)
      if (result.kind === 'uploaded') {
        this.apply({ kind: 'upload-ok' })
      } else {
        this.apply({ kind: 'upload-failed', detail: result.detail })
      }
    } catch (err) {
      this.apply({ kind: 'upload-failed', detail: String(err) })
    }
  }
}
