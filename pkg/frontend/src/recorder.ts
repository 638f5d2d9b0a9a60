/** The answer-page recorder as a pure state machine.
 *
 * States and the complete set of transitions:
 *
 *   idle ──record──> recording ──stop──> recorded ──send──> sending
 *   recorded ──record──> recording            (re-record, old clip dropped)
 *   sending ──upload-ok──> sent
 *   sending ──upload-failed──> error
 *
 * Everything else is a no-op: the state stays put and at most a message
 * changes. "send the answer" is enabled in exactly one state: recorded.
 */

export const MAX_RECORDING_SECONDS = 180

export type RecorderState =
  | 'idle'
  | 'recording'
  | 'recorded'
  | 'sending'
  | 'sent'
  | 'error'

export type RecorderEvent =
  | { kind: 'record' }
  | { kind: 'permission-denied' }
  | { kind: 'stop'; clip: Blob }
  | { kind: 'tick' }
  | { kind: 'play' }
  | { kind: 'send' }
  | { kind: 'upload-ok' }
  | { kind: 'upload-failed'; detail?: string }

export interface RecorderMachine {
  state: RecorderState
  clip: Blob | null
  /** countdown while recording; MAX_RECORDING_SECONDS at start */
  remainingSeconds: number
  /** permission or upload trouble, as an i18n key-ish note; null when clear */
  notice: 'mic-denied' | 'upload-failed' | null
}

export function initialMachine(): RecorderMachine {
  return { state: 'idle', clip: null, remainingSeconds: MAX_RECORDING_SECONDS, notice: null }
}

export function sendEnabled(m: RecorderMachine): boolean {
  return m.state === 'recorded'
}

export function recordEnabled(m: RecorderMachine): boolean {
  return m.state === 'idle' || m.state === 'recorded'
}

export function playEnabled(m: RecorderMachine): boolean {
  return m.clip !== null && (m.state === 'recorded' || m.state === 'sent')
}

export function transition(m: RecorderMachine, event: RecorderEvent): RecorderMachine {
  switch (event.kind) {
    case 'record':
      if (m.state === 'idle' || m.state === 'recorded') {
        return { state: 'recording', clip: null, remainingSeconds: MAX_RECORDING_SECONDS, notice: null }
      }
      return m
    case 'permission-denied':
      // capture never started, so the state holds; surface the message
      if (m.state === 'idle' || m.state === 'recorded') {
        return { ...m, notice: 'mic-denied' }
      }
      return m
    case 'stop':
      if (m.state === 'recording') {
        return { ...m, state: 'recorded', clip: event.clip }
      }
      return m
    case 'tick':
      if (m.state !== 'recording') return m
      return { ...m, remainingSeconds: Math.max(0, m.remainingSeconds - 1) }
    case 'play':
      return m
    case 'send':
      if (m.state === 'recorded') {
        return { ...m, state: 'sending', notice: null }
      }
      return m
    case 'upload-ok':
      if (m.state === 'sending') {
        return { ...m, state: 'sent' }
      }
      return m
    case 'upload-failed':
      if (m.state === 'sending') {
        return { ...m, state: 'error', notice: 'upload-failed' }
      }
      return m
  }
}

/** True when the countdown has run out and capture must be cut off. */
export function mustAutoStop(m: RecorderMachine): boolean {
  return m.state === 'recording' && m.remainingSeconds <= 0
}

/** What the browser capture layer must provide; swapped for a fake in tests. */
export interface AudioCapture {
  start(): Promise<void>
  stop(): Promise<Blob>
}

/** MediaRecorder-backed capture for real browsers. */
export class MediaRecorderCapture implements AudioCapture {
  private stream?: MediaStream
  private recorder?: MediaRecorder
  private chunks: BlobPart[] = []

  async start(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true })
    this.recorder = new MediaRecorder(this.stream)
    this.chunks = []
    this.recorder.ondataavailable = e => this.chunks.push(e.data)
    this.recorder.start()
  }

  async stop(): Promise<Blob> {
    const recorder = this.recorder
    if (!recorder) throw new Error('capture was never started')
    await new Promise<void>(resolve => {
      recorder.onstop = () => resolve()
      recorder.stop()
    })
    this.stream?.getTracks().forEach(t => t.stop())
    return new Blob(this.chunks, { type: recorder.mimeType || 'audio/webm' })
  }
}
