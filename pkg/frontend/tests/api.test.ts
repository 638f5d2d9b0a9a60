// Client mapping: form field names, status-to-result translation, and the
// no-link-construction rule.

import { describe, expect, it } from 'vitest'
import { Gateway, GatewayUnreachable } from '../src/api'

function capture() {
  const calls: Array<{ url: string; init?: RequestInit }> = []
  let reply: Response = new Response('{}')
  const gateway = new Gateway('http://svc.test', async (url, init) => {
    calls.push({ url, init })
    return reply.clone()
  })
  return {
    gateway,
    calls,
    replyWith(status: number, body: unknown) {
      reply = new Response(JSON.stringify(body), {
        status,
        headers: { 'content-type': 'application/json' },
      })
    },
  }
}

describe('createChallenge', () => {
  it('posts the multipart fields the service expects', async () => {
    const { gateway, calls, replyWith } = capture()
    replyWith(200, {
      challenge_id: 9,
      link: 'http://svc.test/en/answer?code=9',
      owner_token: 'ab'.repeat(16),
    })
    const result = await gateway.createChallenge('a@b.cd', ['One?', 'Two?'], 'en')
    expect(calls[0].url).toBe('http://svc.test/challenges')
    const form = calls[0].init?.body as FormData
    expect(form.get('user_email')).toBe('a@b.cd')
    expect(form.get('user_questions')).toBe('One?\nTwo?')
    expect(form.get('language')).toBe('en')
    expect(result).toEqual({
      kind: 'created',
      challenge: {
        challengeId: 9,
        link: 'http://svc.test/en/answer?code=9',
        ownerToken: 'ab'.repeat(16),
      },
    })
  })

  it('the link is passed through untouched, not rebuilt', async () => {
    const { gateway, replyWith } = capture()
    // a deliberately odd link proves the client echoes rather than derives
    const odd = 'http://elsewhere.example/prefix/en/answer?code=9&extra=1'
    replyWith(200, { challenge_id: 9, link: odd, owner_token: 'x' })
    const result = await gateway.createChallenge('a@b.cd', ['Q?'], 'en')
    expect(result.kind).toBe('created')
    if (result.kind === 'created') expect(result.challenge.link).toBe(odd)
  })

  it('400 becomes an invalid result with the detail', async () => {
    const { gateway, replyWith } = capture()
    replyWith(400, { detail: 'invalid email address' })
    const result = await gateway.createChallenge('nope', ['Q?'], 'en')
    expect(result).toEqual({ kind: 'invalid', detail: 'invalid email address' })
  })
})

describe('answerPage', () => {
  it('asks for JSON explicitly', async () => {
    const { gateway, calls, replyWith } = capture()
    replyWith(200, { code: 4, questions: ['Q?'], language: 'en' })
    await gateway.answerPage('en', '4')
    expect(calls[0].url).toBe('http://svc.test/en/answer?code=4')
    expect(new Headers(calls[0].init?.headers).get('accept')).toBe('application/json')
  })

  it('404 maps to not-found', async () => {
    const { gateway, replyWith } = capture()
    replyWith(404, { detail: 'no challenge with code 4' })
    expect(await gateway.answerPage('en', '4')).toEqual({ kind: 'not-found' })
  })
})

describe('uploadAnswer', () => {
  it('sends code and audio in one multipart body', async () => {
    const { gateway, calls, replyWith } = capture()
    replyWith(200, { answer_id: 2, notified: true })
    const clip = new Blob(['bytes'], { type: 'audio/webm' })
    const result = await gateway.uploadAnswer(4, clip)
    const form = calls[0].init?.body as FormData
    expect(form.get('code')).toBe('4')
    expect(form.get('audio')).toBeInstanceOf(File)
    expect((form.get('audio') as File).type).toBe('audio/webm')
    expect(result).toEqual({ kind: 'uploaded', answerId: 2 })
  })
})

describe('decide', () => {
  it('carries the token header and verdict body', async () => {
    const { gateway, calls, replyWith } = capture()
    replyWith(200, { answer_id: 2, decision: 'accepted' })
    await gateway.decide(2, 'tok-123', 'accepted')
    const init = calls[0].init
    expect(new Headers(init?.headers).get('X-Owner-Token')).toBe('tok-123')
    expect(JSON.parse(String(init?.body))).toEqual({ verdict: 'accepted' })
  })

  it('409 and 401 map to their results', async () => {
    const { gateway, replyWith } = capture()
    replyWith(409, { detail: 'already decided' })
    expect(await gateway.decide(2, 't', 'accepted')).toEqual({ kind: 'conflict' })
    replyWith(401, { detail: 'owner token required' })
    expect(await gateway.decide(2, 't', 'accepted')).toEqual({ kind: 'unauthorized' })
  })
})

describe('transport failures', () => {
  it('normalize to GatewayUnreachable', async () => {
    const gateway = new Gateway('http://svc.test', async () => {
      throw new TypeError('fetch failed')
    })
    await expect(gateway.suggestions('en')).rejects.toBeInstanceOf(GatewayUnreachable)
  })
})
