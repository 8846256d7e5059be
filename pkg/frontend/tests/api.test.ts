import { describe, expect, it } from 'vitest';

import { ApiError, DiveApi } from '../src/api.js';
import { mockFetch } from './mock.js';

describe('api client', () => {
  it('encodes refutation bodies with the version stamp', async () => {
    let seen: RequestInit | undefined;
    const api = new DiveApi('', async (url, init) => {
      seen = init;
      return new Response(JSON.stringify({ disabled: [], resolved: [], statuses: {}, version: 2 }));
    });
    await api.putRefutations('s-1', ['sourceClass:SELF-REPORT'], 1);
    expect(JSON.parse(String(seen?.body))).toEqual({
      disabled: ['sourceClass:SELF-REPORT'],
      version: 1,
    });
  });

  it('url-encodes isolate elements', async () => {
    const { fetchFn, calls } = mockFetch({
      'GET /sessions/s-1/isolate?element=operationClass%3ANamed+Entity+Recognition': {
        element: 'x',
        focus: [],
        emphasized: [],
        deemphasized: [],
        involvedFactors: [],
      },
    });
    const api = new DiveApi('', fetchFn);
    await api.isolate('s-1', 'operationClass:Named Entity Recognition');
    expect(calls).toHaveLength(1);
  });

  it('raises ApiError with the server code on failure', async () => {
    const { fetchFn } = mockFetch({
      'PUT /sessions/s-1/refutations': {
        status: 409,
        body: { code: 'VersionConflict', message: 'session is at version 4' },
      },
    });
    const api = new DiveApi('', fetchFn);
    await expect(api.putRefutations('s-1', [], 1)).rejects.toMatchObject({
      status: 409,
      code: 'VersionConflict',
    });
    await expect(api.putRefutations('s-1', [], 1)).rejects.toBeInstanceOf(ApiError);
  });
});
