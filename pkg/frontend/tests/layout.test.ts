import { describe, expect, it } from 'vitest';

import { computeLayout } from '../src/layout.js';
import type { Session } from '../src/types.js';
import sessionFixture from './fixtures/session.json';

const session = sessionFixture as unknown as Session;

describe('layout', () => {
  it('is deterministic for a fixed document', () => {
    const a = computeLayout(session.subgraph);
    const b = computeLayout(session.subgraph);
    expect([...a.positions.entries()]).toEqual([...b.positions.entries()]);
    expect(a.width).toBe(b.width);
    expect(a.height).toBe(b.height);
  });

  it('puts the target assertion rightmost', () => {
    const layout = computeLayout(session.subgraph);
    const targetX = layout.positions.get('assert-ladyada-usa')!.x;
    for (const [id, pos] of layout.positions) {
      if (id !== 'assert-ladyada-usa') {
        expect(pos.x).toBeLessThan(targetX);
      }
    }
  });

  it('flows upstream sources leftward', () => {
    const layout = computeLayout(session.subgraph);
    const article = layout.positions.get('sni-article-1893')!;
    const ner = layout.positions.get('ner-sni-1')!;
    const named = layout.positions.get('ne-ladyada-sni')!;
    expect(article.x).toBeLessThan(ner.x);
    expect(ner.x).toBeLessThan(named.x);
  });

  it('never stacks two nodes on one spot', () => {
    const layout = computeLayout(session.subgraph);
    const seen = new Set<string>();
    for (const pos of layout.positions.values()) {
      const key = `${pos.x},${pos.y}`;
      expect(seen.has(key)).toBe(false);
      seen.add(key);
    }
  });

  it('positions every subgraph node', () => {
    const layout = computeLayout(session.subgraph);
    expect(layout.positions.size).toBe(session.subgraph.nodes.length);
  });
});
