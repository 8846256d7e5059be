/** Boot: create or resume a session from the URL, wire the view together. */

import { DiveApi } from './api.js';
import { AppState } from './app.js';
import { renderGraph } from './render.js';
import { renderSidebar } from './sidebar.js';

function q<T extends HTMLElement>(selector: string): T {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

function notice(message: string): void {
  const bar = q<HTMLElement>('#notice');
  bar.textContent = message;
  bar.classList.toggle('hidden', message === '');
}

let redraw: () => void = () => {};
const events = { onChange: () => redraw(), onNotice: notice };

function openSession(app: AppState): void {
  const svg = q<HTMLElement>('#graph') as unknown as SVGSVGElement;
  const sidebar = q<HTMLElement>('#sidebar');
  const header = q<HTMLElement>('#session-info');

  redraw = () => {
    header.textContent =
      `session ${app.session.sessionId} · document ${app.session.documentId} ` +
      `· v${app.version}` +
      (app.disabled.length ? ` · disabled: ${app.disabled.join(', ')}` : '');
    renderGraph(svg, app, {
      onNodeHover: (id) => void app.hoverIsolate(id),
      onNodeLeave: () => app.clearIsolation(),
      onNodeClick: (id) => void app.toggleRefutation(id),
    });
    renderSidebar(sidebar, app, {
      onFactorHover: (ref) => void app.hoverIsolate(ref),
      onFactorLeave: () => app.clearIsolation(),
      onFactorToggle: (ref) => void app.toggleRefutation(ref),
      onPolicyChange: (policy) => void app.setPolicy(policy),
    });
  };
  redraw();
  q<HTMLElement>('#landing').classList.add('hidden');
  q<HTMLElement>('#workspace').classList.remove('hidden');
}

async function boot(): Promise<void> {
  const api = new DiveApi('');
  const params = new URLSearchParams(window.location.search);

  const start = async (documentId: string, targets: string[]) => {
    notice('');
    const session = await api.createSession(documentId, targets);
    openSession(await AppState.boot(api, session, events));
  };

  try {
    const sessionId = params.get('session');
    if (sessionId) {
      const session = await api.getSession(sessionId);
      openSession(await AppState.boot(api, session, events));
      return;
    }
    const documentId = params.get('doc');
    const target = params.get('target');
    if (documentId && target) {
      await start(documentId, target.split(','));
      return;
    }
  } catch (err) {
    notice(err instanceof Error ? err.message : String(err));
  }

  q<HTMLElement>('#demo-button').addEventListener('click', async () => {
    try {
      const fixture = await api.loadDemoFixture();
      await start(fixture.documentId, fixture.targets);
    } catch (err) {
      notice(err instanceof Error ? err.message : String(err));
    }
  });

  q<HTMLElement>('#open-form').addEventListener('submit', async (event) => {
    event.preventDefault();
    const documentId = q<HTMLInputElement>('#doc-id').value.trim();
    const targets = q<HTMLInputElement>('#target-ids')
      .value.split(',')
      .map((t) => t.trim())
      .filter(Boolean);
    if (!documentId || targets.length === 0) {
      notice('A document id and at least one target id are required.');
      return;
    }
    try {
      await start(documentId, targets);
    } catch (err) {
      notice(err instanceof Error ? err.message : String(err));
    }
  });
}

void boot();
