/** Session state on the client: everything displayed is stored verbatim
 * from API responses. Mutations run one at a time and carry the version
 * stamp; a stale stamp refreshes the session and asks the user to retry. */

import { ApiError, DiveApi } from './api.js';
import type {
  ConfidenceMap,
  NodeStatus,
  Policy,
  Session,
} from './types.js';

export interface AppEvents {
  onChange: () => void;
  onNotice: (message: string) => void;
}

export class AppState {
  session: Session;
  statuses: Record<string, NodeStatus>;
  confidence: ConfidenceMap | null = null;
  disabled: string[];
  policy: Policy;
  version: number;
  emphasis: Set<string> | null = null;
  involvedFactors: Set<string> | null = null;
  busy = false;

  constructor(
    private readonly api: DiveApi,
    session: Session,
    private readonly events: AppEvents,
  ) {
    this.session = session;
    this.statuses = session.statuses;
    this.disabled = [...session.disabled];
    this.policy = session.policy;
    this.version = session.version;
  }

  static async boot(api: DiveApi, session: Session, events: AppEvents): Promise<AppState> {
    const app = new AppState(api, session, events);
    await app.refreshConfidence();
    return app;
  }

  async refreshConfidence(): Promise<void> {
    this.confidence = await this.api.getConfidence(this.session.sessionId);
    this.events.onChange();
  }

  async hoverIsolate(element: string): Promise<void> {
    try {
      const view = await this.api.isolate(this.session.sessionId, element);
      this.emphasis = new Set(view.emphasized);
      this.involvedFactors = new Set(view.involvedFactors);
      this.events.onChange();
    } catch (err) {
      this.events.onNotice(describe(err));
    }
  }

  clearIsolation(): void {
    if (this.emphasis !== null || this.involvedFactors !== null) {
      this.emphasis = null;
      this.involvedFactors = null;
      this.events.onChange();
    }
  }

  isDisabled(ref: string): boolean {
    return this.disabled.includes(ref);
  }

  async toggleRefutation(ref: string): Promise<void> {
    const next = this.isDisabled(ref)
      ? this.disabled.filter((x) => x !== ref)
      : [...this.disabled, ref];
    await this.mutate(async () => {
      const state = await this.api.putRefutations(
        this.session.sessionId,
        next,
        this.version,
      );
      this.disabled = [...state.disabled];
      this.statuses = state.statuses;
      this.version = state.version;
    });
  }

  async setPolicy(policy: Policy): Promise<void> {
    await this.mutate(async () => {
      const ack = await this.api.putPolicy(this.session.sessionId, policy, this.version);
      this.policy = ack.policy;
      this.version = ack.version;
    });
  }

  /** One in-flight mutation per session; reads stay allowed meanwhile. */
  private async mutate(fn: () => Promise<void>): Promise<void> {
    if (this.busy) {
      this.events.onNotice('Another change is still being applied.');
      return;
    }
    this.busy = true;
    try {
      await fn();
      await this.refreshConfidence();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.refreshSession();
        this.events.onNotice(
          'The session changed elsewhere; its state was refreshed. Please retry.',
        );
      } else {
        this.events.onNotice(describe(err));
      }
    } finally {
      this.busy = false;
      this.events.onChange();
    }
  }

  private async refreshSession(): Promise<void> {
    const session = await this.api.getSession(this.session.sessionId);
    this.session = session;
    this.statuses = session.statuses;
    this.disabled = [...session.disabled];
    this.policy = session.policy;
    this.version = session.version;
    await this.refreshConfidence();
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
