/**
 * Session client: one websocket, request in, reply batch out.
 *
 * The server answers every request with a finite burst of messages, so each
 * request method resolves once its terminal message arrives, returning the
 * whole burst in order. Works over the browser WebSocket or any object with
 * the same shape (tests inject the node implementation).
 */

import {
  Cell,
  ErrorMessage,
  SessionConfig,
  SessionMessage,
  Side,
  SnapshotMessage,
  StateMessage,
  parseMessage,
} from "./protocol.js";

export interface WebSocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onopen: ((ev: unknown) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
}

type Predicate = (m: SessionMessage) => boolean;

export class SessionClient {
  private ws: WebSocketLike;
  private inbox: SessionMessage[] = [];
  private waiter: (() => void) | null = null;
  private closed = false;
  humanSide: Side = "eve";
  permissive = false;
  sessionId: string | null = null;
  /** every message, in arrival order; the UI renders from this feed */
  onMessage: ((m: SessionMessage) => void) | null = null;

  constructor(ws: WebSocketLike) {
    this.ws = ws;
    ws.onmessage = (ev) => {
      const m = parseMessage(String(ev.data));
      this.inbox.push(m);
      if (this.onMessage) this.onMessage(m);
      if (this.waiter) this.waiter();
    };
    ws.onclose = () => {
      this.closed = true;
      if (this.waiter) this.waiter();
    };
    ws.onerror = ws.onclose;
  }

  private async next(): Promise<SessionMessage> {
    while (this.inbox.length === 0) {
      if (this.closed) throw new Error("connection closed");
      await new Promise<void>((resolve) => {
        this.waiter = resolve;
      });
      this.waiter = null;
    }
    return this.inbox.shift()!;
  }

  private async collect(done: Predicate): Promise<SessionMessage[]> {
    const out: SessionMessage[] = [];
    for (;;) {
      const m = await this.next();
      out.push(m);
      if (m.kind === "error" || done(m)) return out;
    }
  }

  private myTurn(m: SessionMessage): boolean {
    return m.kind === "state" && m.toMove === this.humanSide;
  }

  async create(config: SessionConfig): Promise<SessionMessage[]> {
    this.humanSide = config.humanSide ?? "eve";
    this.permissive = config.permissive ?? false;
    this.ws.send(JSON.stringify({ kind: "create", config }));
    const msgs = await this.collect((m) => this.myTurn(m));
    const first = msgs[0];
    if (first && first.kind === "state" && first.session) this.sessionId = first.session;
    return msgs;
  }

  async attach(session: string): Promise<SessionMessage[]> {
    this.ws.send(JSON.stringify({ kind: "attach", session }));
    const msgs = await this.collect((m) => m.kind === "state");
    const first = msgs[0];
    if (first && first.kind === "state" && first.session) {
      this.sessionId = first.session;
      this.humanSide = first.toMove;
    }
    return msgs;
  }

  /**
   * Submit one move. The burst is one of:
   *   verdict(illegal) | verdict(unknown, strict mode)         -- not applied
   *   verdict, [monitors], state, move, [monitors], state      -- applied
   *   error
   */
  async move(cells: Cell[]): Promise<SessionMessage[]> {
    this.ws.send(JSON.stringify({ kind: "move", cells }));
    return this.collect(
      (m) =>
        this.myTurn(m) ||
        (m.kind === "verdict" &&
          (m.verdict === "illegal" || (m.verdict === "unknown" && !this.permissive)))
    );
  }

  async resign(): Promise<SessionMessage[]> {
    this.ws.send(JSON.stringify({ kind: "resign" }));
    return this.collect((m) => m.kind === "state");
  }

  async snapshot(): Promise<SnapshotMessage> {
    this.ws.send(JSON.stringify({ kind: "snapshot" }));
    const msgs = await this.collect((m) => m.kind === "snapshot");
    const last = msgs[msgs.length - 1]!;
    if (last.kind === "error") throw new Error((last as ErrorMessage).reason);
    return last as SnapshotMessage;
  }

  lastState(msgs: SessionMessage[]): StateMessage | null {
    for (let i = msgs.length - 1; i >= 0; i--) {
      const m = msgs[i]!;
      if (m.kind === "state") return m;
    }
    return null;
  }

  close(): void {
    this.ws.close();
  }
}
