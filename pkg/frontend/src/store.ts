/**
 * View state, reduced purely from server messages.
 *
 * The client holds no truth of its own: verdicts, monitors, and cells all
 * come from the message feed, so replaying the same messages (or attaching
 * after a reload) reconstructs the identical view. A reply burst is applied
 * atomically, which is what lets a monitor flip land in the same render
 * cycle as the verdict that caused it.
 */

import {
  IllegalVerdict,
  Monitor,
  MoveMessage,
  SessionMessage,
  StateMessage,
  VerdictMessage,
} from "./protocol.js";

export interface ViewState {
  session: string | null;
  state: StateMessage | null;
  monitors: Monitor[];
  lastVerdict: VerdictMessage | null;
  certificate: IllegalVerdict | null;
  engineMoves: MoveMessage[];
  errors: string[];
  over: boolean;
}

export function initialView(): ViewState {
  return {
    session: null,
    state: null,
    monitors: [],
    lastVerdict: null,
    certificate: null,
    engineMoves: [],
    errors: [],
    over: false,
  };
}

export function reduce(view: ViewState, m: SessionMessage): ViewState {
  switch (m.kind) {
    case "state":
      return {
        ...view,
        state: m,
        monitors: m.monitors,
        session: m.session ?? view.session,
      };
    case "monitors":
      return { ...view, monitors: m.monitors };
    case "verdict": {
      const next: ViewState = { ...view, lastVerdict: m };
      next.certificate = m.verdict === "illegal" ? m : null;
      return next;
    }
    case "move":
      return { ...view, engineMoves: [...view.engineMoves, m] };
    case "error": {
      const over = m.reason.includes("over") || m.reason.includes("faulted");
      return { ...view, errors: [...view.errors, m.reason], over: view.over || over };
    }
    case "snapshot":
      return view;
  }
}

export function reduceBurst(view: ViewState, msgs: SessionMessage[]): ViewState {
  return msgs.reduce(reduce, view);
}
