/**
 * Wire types for the play session protocol (version 1).
 *
 * Every message carries {v, kind}; the server is the only source of truth
 * for verdicts and monitor statuses. Requests flow client -> server, the
 * five reply kinds plus "snapshot" flow back.
 */

export const PROTOCOL_VERSION = 1;

export type Cell = [number, number, number];

export type Side = "eve" | "odd";

export interface GoalJson {
  kind: "embed-finite" | "divisibility" | "inverse" | "solve-system" | "clopen";
  [key: string]: unknown;
}

export interface Monitor {
  goal: GoalJson;
  status: "pending" | "achieved";
  step: number | null;
  note: string;
}

export interface InferenceStep {
  rule: string;
  premises: number[][];
  conclusion: number[] | null;
}

export interface StateMessage {
  v: number;
  kind: "state";
  step: number;
  toMove: Side;
  blockBound: number;
  cells: Cell[];
  monitors: Monitor[];
  session?: string;
}

export interface MoveMessage {
  v: number;
  kind: "move";
  mover: Side;
  cells: Cell[];
}

export interface LegalVerdict {
  v: number;
  kind: "verdict";
  verdict: "legal";
  witnessRef: { kind: string; [key: string]: unknown } | null;
}

export interface IllegalVerdict {
  v: number;
  kind: "verdict";
  verdict: "illegal";
  rule: number | null;
  reason: string;
  certificate?: InferenceStep[];
}

export interface UnknownVerdict {
  v: number;
  kind: "verdict";
  verdict: "unknown";
  reason: string;
}

export type VerdictMessage = LegalVerdict | IllegalVerdict | UnknownVerdict;

export interface MonitorsMessage {
  v: number;
  kind: "monitors";
  monitors: Monitor[];
}

export interface ErrorMessage {
  v: number;
  kind: "error";
  reason: string;
}

export interface Transcript {
  config: Record<string, unknown>;
  moves: {
    step: number;
    mover: Side;
    cells: Cell[];
    verdict: string;
    witnessRef: unknown;
  }[];
  finalTable: { cells: Cell[] };
  monitors: Monitor[];
}

export interface SnapshotMessage {
  v: number;
  kind: "snapshot";
  transcript: Transcript;
}

export type SessionMessage =
  | StateMessage
  | MoveMessage
  | VerdictMessage
  | MonitorsMessage
  | ErrorMessage
  | SnapshotMessage;

export interface SessionConfig {
  mode?: "general" | "abelian";
  humanSide?: Side;
  opponent?: { kind: "random" | "spoiler" | "scheduler"; seed?: number };
  schedule?: GoalJson[] | null;
  permissive?: boolean;
}

export type Request =
  | { kind: "create"; config: SessionConfig }
  | { kind: "attach"; session: string }
  | { kind: "move"; cells: Cell[] }
  | { kind: "resign" }
  | { kind: "snapshot" };

export function parseMessage(raw: string): SessionMessage {
  const obj = JSON.parse(raw);
  if (typeof obj !== "object" || obj === null || typeof obj.kind !== "string") {
    throw new Error(`not a session message: ${raw}`);
  }
  return obj as SessionMessage;
}

export function isIllegal(m: SessionMessage): m is IllegalVerdict {
  return m.kind === "verdict" && m.verdict === "illegal";
}
