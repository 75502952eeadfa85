/**
 * View-models for the monitor panel and the certificate viewer.
 * Certificates render as ordered inference steps, never prose summaries.
 */

import { GoalJson, InferenceStep, Monitor } from "./protocol.js";

export function describeGoal(goal: GoalJson): string {
  switch (goal.kind) {
    case "embed-finite": {
      const g = goal.group as { name?: string; order?: number } | string;
      if (typeof g === "string") return `embed ${g}`;
      return `embed ${g.name ?? `order-${g.order}`}`;
    }
    case "divisibility":
      return `give ${goal.n} a ${goal.k}-th root`;
    case "inverse":
      return `invert ${goal.n}`;
    case "solve-system": {
      const sys = goal.system as { vars?: number; equations?: unknown[] };
      return `solve a system (${sys.vars ?? "?"} vars, ${sys.equations?.length ?? 0} equations)`;
    }
    case "clopen":
      return "hit a clopen target";
    default:
      return goal.kind;
  }
}

export interface MonitorRow {
  label: string;
  status: string;
  note: string;
}

export function monitorRows(monitors: Monitor[]): MonitorRow[] {
  return monitors.map((m) => ({
    label: describeGoal(m.goal),
    status: m.status === "achieved" && m.step !== null ? `achieved at step ${m.step}` : m.status,
    note: m.note,
  }));
}

function cellText(triple: number[]): string {
  const [i, j, k] = triple;
  return `${i}*${j}=${k}`;
}

/** One line per inference step, numbered in derivation order. */
export function certificateLines(steps: InferenceStep[]): string[] {
  return steps.map((s, idx) => {
    const premises = s.premises.length ? s.premises.map(cellText).join(", ") : "axioms";
    const conclusion = s.conclusion ? cellText(s.conclusion) : "contradiction";
    return `${idx + 1}. [${s.rule}] ${premises} => ${conclusion}`;
  });
}
