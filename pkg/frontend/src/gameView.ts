/**
 * Pure view-model for the table grid and move staging.
 *
 * Everything here is a client-side mirror of the server's structural rules,
 * used only to guide input (highlighting, submit gating). The server's
 * verdict is always the truth; nothing in this module overrides it.
 */

import { Cell, StateMessage } from "./protocol.js";

export interface GridCell {
  row: number;
  col: number;
  value: number | null;
  staged: boolean;
  inBlock: boolean;
  editable: boolean;
}

export interface GridModel {
  size: number;
  blockBound: number;
  yourTurn: boolean;
  rows: GridCell[][];
}

function cellKey(i: number, j: number): string {
  return `${i},${j}`;
}

function toMap(cells: Cell[]): Map<string, number> {
  const m = new Map<string, number>();
  for (const [i, j, k] of cells) m.set(cellKey(i, j), k);
  return m;
}

/** Grid sized to show the block plus any overflow labels already in play. */
export function gridModel(state: StateMessage, staged: Cell[], humanSide: string): GridModel {
  const occupied = toMap(state.cells);
  const stagedMap = toMap(staged);
  let size = state.blockBound;
  for (const [i, j, k] of state.cells) size = Math.max(size, i, j, k);
  for (const [i, j, k] of staged) size = Math.max(size, i, j, k);
  const yourTurn = state.toMove === humanSide;
  const rows: GridCell[][] = [];
  for (let i = 1; i <= size; i++) {
    const row: GridCell[] = [];
    for (let j = 1; j <= size; j++) {
      const key = cellKey(i, j);
      const settled = occupied.get(key);
      const stagedVal = stagedMap.get(key);
      row.push({
        row: i,
        col: j,
        value: settled ?? stagedVal ?? null,
        staged: settled === undefined && stagedVal !== undefined,
        inBlock: i <= state.blockBound && j <= state.blockBound,
        // occupied cells are never editable, whatever the turn
        editable: yourTurn && settled === undefined,
      });
    }
    rows.push(row);
  }
  return { size, blockBound: state.blockBound, yourTurn, rows };
}

/** Write-once mirror: null means accepted, otherwise the reason. */
export function stageCell(state: StateMessage, staged: Cell[], cell: Cell): string | null {
  const [i, j, k] = cell;
  if (i < 1 || j < 1 || k < 1 || ![i, j, k].every(Number.isInteger)) {
    return "labels are integers starting at 1";
  }
  for (const [a, b] of state.cells) {
    if (a === i && b === j) return `cell (${i},${j}) is already filled`;
  }
  for (const [a, b] of staged) {
    if (a === i && b === j) return `cell (${i},${j}) is already staged`;
  }
  if (i === 1 && k !== j) return `identity row: (1,${j}) can only hold ${j}`;
  if (j === 1 && k !== i) return `identity column: (${i},1) can only hold ${i}`;
  return null;
}

export interface Obligations {
  missingCells: [number, number][];
  rowsWithoutIdentity: number[];
  colsWithoutIdentity: number[];
  asymmetric: [number, number][];
}

/**
 * Outstanding rule obligations for the move being staged, mirroring how the
 * server checks the step: the block through step+1 must be complete and
 * every row/column in it needs an identity cell somewhere (any column/row
 * counts, not just those inside the block). Abelian mode adds symmetry.
 */
export function obligations(state: StateMessage, staged: Cell[], abelian = false): Obligations {
  const all = new Map<string, number>();
  for (const [i, j, k] of state.cells) all.set(cellKey(i, j), k);
  for (const [i, j, k] of staged) all.set(cellKey(i, j), k);
  const bound = state.blockBound;

  const missingCells: [number, number][] = [];
  for (let i = 1; i <= bound; i++) {
    for (let j = 1; j <= bound; j++) {
      if (!all.has(cellKey(i, j))) missingCells.push([i, j]);
    }
  }

  const rows = new Set<number>();
  const cols = new Set<number>();
  for (let n = 1; n <= bound; n++) {
    rows.add(n);
    cols.add(n);
  }
  for (const [key, k] of all) {
    if (k !== 1) continue;
    const [i, j] = key.split(",").map(Number) as [number, number];
    rows.delete(i);
    cols.delete(j);
  }

  const asymmetric: [number, number][] = [];
  if (abelian) {
    for (const [key, k] of all) {
      const [i, j] = key.split(",").map(Number) as [number, number];
      if (i === j) continue;
      if (all.get(cellKey(j, i)) !== k) asymmetric.push([i, j]);
    }
    asymmetric.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  }

  return {
    missingCells,
    rowsWithoutIdentity: [...rows].sort((a, b) => a - b),
    colsWithoutIdentity: [...cols].sort((a, b) => a - b),
    asymmetric,
  };
}

/** Submission stays disabled while any obligation is outstanding. */
export function submitEnabled(state: StateMessage, staged: Cell[], humanSide: string, abelian = false): boolean {
  if (state.toMove !== humanSide) return false;
  const o = obligations(state, staged, abelian);
  return (
    o.missingCells.length === 0 &&
    o.rowsWithoutIdentity.length === 0 &&
    o.colsWithoutIdentity.length === 0 &&
    o.asymmetric.length === 0
  );
}
