/**
 * Plate view: the 8x12 well grid colored by brightness, with status badges,
 * the robot XY marker, and the behavior-tree status list.
 */

import type { Snapshot, WellView } from './types';
import { escapeHtml } from './params';

export const ROWS = 8;
export const COLS = 12;
const ROW_LETTERS = 'ABCDEFGH';

export function wellLabel(index: number): string {
  const row = Math.floor(index / COLS);
  const col = index % COLS;
  return `${ROW_LETTERS[row]}${col + 1}`;
}

/** Grey ramp from the brightness channel (0-255 straight through). */
export function wellColor(well: WellView): string {
  const v = Math.max(0, Math.min(255, Math.round(well.brightness)));
  return `rgb(${v}, ${v}, ${v})`;
}

export function statusBadge(status: WellView['status']): string {
  switch (status) {
    case 'media_only':
      return 'Media';
    case 'seeded':
      return 'Seeded';
    case 'voided':
      return 'Voided';
    default:
      return 'Empty';
  }
}

function renderWell(well: WellView, index: number): string {
  const badge = statusBadge(well.status);
  const group = well.group ? ` data-group="${escapeHtml(well.group)}"` : '';
  return (
    `<div class="well status-${well.status}" data-well="${index}"${group} ` +
    `style="background:${wellColor(well)}" title="${wellLabel(index)}">` +
    `<span class="badge">${badge}</span></div>`
  );
}

function renderTree(snapshot: Snapshot): string {
  const items = snapshot.tree
    .map(
      (entry) =>
        `<li class="node-${entry.status}">${escapeHtml(entry.name)}` +
        `<span class="status">${entry.status}</span></li>`,
    )
    .join('');
  return `<ul class="tree-status">${items}</ul>`;
}

export function renderPlateView(snapshot: Snapshot): string {
  const wells = snapshot.wells.map((w, i) => renderWell(w, i)).join('');
  const [x, y] = snapshot.robot;
  const marker =
    `<div class="robot-marker" data-x="${x.toFixed(4)}" data-y="${y.toFixed(4)}">` +
    `robot (${x.toFixed(3)}, ${y.toFixed(3)}) m</div>`;
  const clock = `<div class="sim-clock">t = ${snapshot.t_sim_hr.toFixed(3)} h` +
    (snapshot.paused ? ' (paused)' : '') + `</div>`;
  return (
    `<section class="plate-view">${clock}` +
    `<div class="well-grid" style="grid-template-columns:repeat(${COLS},1fr)">${wells}</div>` +
    `${marker}${renderTree(snapshot)}</section>`
  );
}
