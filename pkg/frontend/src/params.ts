/**
 * Parameter metadata and the two editor panels.
 *
 * Renderers return HTML strings so they stay testable without a DOM; main.ts
 * injects them and wires the input events.
 */

import type { ParamValue } from './types';
import type { PanelState } from './state';
import { isPending } from './state';

export interface ParamMeta {
  name: string;
  kind: 'int' | 'float' | 'bool' | 'queue';
  min?: number;
  max?: number;
  readonly?: boolean;
}

export const EXPERIMENT_PARAMS: ParamMeta[] = [
  { name: 'tip_rack_count', kind: 'int', min: 0, max: 12 },
  { name: 'holding_pipette', kind: 'bool' },
  { name: 'pipette_status', kind: 'int', min: 0, max: 4 },
  { name: 'pipette_actuator_pos', kind: 'int', min: 1300, max: 1850 },
  { name: 'needs_split', kind: 'queue', readonly: true },
  { name: 'needs_media', kind: 'queue', readonly: true },
  { name: 'needs_yeast', kind: 'queue', readonly: true },
  { name: 'shaker_active', kind: 'bool' },
];

export const PERCEPTION_PARAMS: ParamMeta[] = [
  { name: 'target', kind: 'int', min: 0, max: 4 },
  { name: 'plate_type', kind: 'int', min: 0, max: 2 },
  { name: 'desired_well', kind: 'int', min: 0, max: 95 },
  { name: 'april_tag_id', kind: 'int', min: 0, max: 20 },
  { name: 'plate_length_offset', kind: 'float' },
  { name: 'plate_width_offset', kind: 'float' },
  { name: 'plate_left_correction', kind: 'float' },
  { name: 'plate_top_correction', kind: 'float' },
  { name: 'tag_offset_x', kind: 'float' },
  { name: 'tag_offset_y', kind: 'float' },
  { name: 'using_homography', kind: 'bool' },
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function formatValue(value: ParamValue | undefined): string {
  if (value === undefined) return '';
  if (Array.isArray(value)) return `[${value.join(', ')}]`;
  return String(value);
}

function renderEditor(meta: ParamMeta, value: ParamValue | undefined, pending: boolean): string {
  const name = escapeHtml(meta.name);
  const pendingCls = pending ? ' pending' : '';
  if (meta.kind === 'queue' || meta.readonly) {
    return `<div class="param readonly${pendingCls}" data-param="${name}">` +
      `<label>${name}</label><span class="value">${escapeHtml(formatValue(value))}</span></div>`;
  }
  if (meta.kind === 'bool') {
    const checked = value ? ' checked' : '';
    return `<div class="param${pendingCls}" data-param="${name}">` +
      `<label>${name}</label><input type="checkbox" data-edit="${name}"${checked}></div>`;
  }
  const bounds =
    meta.min !== undefined ? ` min="${meta.min}" max="${meta.max}"` : '';
  const step = meta.kind === 'int' ? ' step="1"' : ' step="any"';
  return `<div class="param${pendingCls}" data-param="${name}">` +
    `<label>${name}</label>` +
    `<input type="number" data-edit="${name}"${bounds}${step} value="${formatValue(value)}">` +
    `</div>`;
}

function renderPanel(title: string, metas: ParamMeta[], state: PanelState): string {
  const snapshot = state.snapshot;
  const rows = metas
    .map((meta) =>
      renderEditor(meta, snapshot?.params[meta.name], isPending(state, meta.name)),
    )
    .join('');
  return `<section class="param-panel"><h2>${escapeHtml(title)}</h2>${rows}</section>`;
}

/** Experiment-state params on the left, perception params on the right. */
export function renderParamPanels(state: PanelState): string {
  return (
    renderPanel('Experiment state', EXPERIMENT_PARAMS, state) +
    renderPanel('Perception', PERCEPTION_PARAMS, state)
  );
}
