import { describe, expect, it } from 'vitest';
import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';

import { applyMessage, initialState, markPending } from '../src/state';
import { renderParamPanels } from '../src/params';
import { renderPlateView, statusBadge, wellColor, wellLabel } from '../src/plate';
import type { Snapshot } from '../src/types';

const fixturePath = fileURLToPath(new URL('./fixtures/snapshot.json', import.meta.url));
const fixture = JSON.parse(readFileSync(fixturePath, 'utf8')) as Snapshot;

describe('plate view', () => {
  const html = renderPlateView(fixture);

  it('renders all 96 wells', () => {
    expect(html.match(/class="well /g)).toHaveLength(96);
  });

  it('shows a Voided badge for every voided well in the snapshot', () => {
    const voided = fixture.wells.filter((w) => w.status === 'voided').length;
    expect(voided).toBeGreaterThan(0);
    expect(html.match(/status-voided/g)).toHaveLength(voided);
    expect(html.match(/>Voided</g)).toHaveLength(voided);
  });

  it('labels wells row-major A1..H12', () => {
    expect(wellLabel(0)).toBe('A1');
    expect(wellLabel(11)).toBe('A12');
    expect(wellLabel(12)).toBe('B1');
    expect(wellLabel(95)).toBe('H12');
  });

  it('maps brightness straight onto the grey ramp', () => {
    expect(wellColor({ status: 'empty', group: null, density_frac: 0, brightness: 0 })).toBe(
      'rgb(0, 0, 0)',
    );
    expect(
      wellColor({ status: 'seeded', group: 'blank', density_frac: 1, brightness: 260 }),
    ).toBe('rgb(255, 255, 255)');
  });

  it('covers every well status with a badge', () => {
    expect(statusBadge('empty')).toBe('Empty');
    expect(statusBadge('media_only')).toBe('Media');
    expect(statusBadge('seeded')).toBe('Seeded');
    expect(statusBadge('voided')).toBe('Voided');
  });

  it('includes the sim clock, robot marker, and tree status', () => {
    expect(html).toContain(`t = ${fixture.t_sim_hr.toFixed(3)} h`);
    expect(html).toContain('class="robot-marker"');
    expect(html).toContain('class="tree-status"');
    for (const entry of fixture.tree) {
      expect(html).toContain(`node-${entry.status}`);
    }
  });

  it('marks a paused clock', () => {
    const paused = renderPlateView({ ...fixture, paused: true });
    expect(paused).toContain('(paused)');
    expect(html).not.toContain('(paused)');
  });
});

describe('param panels', () => {
  const state = applyMessage(initialState(), fixture);
  const html = renderParamPanels(state);

  it('renders both panels with current values', () => {
    expect(html.match(/class="param-panel"/g)).toHaveLength(2);
    expect(html).toContain('data-edit="tip_rack_count"');
    expect(html).toContain('value="6"');
    expect(html).toContain('data-edit="desired_well"');
  });

  it('carries the documented bounds on editors', () => {
    expect(html).toContain('min="1300" max="1850"');
    expect(html).toContain('min="0" max="95"');
    expect(html).toContain('min="0" max="12"');
  });

  it('renders queues read-only', () => {
    expect(html).not.toContain('data-edit="needs_split"');
    expect(html).toContain('data-param="needs_split"');
  });

  it('flags pending edits', () => {
    const pending = renderParamPanels(markPending(state, 'tip_rack_count', 2));
    expect(pending).toContain('class="param pending" data-param="tip_rack_count"');
    expect(html).not.toContain('pending');
  });
});
