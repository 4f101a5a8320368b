import { describe, expect, it } from 'vitest';
import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';

import {
  applyMessage,
  EVENT_RING_SIZE,
  initialState,
  isPending,
  markPending,
} from '../src/state';
import type { EventFrame, Snapshot } from '../src/types';

const fixturePath = fileURLToPath(new URL('./fixtures/snapshot.json', import.meta.url));
const fixture = JSON.parse(readFileSync(fixturePath, 'utf8')) as Snapshot;

function snapshotWith(params: Record<string, number | boolean>): Snapshot {
  return { ...fixture, params: { ...fixture.params, ...params } };
}

describe('pending edits', () => {
  it('round-trips a param edit within two snapshots', () => {
    let state = applyMessage(initialState(), fixture);
    state = markPending(state, 'tip_rack_count', 3);
    expect(isPending(state, 'tip_rack_count')).toBe(true);

    state = applyMessage(state, snapshotWith({ tip_rack_count: 3 }));
    expect(isPending(state, 'tip_rack_count')).toBe(false);
    expect(state.snapshot?.params.tip_rack_count).toBe(3);
    expect(state.snapshotCount - 1).toBeLessThanOrEqual(2);
  });

  it('reflects a shaker toggle in the next snapshot', () => {
    let state = applyMessage(initialState(), fixture);
    expect(state.snapshot?.params.shaker_active).toBe(true);
    state = markPending(state, 'shaker_active', false);

    state = applyMessage(state, snapshotWith({ shaker_active: false }));
    expect(state.snapshot?.params.shaker_active).toBe(false);
    expect(isPending(state, 'shaker_active')).toBe(false);
  });

  it('accepts a clamped value after two snapshots', () => {
    let state = applyMessage(initialState(), fixture);
    state = markPending(state, 'pipette_actuator_pos', 1200);

    state = applyMessage(state, snapshotWith({ pipette_actuator_pos: 1300 }));
    expect(isPending(state, 'pipette_actuator_pos')).toBe(true);
    state = applyMessage(state, snapshotWith({ pipette_actuator_pos: 1300 }));
    expect(isPending(state, 'pipette_actuator_pos')).toBe(false);
    expect(state.snapshot?.params.pipette_actuator_pos).toBe(1300);
  });
});

describe('frames', () => {
  it('caps the event ring buffer', () => {
    let state = initialState();
    for (let i = 0; i < EVENT_RING_SIZE + 25; i += 1) {
      const frame: EventFrame & { type: 'event' } = {
        type: 'event',
        event: `e${i}`,
        t_sim_hr: i * 0.01,
      };
      state = applyMessage(state, frame);
    }
    expect(state.events).toHaveLength(EVENT_RING_SIZE);
    expect(state.events[0].event).toBe('e25');
    expect(state.events[state.events.length - 1].event).toBe(`e${EVENT_RING_SIZE + 24}`);
  });

  it('records error frames', () => {
    const state = applyMessage(initialState(), { type: 'error', reason: 'unknown param' });
    expect(state.lastError).toBe('unknown param');
  });
});
