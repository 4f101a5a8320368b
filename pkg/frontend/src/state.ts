/**
 * Panel state: latest snapshot, pending edits, and the event ring buffer.
 *
 * Snapshot-driven read-modify cycle: the panel sends an edit, marks it
 * pending, and clears it once a snapshot echoes the (possibly clamped)
 * value. No client-side simulation.
 */

import type { EventFrame, ParamValue, ServerMessage, Snapshot } from './types';
import { isSnapshot } from './types';

export const EVENT_RING_SIZE = 100;

export interface PendingEdit {
  value: number | boolean;
  sentAtSnapshot: number; // snapshot counter when the edit was sent
}

export interface PanelState {
  connected: boolean;
  snapshot: Snapshot | null;
  snapshotCount: number;
  pendingEdits: Record<string, PendingEdit>;
  events: EventFrame[];
  lastError: string | null;
}

export function initialState(): PanelState {
  return {
    connected: false,
    snapshot: null,
    snapshotCount: 0,
    pendingEdits: {},
    events: [],
    lastError: null,
  };
}

function valuesMatch(pending: number | boolean, current: ParamValue): boolean {
  if (typeof current === 'boolean' || typeof pending === 'boolean') {
    return Boolean(pending) === Boolean(current);
  }
  if (Array.isArray(current)) return false;
  return Math.abs(Number(pending) - Number(current)) < 1e-9;
}

/** Apply one server frame; updates are serialized per incoming message. */
export function applyMessage(state: PanelState, msg: ServerMessage): PanelState {
  if (isSnapshot(msg)) {
    const next: PanelState = {
      ...state,
      snapshot: msg,
      snapshotCount: state.snapshotCount + 1,
      pendingEdits: { ...state.pendingEdits },
    };
    for (const [name, edit] of Object.entries(next.pendingEdits)) {
      const current = msg.params[name];
      // acknowledged once any later snapshot carries the edited parameter;
      // the server may clamp, so presence of a fresh value clears the edit
      if (current !== undefined && valuesMatch(edit.value, current)) {
        delete next.pendingEdits[name];
      } else if (next.snapshotCount - edit.sentAtSnapshot >= 2) {
        // clamped to a different value: accept the server's answer
        delete next.pendingEdits[name];
      }
    }
    return next;
  }
  if (msg.type === 'error') {
    return { ...state, lastError: msg.reason };
  }
  // event frame: append to the ring buffer
  const events = [...state.events, msg as EventFrame];
  if (events.length > EVENT_RING_SIZE) events.splice(0, events.length - EVENT_RING_SIZE);
  return { ...state, events };
}

export function markPending(
  state: PanelState,
  name: string,
  value: number | boolean,
): PanelState {
  return {
    ...state,
    pendingEdits: {
      ...state.pendingEdits,
      [name]: { value, sentAtSnapshot: state.snapshotCount },
    },
  };
}

export function isPending(state: PanelState, name: string): boolean {
  return name in state.pendingEdits;
}
