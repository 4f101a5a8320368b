/**
 * Wire types for the simulator's WebSocket protocol.
 *
 * The panel never fabricates state: everything rendered originates from
 * these server frames.
 */

export type WellStatus = 'empty' | 'media_only' | 'seeded' | 'voided';

export interface WellView {
  status: WellStatus;
  group: string | null;
  density_frac: number;
  brightness: number;
}

export interface TreeEntry {
  name: string;
  status: 'success' | 'failure' | 'running';
}

export type ParamValue = number | boolean | number[];

export interface Snapshot {
  type: 'snapshot';
  t_sim_hr: number;
  params: Record<string, ParamValue>;
  wells: WellView[];
  robot: [number, number, number];
  tree: TreeEntry[];
  recent_events: EventFrame[];
  paused: boolean;
}

export interface EventFrame {
  type?: 'event';
  event: string;
  t_sim_hr: number;
  [key: string]: unknown;
}

export interface ErrorFrame {
  type: 'error';
  reason: string;
}

export type ServerMessage = Snapshot | (EventFrame & { type: 'event' }) | ErrorFrame;

export interface SetParamMessage {
  type: 'set_param';
  name: string;
  value: number | boolean;
}

export interface CommandMessage {
  type: 'command';
  name: 'pause' | 'resume' | 'force_split';
  group?: string;
}

export type ClientMessage = SetParamMessage | CommandMessage;

export function isSnapshot(msg: ServerMessage): msg is Snapshot {
  return msg.type === 'snapshot';
}

export function isErrorFrame(msg: ServerMessage): msg is ErrorFrame {
  return msg.type === 'error';
}
