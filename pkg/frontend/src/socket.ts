/**
 * One WebSocket to the simulator; outgoing messages follow the normative
 * protocol and incoming frames are handed to a single serialized callback.
 *
 * The socket constructor is injectable so tests can drive the panel with a
 * fake transport.
 */

import type { ClientMessage, ServerMessage } from './types';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class PanelSocket {
  private socket: SocketLike;
  private open = false;
  readonly sent: ClientMessage[] = []; // outbound log, handy for debugging

  constructor(
    url: string,
    private onMessage: (msg: ServerMessage) => void,
    private onStatus: (connected: boolean) => void,
    factory?: SocketFactory,
  ) {
    const make: SocketFactory =
      factory ?? ((u) => new WebSocket(u) as unknown as SocketLike);
    this.socket = make(url);
    this.socket.onopen = () => {
      this.open = true;
      this.onStatus(true);
    };
    this.socket.onclose = () => {
      this.open = false;
      this.onStatus(false);
    };
    this.socket.onmessage = (ev) => {
      this.onMessage(JSON.parse(ev.data) as ServerMessage);
    };
  }

  get isOpen(): boolean {
    return this.open;
  }

  private sendMessage(msg: ClientMessage): void {
    if (!this.open) throw new Error('websocket not connected');
    this.sent.push(msg);
    this.socket.send(JSON.stringify(msg));
  }

  sendEdit(name: string, value: number | boolean): void {
    this.sendMessage({ type: 'set_param', name, value });
  }

  sendCommand(name: 'pause' | 'resume' | 'force_split', group?: string): void {
    const msg: ClientMessage =
      name === 'force_split' ? { type: 'command', name, group } : { type: 'command', name };
    this.sendMessage(msg);
  }

  close(): void {
    this.socket.close();
  }
}
