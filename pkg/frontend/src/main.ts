/**
 * Single-page wiring: connect, render on every frame, forward edits.
 */

import { applyMessage, initialState, markPending, PanelState } from './state';
import { renderParamPanels } from './params';
import { renderPlateView } from './plate';
import { PanelSocket } from './socket';

const WS_URL = `ws://${location.hostname}:8765/ws`;

let state: PanelState = initialState();
let socket: PanelSocket;

function render(): void {
  const params = document.getElementById('params');
  const plate = document.getElementById('plate');
  const feed = document.getElementById('events');
  const status = document.getElementById('connection');
  if (status) {
    status.textContent = state.connected ? 'connected' : 'disconnected';
    status.className = state.connected ? 'ok' : 'down';
  }
  if (params) params.innerHTML = renderParamPanels(state);
  if (plate && state.snapshot) plate.innerHTML = renderPlateView(state.snapshot);
  if (feed) {
    feed.innerHTML = state.events
      .slice(-20)
      .map((e) => `<li>${e.t_sim_hr.toFixed(3)} h ${e.event}</li>`)
      .join('');
  }
  const error = document.getElementById('error');
  if (error) error.textContent = state.lastError ?? '';
}

function wireEdits(): void {
  const params = document.getElementById('params');
  if (!params) return;
  params.addEventListener('change', (ev) => {
    const input = ev.target as HTMLInputElement;
    const name = input.dataset.edit;
    if (!name) return;
    const value = input.type === 'checkbox' ? input.checked : Number(input.value);
    state = markPending(state, name, value);
    socket.sendEdit(name, value);
    render();
  });
}

function wireCommands(): void {
  document.getElementById('pause')?.addEventListener('click', () => {
    socket.sendCommand(state.snapshot?.paused ? 'resume' : 'pause');
  });
  document.getElementById('force-split')?.addEventListener('click', () => {
    const group = (document.getElementById('split-group') as HTMLSelectElement)?.value;
    if (group) socket.sendCommand('force_split', group);
  });
}

function start(): void {
  socket = new PanelSocket(
    WS_URL,
    (msg) => {
      state = applyMessage(state, msg);
      render();
    },
    (connected) => {
      state = { ...state, connected };
      render();
    },
  );
  wireEdits();
  wireCommands();
}

if (typeof document !== 'undefined' && document.getElementById('plate')) {
  start();
}
