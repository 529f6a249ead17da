import { ApiClient, waitForProgress, ServiceError } from './api';
import { presentChoice } from './choices';
import { renderDiagram } from './render';
import type { DiagramDoc, SessionState } from './types';

// App shell: wires the term form, the pending-choice panel, the stage
// timeline, and the export buttons to the session protocol. All state
// lives on the server; this module only reflects it.

const api = new ApiClient('');

interface UiRefs {
  form: HTMLFormElement;
  termsInput: HTMLTextAreaElement;
  modeSelect: HTMLSelectElement;
  status: HTMLElement;
  canvas: HTMLElement;
  choicePanel: HTMLElement;
  timeline: HTMLElement;
  downloadJson: HTMLButtonElement;
  downloadDot: HTMLButtonElement;
  abort: HTMLButtonElement;
}

function refs(): UiRefs {
  const byId = (id: string) => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  return {
    form: byId('term-form') as HTMLFormElement,
    termsInput: byId('terms') as HTMLTextAreaElement,
    modeSelect: byId('mode') as HTMLSelectElement,
    status: byId('status'),
    canvas: byId('canvas'),
    choicePanel: byId('choice-panel'),
    timeline: byId('timeline'),
    downloadJson: byId('download-json') as HTMLButtonElement,
    downloadDot: byId('download-dot') as HTMLButtonElement,
    abort: byId('abort') as HTMLButtonElement,
  };
}

function parseTerms(raw: string): string[] {
  return raw
    .split('\n')
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
}

function showDiagram(ui: UiRefs, doc: DiagramDoc | null): void {
  ui.canvas.innerHTML = doc && doc.nodes.length ? renderDiagram(doc) : '<p>No diagram yet.</p>';
}

function showTimeline(ui: UiRefs, state: SessionState): void {
  ui.timeline.innerHTML = '';
  state.snapshots.forEach((snap, i) => {
    const btn = document.createElement('button');
    btn.textContent = `stage ${i + 1}`;
    btn.addEventListener('click', () => showDiagram(ui, snap));
    ui.timeline.appendChild(btn);
  });
  if (state.snapshots.length) {
    const latest = document.createElement('button');
    latest.textContent = 'latest';
    latest.addEventListener('click', () => showDiagram(ui, state.diagram ?? state.snapshots[state.snapshots.length - 1]));
    ui.timeline.appendChild(latest);
  }
}

function showChoice(ui: UiRefs, state: SessionState, onAnswer: (answer: unknown) => void): void {
  ui.choicePanel.innerHTML = '';
  const req = state.pending_choice;
  if (!req) return;
  const view = presentChoice(req);
  const heading = document.createElement('h3');
  heading.textContent = view.title;
  ui.choicePanel.appendChild(heading);
  const all = view.decline ? [...view.options, view.decline] : view.options;
  for (const opt of all) {
    const btn = document.createElement('button');
    btn.textContent = opt.label;
    btn.addEventListener('click', () => onAnswer(opt.answer));
    ui.choicePanel.appendChild(btn);
  }
}

function showProperties(state: SessionState): string {
  if (!state.properties) return '';
  const rows = state.properties.properties.map((p) => `${p.number}:${p.status}`);
  return ` — properties ${rows.join(' ')}`;
}

function download(filename: string, text: string, type: string): void {
  const a = document.createElement('a');
  a.href = URL.createObjectURL(new Blob([text], { type }));
  a.download = filename;
  a.click();
  URL.revokeObjectURL(a.href);
}

async function refresh(ui: UiRefs, sessionId: string): Promise<void> {
  const state = await waitForProgress(api, sessionId);
  ui.status.textContent = `session ${state.id}: ${state.status} (stage ${state.stage})${showProperties(state)}`;
  showDiagram(ui, state.diagram ?? state.snapshots[state.snapshots.length - 1] ?? null);
  showTimeline(ui, state);
  showChoice(ui, state, async (answer) => {
    if (!state.pending_choice) return;
    try {
      await api.answerChoice(sessionId, state.pending_choice.id, answer);
    } catch (err) {
      if (!(err instanceof ServiceError && err.status === 409)) throw err;
    }
    await refresh(ui, sessionId);
  });
  if (state.error) {
    ui.status.textContent += ` — ${state.error}`;
  }
}

export function main(): void {
  const ui = refs();
  let sessionId: string | null = null;

  ui.form.addEventListener('submit', async (ev) => {
    ev.preventDefault();
    const terms = parseTerms(ui.termsInput.value);
    if (!terms.length) {
      ui.status.textContent = 'Enter at least one term.';
      return;
    }
    try {
      const state = await api.createSession(terms, ui.modeSelect.value);
      sessionId = state.id;
      await refresh(ui, state.id);
    } catch (err) {
      ui.status.textContent = err instanceof Error ? err.message : String(err);
    }
  });

  ui.downloadJson.addEventListener('click', async () => {
    if (!sessionId) return;
    const doc = await api.getDiagram(sessionId);
    download('diagram.json', JSON.stringify(doc, null, 2), 'application/json');
  });

  ui.downloadDot.addEventListener('click', async () => {
    if (!sessionId) return;
    download('diagram.dot', await api.getDiagramDot(sessionId), 'text/vnd.graphviz');
  });

  ui.abort.addEventListener('click', async () => {
    if (!sessionId) return;
    await api.abortSession(sessionId);
    ui.status.textContent = `session ${sessionId}: aborted`;
    sessionId = null;
    ui.choicePanel.innerHTML = '';
  });
}

if (typeof document !== 'undefined' && document.getElementById('term-form')) {
  main();
}
