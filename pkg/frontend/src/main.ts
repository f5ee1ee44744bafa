import { ConvSearchClient } from './api.js';
import { renderApp } from './render.js';
import { SessionStore } from './state.js';

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get('api') ?? 'http://127.0.0.1:8000';

const client = new ConvSearchClient(baseUrl);
const store = new SessionStore(client);

const chat = document.getElementById('chat')!;
const form = document.getElementById('turn-form') as HTMLFormElement;
const input = document.getElementById('utterance') as HTMLInputElement;
const submit = document.getElementById('submit') as HTMLButtonElement;
const newSessionBtn = document.getElementById('new-session') as HTMLButtonElement;
const explainToggle = document.getElementById('explain-toggle') as HTMLInputElement;
const sessionLabel = document.getElementById('session-label')!;

function sync() {
  const state = store.state;
  chat.innerHTML = renderApp(state);
  submit.disabled = state.pending || !input.value.trim() || !state.sessionId;
  input.disabled = state.pending;
  sessionLabel.textContent = state.sessionId ? `session ${state.sessionId.slice(0, 8)}` : 'no session';
  chat.scrollTop = chat.scrollHeight;
  const retry = document.getElementById('new-session-retry');
  if (retry) retry.addEventListener('click', () => store.newSession());
}

store.subscribe(sync);

form.addEventListener('submit', async (event) => {
  event.preventDefault();
  const utterance = input.value;
  if (!utterance.trim()) return;
  await store.submitTurn(utterance);
  if (!store.state.toast) input.value = '';
  sync();
});

input.addEventListener('input', () => {
  submit.disabled = store.state.pending || !input.value.trim() || !store.state.sessionId;
});

newSessionBtn.addEventListener('click', () => store.newSession());
explainToggle.addEventListener('change', () => store.toggleExplain());

store.newSession().then(sync);
