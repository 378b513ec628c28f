/**
 * DOM wiring for the listening test: welcome form -> one clip at a time
 * with mandatory playback -> integer 0-10 slider -> completion screen.
 *
 * The page never receives or renders algorithm names; everything is keyed
 * by the service's blinded clip ids.
 */
import { ApiError, MosApi } from "./api.js";
import {
  SessionView,
  advance,
  clearSession,
  currentClip,
  isComplete,
  loadSession,
  markPlayed,
  newSession,
  progressLabel,
  saveSession,
  submitBlocker,
} from "./session.js";

const api = new MosApi();
let view: SessionView | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function show(id: string): void {
  for (const pane of document.querySelectorAll<HTMLElement>(".pane")) {
    pane.hidden = pane.id !== id;
  }
}

function setMessage(text: string): void {
  const box = el<HTMLElement>("message");
  box.textContent = text;
  box.hidden = text === "";
}

function renderClip(): void {
  if (view === null) return;
  if (isComplete(view)) {
    el<HTMLElement>("session-id").textContent = view.sessionId;
    clearSession(localStorage);
    show("done-pane");
    return;
  }
  const clip = currentClip(view);
  if (clip === null) return;
  show("rating-pane");
  setMessage("");
  el<HTMLElement>("progress").textContent = progressLabel(view);
  const player = el<HTMLAudioElement>("player");
  player.src = api.clipUrl(clip, view.sessionId);
  player.load();
  const slider = el<HTMLInputElement>("score");
  slider.value = "5";
  el<HTMLElement>("score-value").textContent = "5";
  el<HTMLButtonElement>("submit").disabled = false;
}

async function startSession(): Promise<void> {
  const rater = el<HTMLInputElement>("rater").value.trim();
  if (rater === "") {
    setMessage("Please enter your listener label first.");
    return;
  }
  const button = el<HTMLButtonElement>("start");
  button.disabled = true;
  try {
    const start = await api.startSession(rater);
    view = newSession(start.session_id, start.playlist);
    saveSession(localStorage, view);
    renderClip();
  } catch (err) {
    const detail = err instanceof ApiError ? ` (${err.message})` : "";
    setMessage(`Could not reach the rating service${detail} — please retry.`);
  } finally {
    button.disabled = false;
  }
}

async function submitScore(): Promise<void> {
  if (view === null) return;
  const score = Number(el<HTMLInputElement>("score").value);
  const blocked = submitBlocker(view, score);
  if (blocked !== null) {
    setMessage(blocked);
    return;
  }
  const clip = currentClip(view);
  if (clip === null) return;
  const button = el<HTMLButtonElement>("submit");
  button.disabled = true;
  try {
    const ack = await api.submitRating(view.sessionId, clip, score);
    if ("error" in ack) {
      setMessage(ack.error);
      button.disabled = false;
      return;
    }
    view = advance(view);
    saveSession(localStorage, view);
    renderClip();
  } catch {
    setMessage("Submission failed — check your connection and try again.");
    button.disabled = false;
  }
}

function init(): void {
  el<HTMLButtonElement>("start").addEventListener("click", () => {
    void startSession();
  });
  el<HTMLButtonElement>("submit").addEventListener("click", () => {
    void submitScore();
  });
  const player = el<HTMLAudioElement>("player");
  player.addEventListener("play", () => {
    if (view !== null) view = markPlayed(view);
  });
  const slider = el<HTMLInputElement>("score");
  slider.addEventListener("input", () => {
    el<HTMLElement>("score-value").textContent = slider.value;
  });
  el<HTMLButtonElement>("restart").addEventListener("click", () => {
    clearSession(localStorage);
    view = null;
    show("welcome-pane");
  });

  const resumed = loadSession(localStorage);
  if (resumed !== null && !isComplete(resumed)) {
    view = resumed;
    renderClip();
  } else {
    show("welcome-pane");
  }
}

document.addEventListener("DOMContentLoaded", init);
