/**
 * Pure session state for one rater: playlist cursor, rated set, and the
 * listen-before-rate gate. No DOM or network access here, so the whole
 * flow is unit-testable.
 *
 * Invariants kept by construction:
 *  - cursor only advances after a successful submission,
 *  - submitted is always a subset of the playlist,
 *  - only integer scores in [0, 10] pass validation.
 */

export interface SessionView {
  sessionId: string;
  playlist: string[];
  /** blinded ids already rated in this session */
  submitted: string[];
  /** index of the clip currently being rated */
  cursor: number;
  /** whether the current clip has been played at least once */
  played: boolean;
}

export function newSession(sessionId: string, playlist: string[]): SessionView {
  return { sessionId, playlist: [...playlist], submitted: [], cursor: 0, played: false };
}

export function currentClip(view: SessionView): string | null {
  return view.cursor < view.playlist.length ? view.playlist[view.cursor]! : null;
}

export function isComplete(view: SessionView): boolean {
  return view.cursor >= view.playlist.length;
}

export function progressLabel(view: SessionView): string {
  const pos = Math.min(view.cursor + 1, view.playlist.length);
  return `${pos} of ${view.playlist.length}`;
}

export function markPlayed(view: SessionView): SessionView {
  return { ...view, played: true };
}

/** Reason the rating cannot be submitted yet, or null if it can. */
export function submitBlocker(view: SessionView, score: number): string | null {
  if (isComplete(view)) return "session already complete";
  if (!view.played) return "Please listen to the clip before rating it.";
  if (!Number.isInteger(score) || score < 0 || score > 10) {
    return "Score must be a whole number between 0 and 10.";
  }
  return null;
}

/** Advance past the current clip after the service acknowledged its rating. */
export function advance(view: SessionView): SessionView {
  const clip = currentClip(view);
  if (clip === null) return view;
  const submitted = view.submitted.includes(clip)
    ? view.submitted
    : [...view.submitted, clip];
  return { ...view, submitted, cursor: view.cursor + 1, played: false };
}

/**
 * Rebuild a view from persisted state: resume at the first clip of the
 * service-issued playlist that has no submitted rating. Ids recorded as
 * submitted but no longer in the playlist are dropped.
 */
export function resumeSession(
  sessionId: string,
  playlist: string[],
  submitted: string[],
): SessionView {
  const known = submitted.filter((id) => playlist.includes(id));
  let cursor = playlist.findIndex((id) => !known.includes(id));
  if (cursor < 0) cursor = playlist.length;
  return { sessionId, playlist: [...playlist], submitted: known, cursor, played: false };
}

const STORAGE_KEY = "mos-session";

interface Persisted {
  sessionId: string;
  playlist: string[];
  submitted: string[];
}

export function saveSession(store: Storage, view: SessionView): void {
  const data: Persisted = {
    sessionId: view.sessionId,
    playlist: view.playlist,
    submitted: view.submitted,
  };
  store.setItem(STORAGE_KEY, JSON.stringify(data));
}

export function loadSession(store: Storage): SessionView | null {
  const raw = store.getItem(STORAGE_KEY);
  if (raw === null) return null;
  try {
    const data = JSON.parse(raw) as Persisted;
    if (typeof data.sessionId !== "string" || !Array.isArray(data.playlist)) {
      return null;
    }
    return resumeSession(data.sessionId, data.playlist, data.submitted ?? []);
  } catch {
    return null;
  }
}

export function clearSession(store: Storage): void {
  store.removeItem(STORAGE_KEY);
}
