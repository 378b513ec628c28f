import { describe, expect, it } from "vitest";

import {
  advance,
  clearSession,
  currentClip,
  isComplete,
  loadSession,
  markPlayed,
  newSession,
  progressLabel,
  resumeSession,
  saveSession,
  submitBlocker,
} from "../src/session.js";

const PLAYLIST = ["aa", "bb", "cc", "dd", "ee", "ff"];

class FakeStorage implements Storage {
  private data = new Map<string, string>();
  get length(): number {
    return this.data.size;
  }
  clear(): void {
    this.data.clear();
  }
  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }
  key(index: number): string | null {
    return [...this.data.keys()][index] ?? null;
  }
  removeItem(key: string): void {
    this.data.delete(key);
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

describe("session flow", () => {
  it("starts at the first clip with 1-of-n progress", () => {
    const v = newSession("s1", PLAYLIST);
    expect(currentClip(v)).toBe("aa");
    expect(progressLabel(v)).toBe("1 of 6");
    expect(isComplete(v)).toBe(false);
  });

  it("blocks submission before any playback", () => {
    const v = newSession("s1", PLAYLIST);
    expect(submitBlocker(v, 7)).toMatch(/listen/i);
    expect(submitBlocker(markPlayed(v), 7)).toBeNull();
  });

  it("rejects non-integer and out-of-range scores", () => {
    const v = markPlayed(newSession("s1", PLAYLIST));
    for (const bad of [-1, 11, 3.5, NaN]) {
      expect(submitBlocker(v, bad)).toMatch(/0 and 10/);
    }
    expect(submitBlocker(v, 0)).toBeNull();
    expect(submitBlocker(v, 10)).toBeNull();
  });

  it("advances only via advance() and resets the playback gate", () => {
    let v = markPlayed(newSession("s1", PLAYLIST));
    v = advance(v);
    expect(v.cursor).toBe(1);
    expect(v.played).toBe(false);
    expect(v.submitted).toEqual(["aa"]);
    expect(progressLabel(v)).toBe("2 of 6");
  });

  it("keeps submitted a subset of the playlist and completes at the end", () => {
    let v = newSession("s1", PLAYLIST);
    for (let i = 0; i < PLAYLIST.length; i++) {
      v = advance(markPlayed(v));
      for (const id of v.submitted) expect(PLAYLIST).toContain(id);
    }
    expect(isComplete(v)).toBe(true);
    expect(v.submitted).toEqual(PLAYLIST);
    expect(currentClip(v)).toBeNull();
    expect(advance(v)).toEqual(v); // no advance past the end
  });

  it("resumes at the first unrated clip", () => {
    const v = resumeSession("s1", PLAYLIST, ["aa", "bb"]);
    expect(currentClip(v)).toBe("cc");
    expect(v.played).toBe(false);
  });

  it("resume drops submitted ids not in the playlist", () => {
    const v = resumeSession("s1", PLAYLIST, ["aa", "zz"]);
    expect(v.submitted).toEqual(["aa"]);
    expect(currentClip(v)).toBe("bb");
  });

  it("round-trips through storage", () => {
    const store = new FakeStorage();
    let v = newSession("s9", PLAYLIST);
    v = advance(markPlayed(v));
    saveSession(store, v);
    const back = loadSession(store);
    expect(back).not.toBeNull();
    expect(back!.sessionId).toBe("s9");
    expect(currentClip(back!)).toBe("bb");
    expect(back!.played).toBe(false); // playback gate never persists
    clearSession(store);
    expect(loadSession(store)).toBeNull();
  });

  it("ignores corrupt storage payloads", () => {
    const store = new FakeStorage();
    store.setItem("mos-session", "{not json");
    expect(loadSession(store)).toBeNull();
    store.setItem("mos-session", JSON.stringify({ sessionId: 5 }));
    expect(loadSession(store)).toBeNull();
  });
});
