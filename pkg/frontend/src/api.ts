/**
 * Typed client for the listening-test service API.
 *
 * All responses are validated with zod so a misbehaving server surfaces
 * as a clear error instead of undefined property access downstream.
 */
import { z } from "zod";

const sessionSchema = z.object({
  session_id: z.string().min(1),
  playlist: z.array(z.string().min(1)).min(1),
});

const ratingAckSchema = z.union([
  z.object({ ok: z.literal(true) }),
  z.object({ error: z.string() }),
]);

export type SessionStart = z.infer<typeof sessionSchema>;
export type RatingAck = z.infer<typeof ratingAckSchema>;

export class ApiError extends Error {
  constructor(message: string, public status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

export class MosApi {
  constructor(private baseUrl: string = "") {}

  async startSession(rater: string): Promise<SessionStart> {
    const res = await fetch(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rater }),
    });
    if (!res.ok) {
      throw new ApiError(`session request failed (${res.status})`, res.status);
    }
    return sessionSchema.parse(await res.json());
  }

  /** URL the <audio> element streams a blinded clip from. */
  clipUrl(clipId: string, sessionId: string): string {
    const q = new URLSearchParams({ session_id: sessionId });
    return `${this.baseUrl}/api/clips/${clipId}?${q}`;
  }

  async submitRating(
    sessionId: string,
    clipId: string,
    score: number,
  ): Promise<RatingAck> {
    const res = await fetch(`${this.baseUrl}/api/ratings`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        session_id: sessionId,
        clip_id: clipId,
        score,
        client_ts: Date.now() / 1000,
      }),
    });
    if (!res.ok) {
      throw new ApiError(`rating request failed (${res.status})`, res.status);
    }
    return ratingAckSchema.parse(await res.json());
  }
}
