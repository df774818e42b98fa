import { beforeEach, describe, expect, it } from "vitest";

import { StudyApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { choicesFor } from "../src/types.js";

/** In-memory fake of the study service, faithful to its wire contract. */
class FakeService {
  cursor = 0;
  total = 20;
  responses: Array<{ index: number; choice: string }> = [];
  postCount = 0;
  failNextResponseWith: { status: number; code: string } | null = null;

  fetch = async (url: string | URL | Request, init?: RequestInit): Promise<Response> => {
    const path = String(url);
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (path.endsWith("/sessions") && init?.method === "POST") {
      return json({ id: "fake123", kind: "TURING_AMD", total: this.total });
    }
    if (path.endsWith("/next")) {
      if (this.cursor >= this.total) return json({ done: true });
      return json({ index: this.cursor, image_url: `/images/h${this.cursor}` });
    }
    if (path.endsWith("/responses")) {
      this.postCount += 1;
      if (this.failNextResponseWith) {
        const fail = this.failNextResponseWith;
        this.failNextResponseWith = null;
        return json({ code: fail.code, message: fail.code }, fail.status);
      }
      const body = JSON.parse(String(init?.body));
      if (body.index !== this.cursor) {
        return json({ code: "SequenceError", message: "out of order" }, 409);
      }
      this.responses.push({ index: body.index, choice: body.choice });
      this.cursor += 1;
      return json({
        ok: true,
        cursor: this.cursor,
        state: this.cursor >= this.total ? "COMPLETE" : "OPEN",
      });
    }
    if (path.endsWith("/report")) {
      if (this.cursor < this.total) {
        return json({ code: "NotComplete", message: "open" }, 409);
      }
      return json({
        session_id: "fake123",
        kind: "TURING_AMD",
        positive_class: "SYNTHETIC",
        acc: 0.5,
        sensitivity: 0,
        specificity: 1,
        confusion: [
          [0, 10],
          [0, 10],
        ],
      });
    }
    return json({ code: "NotFound", message: path }, 404);
  };
}

describe("SessionController", () => {
  let service: FakeService;
  let api: StudyApi;

  beforeEach(() => {
    service = new FakeService();
    api = new StudyApi("http://svc", service.fetch);
  });

  it("starts at item 0 with 20-item progress", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    const view = controller.current();
    expect(view.state).toBe("question");
    if (view.state === "question") {
      expect(view.progress).toEqual({ answered: 0, total: 20 });
      expect(view.currentImageUrl).toBe("http://svc/images/h0");
    }
  });

  it("maps choice labels per kind without exposing truth", () => {
    expect(choicesFor("TURING_AMD").map((c) => c.label)).toEqual(["Real", "Synthetic"]);
    expect(choicesFor("DIAGNOSIS").map((c) => c.label)).toEqual(["AMD", "Non-AMD"]);
  });

  it("surfaces service failure on start without creating state", async () => {
    const failing = new StudyApi("http://svc", async () => {
      throw new TypeError("fetch failed");
    });
    await expect(SessionController.start(failing, "TURING_AMD", "r1", 7)).rejects.toThrow(
      "fetch failed",
    );
  });

  it("advances through all items and shows the report at 20/20", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    for (let i = 0; i < 20; i++) {
      const view = controller.current();
      expect(view.state).toBe("question");
      await controller.submitChoice("REAL");
    }
    const done = controller.current();
    expect(done.state).toBe("report");
    if (done.state === "report") {
      expect(done.acc).toBe(0.5);
      expect(done.specificity).toBe(1);
    }
    expect(service.postCount).toBe(20);
    expect(controller.postCount).toBe(20);
  });

  it("ignores a second submission while one is in flight", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    const [first, second] = await Promise.all([
      controller.submitChoice("REAL"),
      controller.submitChoice("REAL"),
    ]);
    expect(service.postCount).toBe(1);
    expect(service.cursor).toBe(1);
    expect([first.state, second.state]).toEqual(["question", "question"]);
  });

  it("resyncs from the server cursor on SequenceError", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    // server moved ahead behind our back (e.g. an ack was lost)
    service.responses.push({ index: 0, choice: "REAL" });
    service.cursor = 1;
    const view = await controller.submitChoice("SYNTHETIC");
    expect(view.state).toBe("question");
    if (view.state === "question") {
      expect(view.currentIndex).toBe(1);
    }
    // the mismatched POST must not have recorded anything new
    expect(service.responses).toHaveLength(1);
  });

  it("resumes mid-session at the server cursor", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    for (let i = 0; i < 7; i++) await controller.submitChoice("REAL");

    const resumed = await SessionController.resume(api, "fake123", "TURING_AMD");
    const view = resumed.current();
    expect(view.state).toBe("question");
    if (view.state === "question") {
      expect(view.currentIndex).toBe(7);
      expect(view.progress.answered).toBe(7);
    }
  });

  it("resuming a finished session goes straight to the report", async () => {
    const controller = await SessionController.start(api, "TURING_AMD", "r1", 7);
    for (let i = 0; i < 20; i++) await controller.submitChoice("REAL");
    const resumed = await SessionController.resume(api, "fake123", "TURING_AMD");
    expect(resumed.current().state).toBe("report");
  });
});
