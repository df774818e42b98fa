import { ApiError, StudyApi } from "./api.js";
import { Choice, SESSION_TOTAL, StudyKind, View, choicesFor } from "./types.js";

/** Drives one blinded session against the service.
 *
 * The service is the only source of truth: every view is derived from its
 * responses, an in-flight guard makes double submissions no-ops, and a
 * SequenceError resyncs from the server cursor instead of re-posting.
 */
export class SessionController {
  private shownAt = 0;
  private inFlight = false;
  /** POSTs issued to /responses; a completed session sends exactly 20. */
  postCount = 0;

  private constructor(
    private api: StudyApi,
    readonly sessionId: string,
    readonly kind: StudyKind,
    private view: View,
  ) {}

  static async start(
    api: StudyApi,
    kind: StudyKind,
    readerId: string,
    seed: number = Math.floor(Math.random() * 2 ** 31),
  ): Promise<SessionController> {
    const created = await api.createSession(kind, readerId, seed);
    const controller = new SessionController(api, created.id, kind, {
      state: "question",
      sessionId: created.id,
      kind,
      progress: { answered: 0, total: SESSION_TOTAL },
      currentIndex: 0,
      currentImageUrl: "",
      choices: choicesFor(kind),
    });
    await controller.refreshFromServer();
    return controller;
  }

  /** Rebuild a view for an existing session at the server's cursor. */
  static async resume(
    api: StudyApi,
    sessionId: string,
    kind: StudyKind,
  ): Promise<SessionController> {
    const controller = new SessionController(api, sessionId, kind, {
      state: "question",
      sessionId,
      kind,
      progress: { answered: 0, total: SESSION_TOTAL },
      currentIndex: 0,
      currentImageUrl: "",
      choices: choicesFor(kind),
    });
    await controller.refreshFromServer();
    return controller;
  }

  current(): View {
    return this.view;
  }

  choices(): [Choice, Choice] {
    return choicesFor(this.kind);
  }

  /** The reader has seen the image; latency is measured from here. */
  markShown(now: number = Date.now()): void {
    this.shownAt = now;
  }

  private async refreshFromServer(): Promise<void> {
    const next = await this.api.nextItem(this.sessionId);
    if ("done" in next) {
      await this.loadReport();
      return;
    }
    this.view = {
      state: "question",
      sessionId: this.sessionId,
      kind: this.kind,
      progress: { answered: next.index, total: SESSION_TOTAL },
      currentIndex: next.index,
      currentImageUrl: this.api.imageUrl(next.image_url),
      choices: choicesFor(this.kind),
    };
    this.markShown();
  }

  private async loadReport(): Promise<void> {
    const body = await this.api.report(this.sessionId);
    this.view = {
      state: "report",
      sessionId: this.sessionId,
      kind: this.kind,
      acc: body.acc,
      sensitivity: body.sensitivity,
      specificity: body.specificity,
      confusion: body.confusion,
      positiveClass: body.positive_class,
    };
  }

  /** Submit a choice for the current item; returns the next view.
   *
   * Calls while a submission is in flight (double-clicks) return the
   * current view without issuing another POST.
   */
  async submitChoice(choiceValue: string, now: number = Date.now()): Promise<View> {
    if (this.view.state !== "question" || this.inFlight) {
      return this.view;
    }
    const index = this.view.currentIndex;
    const latency = Math.max(0, now - this.shownAt);
    this.inFlight = true;
    try {
      this.postCount += 1;
      await this.api.recordResponse(this.sessionId, index, choiceValue, latency);
      await this.refreshFromServer();
    } catch (err) {
      if (err instanceof ApiError && (err.code === "SequenceError" || err.code === "DuplicateResponse")) {
        // server cursor moved without us; resync instead of re-posting
        await this.refreshFromServer();
      } else {
        throw err;
      }
    } finally {
      this.inFlight = false;
    }
    return this.view;
  }
}
