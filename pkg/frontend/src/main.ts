import { StudyApi } from "./api.js";
import { SessionController } from "./controller.js";
import { ReportView, SessionView, StudyKind } from "./types.js";

const api = new StudyApi("");
let controller: SessionController | null = null;

const el = (id: string) => document.getElementById(id) as HTMLElement;
const show = (id: string, on: boolean) => el(id).classList.toggle("hidden", !on);

function setError(message: string | null): void {
  const banner = el("error-banner");
  banner.textContent = message ?? "";
  show("error-banner", message !== null);
}

function sessionHash(sessionId: string, kind: StudyKind): string {
  return `#sid=${sessionId}&kind=${kind}`;
}

function parseHash(): { sid: string; kind: StudyKind } | null {
  const match = window.location.hash.match(/sid=([^&]+)&kind=([A-Z_]+)/);
  if (!match) return null;
  return { sid: match[1], kind: match[2] as StudyKind };
}

function renderQuestion(view: SessionView): void {
  show("start-screen", false);
  show("report-screen", false);
  show("question-screen", true);
  el("progress").textContent = `${view.progress.answered + 1} / ${view.progress.total}`;
  const [a, b] = view.choices;
  (el("choice-a") as HTMLButtonElement).textContent = `${a.label} (1)`;
  (el("choice-b") as HTMLButtonElement).textContent = `${b.label} (2)`;

  // preload, then swap, so latency timing starts at visible pixels
  const img = el("fundus-image") as HTMLImageElement;
  const next = new Image();
  next.onload = () => {
    img.src = next.src;
    controller?.markShown();
  };
  next.src = view.currentImageUrl;
}

function renderReport(view: ReportView): void {
  show("start-screen", false);
  show("question-screen", false);
  show("report-screen", true);
  const fmt = (x: number) => x.toFixed(2);
  el("report-summary").textContent =
    `Accuracy ${fmt(view.acc)} - Sensitivity ${fmt(view.sensitivity)} - ` +
    `Specificity ${fmt(view.specificity)} (positive: ${view.positiveClass})`;
  const [[tp, fn], [fp, tn]] = view.confusion;
  el("report-confusion").textContent =
    `confusion: [[${tp}, ${fn}], [${fp}, ${tn}]]`;
  window.location.hash = "";
}

function renderCurrent(): void {
  if (!controller) return;
  const view = controller.current();
  if (view.state === "question") renderQuestion(view);
  else renderReport(view);
}

async function startFlow(): Promise<void> {
  const kind = (el("kind-select") as HTMLSelectElement).value as StudyKind;
  const readerId = (el("reader-input") as HTMLInputElement).value.trim() || "anonymous";
  setError(null);
  try {
    controller = await SessionController.start(api, kind, readerId);
  } catch (err) {
    controller = null;
    setError(`Could not start the session: ${(err as Error).message}. Check the service and retry.`);
    return;
  }
  window.location.hash = sessionHash(controller.sessionId, kind);
  renderCurrent();
}

async function choose(which: 0 | 1): Promise<void> {
  if (!controller) return;
  const view = controller.current();
  if (view.state !== "question") return;
  setError(null);
  try {
    await controller.submitChoice(view.choices[which].value);
  } catch (err) {
    setError(`Submission failed: ${(err as Error).message}. Retry.`);
    return;
  }
  renderCurrent();
}

async function resumeFromHash(): Promise<boolean> {
  const parsed = parseHash();
  if (!parsed) return false;
  try {
    controller = await SessionController.resume(api, parsed.sid, parsed.kind);
  } catch {
    window.location.hash = "";
    return false;
  }
  renderCurrent();
  return true;
}

export function wireUp(): void {
  el("start-button").addEventListener("click", () => void startFlow());
  el("choice-a").addEventListener("click", () => void choose(0));
  el("choice-b").addEventListener("click", () => void choose(1));
  document.addEventListener("keydown", (event) => {
    if (event.key === "1") void choose(0);
    if (event.key === "2") void choose(1);
  });
  void resumeFromHash();
}

if (typeof document !== "undefined" && document.getElementById("start-button")) {
  wireUp();
}
