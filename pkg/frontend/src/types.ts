export type StudyKind = "TURING_AMD" | "TURING_NON_AMD" | "DIAGNOSIS";

export const SESSION_TOTAL = 20;

export interface Progress {
  answered: number;
  total: number;
}

/** Choice presented to the reader: display label + wire value. */
export interface Choice {
  label: string;
  value: string;
}

export interface SessionView {
  state: "question";
  sessionId: string;
  kind: StudyKind;
  progress: Progress;
  currentIndex: number;
  currentImageUrl: string;
  choices: [Choice, Choice];
}

export interface ReportView {
  state: "report";
  sessionId: string;
  kind: StudyKind;
  acc: number;
  sensitivity: number;
  specificity: number;
  confusion: number[][];
  positiveClass: string;
}

export type View = SessionView | ReportView;

export function choicesFor(kind: StudyKind): [Choice, Choice] {
  if (kind === "DIAGNOSIS") {
    return [
      { label: "AMD", value: "AMD" },
      { label: "Non-AMD", value: "NON_AMD" },
    ];
  }
  return [
    { label: "Real", value: "REAL" },
    { label: "Synthetic", value: "SYNTHETIC" },
  ];
}
