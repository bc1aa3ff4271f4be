import { ApiError, type Client, type Qtype, type QuestionRequest } from "../api.js";
import { clear, el, show } from "../dom.js";
import type { TaskTracker } from "../tasks.js";
import type { KeywordPanel } from "./keywordPanel.js";
import type { SummaryPanel } from "./summaryPanel.js";
import { QuestionSetView } from "./questionSet.js";

const QTYPES: Qtype[] = ["SAQ", "MCQ", "BLQ", "GFQ"];

/** Four generation tabs sharing the keyword panel and summary state.
 *
 * Short-answer and multiple-choice use the selected keyword chip; yes/no
 * needs a summary; gap-fill takes a checkbox subset of the keywords, with
 * phrases absent from the summary disabled up front.
 */
export class QuestionTabs {
  readonly root: HTMLElement;
  private readonly panes = new Map<Qtype, HTMLElement>();
  private readonly errors = new Map<Qtype, HTMLElement>();
  private readonly setMounts = new Map<Qtype, HTMLElement>();
  private readonly seedInput: HTMLInputElement;
  private gfqChoices: HTMLElement;
  private segmentId: string | null = null;
  private active: Qtype = "SAQ";

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
    private readonly keywordPanel: KeywordPanel,
    private readonly summaryPanel: SummaryPanel,
    private readonly onChanged: () => void,
  ) {
    this.seedInput = el("input", {
      id: "mcq-seed",
      type: "number",
      value: "0",
    });
    this.gfqChoices = el("div", { id: "gfq-keyword-choices" });

    const nav = el(
      "nav",
      { class: "tabs" },
      ...QTYPES.map((qtype) =>
        el("button", {
          class: "tab",
          "data-qtype": qtype,
          text: qtype,
          onclick: () => this.activate(qtype),
        }),
      ),
    );

    this.root = el("section", { class: "panel" }, el("h2", { text: "Questions" }), nav);
    for (const qtype of QTYPES) {
      const error = el("div", { class: "banner-error generate-error" });
      error.hidden = true;
      const mount = el("div", { class: "set-mount" });
      const pane = el(
        "div",
        { class: "tab-pane", "data-qtype": qtype },
        ...this.controlsFor(qtype),
        el("button", {
          class: "generate",
          id: `generate-${qtype}`,
          text: `Generate ${qtype}`,
          onclick: () => void this.run.run(this.generate(qtype)),
        }),
        error,
        mount,
      );
      this.panes.set(qtype, pane);
      this.errors.set(qtype, error);
      this.setMounts.set(qtype, mount);
      this.root.append(pane);
    }
    this.activate("SAQ");
  }

  private controlsFor(qtype: Qtype): HTMLElement[] {
    switch (qtype) {
      case "SAQ":
        return [el("p", { text: "Uses the selected keyword as the answer." })];
      case "MCQ":
        return [
          el(
            "label",
            { text: "shuffle seed " },
            this.seedInput,
          ),
        ];
      case "BLQ":
        return [el("p", { text: "Built from the segment summary." })];
      case "GFQ":
        return [
          el("p", { text: "Pick phrases to blank out of the summary:" }),
          this.gfqChoices,
        ];
    }
  }

  reset(segmentId: string): void {
    this.segmentId = segmentId;
    for (const mount of this.setMounts.values()) clear(mount);
    for (const error of this.errors.values()) error.hidden = true;
    this.refreshGfqChoices();
  }

  refreshGfqChoices(): void {
    clear(this.gfqChoices);
    const summary = this.summaryPanel.summaryText?.toLowerCase() ?? null;
    for (const entry of this.keywordPanel.keywords) {
      const usable = summary !== null && summary.includes(entry.phrase.toLowerCase());
      const box = el("input", {
        type: "checkbox",
        class: "gfq-choice",
        "data-phrase": entry.phrase,
      });
      box.disabled = !usable;
      this.gfqChoices.append(
        el(
          "label",
          { class: usable ? "gfq-label" : "gfq-label unusable" },
          box,
          ` ${entry.phrase}`,
        ),
      );
    }
  }

  private activate(qtype: Qtype): void {
    this.active = qtype;
    for (const [key, pane] of this.panes) show(pane, key === qtype);
    for (const tab of this.root.querySelectorAll<HTMLButtonElement>(".tab")) {
      tab.classList.toggle("active", tab.dataset["qtype"] === qtype);
    }
  }

  private buildRequest(qtype: Qtype): QuestionRequest {
    switch (qtype) {
      case "SAQ": {
        const selected = this.keywordPanel.selected;
        if (!selected) throw new Error("select a keyword chip first");
        return { qtype, keyword: selected.phrase };
      }
      case "MCQ": {
        const selected = this.keywordPanel.selected;
        if (!selected) throw new Error("select a keyword chip first");
        return { qtype, keyword: selected.phrase, seed: Number(this.seedInput.value) };
      }
      case "BLQ":
        return { qtype };
      case "GFQ": {
        const phrases = [
          ...this.gfqChoices.querySelectorAll<HTMLInputElement>(".gfq-choice"),
        ]
          .filter((box) => box.checked)
          .map((box) => box.dataset["phrase"] ?? "");
        return { qtype, keywords: phrases };
      }
    }
  }

  private async generate(qtype: Qtype): Promise<void> {
    if (!this.segmentId) return;
    const error = this.errors.get(qtype)!;
    const mount = this.setMounts.get(qtype)!;
    error.hidden = true;
    let request: QuestionRequest;
    try {
      request = this.buildRequest(qtype);
    } catch (err) {
      error.textContent = (err as Error).message;
      error.hidden = false;
      return;
    }
    try {
      const doc = await this.client.createQuestions(this.segmentId, request);
      clear(mount);
      mount.append(new QuestionSetView(this.client, this.run, doc, this.onChanged).root);
    } catch (err) {
      if (err instanceof ApiError) {
        error.textContent = `${err.body.message}${
          err.body.hint ? ` (${err.body.hint})` : ""
        }`;
        error.hidden = false;
        return;
      }
      throw err;
    }
    this.onChanged();
  }
}
