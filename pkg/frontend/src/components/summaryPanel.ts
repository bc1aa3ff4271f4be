import { ApiError, type Client, type SummaryDoc } from "../api.js";
import { el, show } from "../dom.js";
import type { TaskTracker } from "../tasks.js";

/** Build, display, and edit the per-segment summary. */
export class SummaryPanel {
  readonly root: HTMLElement;
  private readonly backendSelect: HTMLSelectElement;
  private readonly textarea: HTMLTextAreaElement;
  private readonly status: HTMLElement;
  private readonly editorRow: HTMLElement;
  private segmentId: string | null = null;
  private headVersion = 0;
  summaryText: string | null = null;

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
    private readonly onChanged: () => void,
  ) {
    this.backendSelect = el(
      "select",
      { id: "summary-backend" },
      el("option", { value: "extractive_builtin", text: "extractive (built in)" }),
      el("option", { value: "provider", text: "generative provider" }),
    );
    this.textarea = el("textarea", { id: "summary-text", rows: "5" });
    this.status = el("div", { id: "summary-status", text: "no summary yet" });
    this.editorRow = el(
      "div",
      {},
      this.textarea,
      el("button", {
        id: "save-summary",
        text: "Save summary edit",
        onclick: () => void this.run.run(this.save()),
      }),
    );
    show(this.editorRow, false);

    this.root = el(
      "section",
      { class: "panel" },
      el("h2", { text: "Summary" }),
      el(
        "div",
        { class: "toolbar" },
        this.backendSelect,
        el("button", {
          id: "build-summary",
          text: "Build summary",
          onclick: () => void this.run.run(this.build()),
        }),
      ),
      this.status,
      this.editorRow,
    );
  }

  async load(segmentId: string, hasSummary: boolean): Promise<void> {
    this.segmentId = segmentId;
    if (!hasSummary) {
      this.summaryText = null;
      this.status.textContent = "no summary yet";
      show(this.editorRow, false);
      return;
    }
    this.apply(await this.client.getSummary(segmentId));
  }

  private apply(doc: SummaryDoc): void {
    const head = doc.text.versions[doc.text.versions.length - 1];
    if (!head) return;
    this.headVersion = head.version_no;
    this.summaryText = head.text;
    this.textarea.value = head.text;
    this.status.textContent =
      `summary v${head.version_no} (${doc.backend}, from transcript ` +
      `v${doc.source_version_no})`;
    show(this.editorRow, true);
  }

  private async build(): Promise<void> {
    if (!this.segmentId) return;
    try {
      this.apply(
        await this.client.buildSummary(this.segmentId, this.backendSelect.value),
      );
    } catch (err) {
      if (err instanceof ApiError) {
        this.status.textContent = `summary failed: ${err.body.message}${
          err.body.hint ? ` (${err.body.hint})` : ""
        }`;
        return;
      }
      throw err;
    }
    this.onChanged();
  }

  private async save(): Promise<void> {
    if (!this.segmentId) return;
    await this.client.putSummary(this.segmentId, this.textarea.value, this.headVersion);
    this.apply(await this.client.getSummary(this.segmentId));
    this.onChanged();
  }
}
