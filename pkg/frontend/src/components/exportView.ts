import type { Client, ExportEntry } from "../api.js";
import { clear, el } from "../dom.js";
import type { TaskTracker } from "../tasks.js";
import { questionText } from "./questionSet.js";

/** Accepted questions of the current segment with provenance flags. */
export class ExportView {
  readonly root: HTMLElement;
  private readonly body: HTMLTableSectionElement;
  private readonly empty: HTMLElement;
  private segmentId: string | null = null;

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
  ) {
    this.body = el("tbody");
    this.empty = el("p", { id: "export-empty", text: "nothing accepted yet" });
    this.root = el(
      "section",
      { class: "panel" },
      el("h2", { text: "Export" }),
      el("button", {
        id: "refresh-export",
        text: "Refresh",
        onclick: () => void this.run.run(this.refresh()),
      }),
      this.empty,
      el(
        "table",
        { id: "export-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", { text: "type" }),
            el("th", { text: "question" }),
            el("th", { text: "source" }),
            el("th", { text: "stale" }),
          ),
        ),
        this.body,
      ),
    );
  }

  setSegment(segmentId: string): void {
    this.segmentId = segmentId;
    clear(this.body);
    this.empty.hidden = false;
  }

  async refresh(): Promise<void> {
    if (!this.segmentId) return;
    const entries = await this.client.exportSegment(this.segmentId);
    this.render(entries);
  }

  private render(entries: ExportEntry[]): void {
    clear(this.body);
    this.empty.hidden = entries.length > 0;
    for (const entry of entries) {
      this.body.append(
        el(
          "tr",
          { class: "export-row", "data-qtype": entry.qtype },
          el("td", { text: entry.qtype }),
          el("td", { text: questionText(entry.qtype, entry.payload) }),
          el("td", { text: entry.source }),
          el("td", { text: entry.provenance.stale ? "yes" : "no" }),
        ),
      );
    }
  }
}
