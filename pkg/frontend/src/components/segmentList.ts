import type { SegmentRow } from "../api.js";
import { clear, el } from "../dom.js";

function clock(seconds: number): string {
  const m = Math.floor(seconds / 60);
  const s = Math.round(seconds % 60);
  return `${m}:${String(s).padStart(2, "0")}`;
}

export class SegmentList {
  readonly root: HTMLElement;
  private readonly list: HTMLUListElement;

  constructor(private readonly onSelect: (segmentId: string) => void) {
    this.list = el("ul", { id: "segment-list" });
    this.root = el(
      "section",
      { class: "panel" },
      el("h2", { text: "Segments" }),
      this.list,
    );
  }

  render(segments: SegmentRow[]): void {
    clear(this.list);
    for (const seg of segments) {
      const button = el("button", {
        class: "segment-button",
        "data-segment-id": seg.segment_id,
        onclick: () => this.onSelect(seg.segment_id),
        text:
          `Segment ${seg.index + 1} (${clock(seg.start_s)} to ${clock(seg.end_s)}, ` +
          `v${seg.head_version}${seg.has_summary ? ", summarized" : ""})`,
      });
      this.list.append(el("li", {}, button));
    }
  }
}
