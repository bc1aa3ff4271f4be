import type { VideoRow } from "../api.js";
import { el } from "../dom.js";

export class VideoPicker {
  readonly root: HTMLElement;
  private readonly select: HTMLSelectElement;

  constructor(onSelect: (videoId: string) => void) {
    this.select = el("select", {
      id: "video-picker",
      onchange: () => {
        if (this.select.value) onSelect(this.select.value);
      },
    });
    this.root = el(
      "section",
      { class: "panel" },
      el("label", { for: "video-picker", text: "Video" }),
      this.select,
    );
  }

  render(videos: VideoRow[]): void {
    this.select.replaceChildren(
      el("option", { value: "", text: "choose a video" }),
      ...videos.map((v) =>
        el("option", {
          value: v.video_id,
          text: `${v.title} (${v.segment_count} segments)`,
        }),
      ),
    );
  }
}
