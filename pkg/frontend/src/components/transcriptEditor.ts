import { ApiError, type Client, type VersionMeta } from "../api.js";
import { el, show } from "../dom.js";
import type { TaskTracker } from "../tasks.js";

/** Transcript text editor with a version history dropdown.
 *
 * Saving always appends on top of the segment head: the edit is sent with
 * the head version known at load time, and the service rejects it with a
 * conflict when someone else moved the head first. The conflict banner then
 * shows the stored version so the teacher can reload before retrying.
 */
export class TranscriptEditor {
  readonly root: HTMLElement;
  private readonly versionSelect: HTMLSelectElement;
  private readonly textarea: HTMLTextAreaElement;
  private readonly banner: HTMLElement;
  private segmentId: string | null = null;
  private headVersion = 0;

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
    private readonly onSaved: () => void,
  ) {
    this.versionSelect = el("select", {
      id: "version-select",
      onchange: () =>
        void this.run.run(this.loadVersion(Number(this.versionSelect.value))),
    });
    this.textarea = el("textarea", { id: "transcript-text", rows: "8" });
    this.banner = el("div", { id: "conflict-banner", class: "banner-error" });
    show(this.banner, false);

    this.root = el(
      "section",
      { class: "panel" },
      el("h2", { text: "Transcript" }),
      el(
        "div",
        { class: "toolbar" },
        el("label", { for: "version-select", text: "Version" }),
        this.versionSelect,
        el("button", {
          id: "save-transcript",
          text: "Save edit",
          onclick: () => void this.run.run(this.save()),
        }),
      ),
      this.banner,
      this.textarea,
    );
  }

  async load(segmentId: string): Promise<void> {
    this.segmentId = segmentId;
    show(this.banner, false);
    const [text, versions] = await Promise.all([
      this.client.getText(segmentId),
      this.client.listVersions(segmentId),
    ]);
    this.headVersion = text.head_version;
    this.textarea.value = text.text;
    this.renderVersions(versions, text.version_no);
  }

  private renderVersions(versions: VersionMeta[], selected: number): void {
    this.versionSelect.replaceChildren(
      ...versions.map((v) =>
        el("option", {
          value: String(v.version_no),
          text: `v${v.version_no} (${v.author})`,
        }),
      ),
    );
    this.versionSelect.value = String(selected);
  }

  private async loadVersion(versionNo: number): Promise<void> {
    if (!this.segmentId) return;
    const text = await this.client.getText(this.segmentId, versionNo);
    this.textarea.value = text.text;
    this.headVersion = text.head_version;
  }

  private async save(): Promise<void> {
    if (!this.segmentId) return;
    show(this.banner, false);
    try {
      await this.client.putText(this.segmentId, this.textarea.value, this.headVersion);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.banner.textContent =
          `Edit conflict: the transcript is at version ${err.body.current_version}; ` +
          "reload the segment before saving again.";
        show(this.banner, true);
        return;
      }
      throw err;
    }
    await this.load(this.segmentId);
    this.onSaved();
  }
}
