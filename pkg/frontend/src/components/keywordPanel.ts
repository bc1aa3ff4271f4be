import { ApiError, type Client, type KeywordEntry } from "../api.js";
import { clear, el } from "../dom.js";
import type { TaskTracker } from "../tasks.js";
import { KEYWORD_COLORS, type KeywordOrigin } from "../theme.js";

export interface KeywordSelection {
  phrase: string;
  origin: KeywordOrigin;
}

/** Keyword chips: recommended ones in green, teacher-added ones in purple.
 *
 * Clicking a chip makes it the active answer keyword for question
 * generation. The add box validates through the service, which insists the
 * phrase occurs in the transcript.
 */
export class KeywordPanel {
  readonly root: HTMLElement;
  private readonly chips: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly error: HTMLElement;
  private segmentId: string | null = null;
  private entries: KeywordEntry[] = [];
  selected: KeywordSelection | null = null;

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
    private readonly onSelect: (selection: KeywordSelection) => void,
    private readonly onKeywordsChanged: () => void = () => {},
  ) {
    this.chips = el("div", { id: "keyword-chips" });
    this.input = el("input", {
      id: "custom-keyword-input",
      placeholder: "add a phrase from the transcript",
    });
    this.error = el("div", { id: "keyword-error", class: "banner-error" });
    this.error.hidden = true;

    this.root = el(
      "section",
      { class: "panel" },
      el("h2", { text: "Keywords" }),
      this.chips,
      el(
        "div",
        { class: "toolbar" },
        this.input,
        el("button", {
          id: "add-custom-keyword",
          text: "Add custom",
          onclick: () => void this.run.run(this.addCustom()),
        }),
      ),
      this.error,
    );
  }

  get keywords(): KeywordEntry[] {
    return this.entries;
  }

  async load(segmentId: string): Promise<void> {
    if (this.segmentId !== segmentId) this.selected = null;
    this.segmentId = segmentId;
    this.error.hidden = true;
    const doc = await this.client.getKeywords(segmentId);
    this.entries = [...doc.recommended, ...doc.custom];
    const kept = this.selected;
    if (
      kept &&
      !this.entries.some((e) => e.phrase === kept.phrase && e.origin === kept.origin)
    ) {
      this.selected = null;
    }
    this.render();
    this.onKeywordsChanged();
  }

  private render(): void {
    clear(this.chips);
    for (const entry of this.entries) {
      const origin = entry.origin as KeywordOrigin;
      const chip = el("button", {
        class: `kw kw-${origin}`,
        "data-phrase": entry.phrase,
        "data-origin": origin,
        "aria-pressed": String(
          this.selected?.phrase === entry.phrase && this.selected?.origin === origin,
        ),
        onclick: () => this.select(entry.phrase, origin),
        text: `${entry.phrase} (${entry.frequency})`,
      });
      chip.style.color = KEYWORD_COLORS[origin];
      this.chips.append(chip);
    }
  }

  private select(phrase: string, origin: KeywordOrigin): void {
    this.selected = { phrase, origin };
    this.render();
    this.onSelect(this.selected);
  }

  private async addCustom(): Promise<void> {
    if (!this.segmentId) return;
    const phrase = this.input.value.trim();
    if (!phrase) return;
    this.error.hidden = true;
    try {
      await this.client.addCustomKeyword(this.segmentId, phrase);
    } catch (err) {
      if (err instanceof ApiError) {
        this.error.textContent = err.body.message;
        this.error.hidden = false;
        return;
      }
      throw err;
    }
    this.input.value = "";
    await this.load(this.segmentId);
  }
}
