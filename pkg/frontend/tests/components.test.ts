import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiError, type Client } from "../src/api.js";
import { KeywordPanel } from "../src/components/keywordPanel.js";
import { QuestionSetView } from "../src/components/questionSet.js";
import { QuestionTabs } from "../src/components/questionTabs.js";
import { SummaryPanel } from "../src/components/summaryPanel.js";
import { TranscriptEditor } from "../src/components/transcriptEditor.js";
import { TaskTracker } from "../src/tasks.js";
import { KEYWORD_COLORS } from "../src/theme.js";
import {
  SEGMENT_ID,
  blqSet,
  keywordsDoc,
  saqSet,
  textResponse,
  versionMeta,
} from "./fixtures.js";

function stubClient(overrides: Record<string, unknown>): Client {
  return overrides as unknown as Client;
}

function query<T extends Element>(root: HTMLElement, selector: string): T {
  const node = root.querySelector(selector);
  if (!node) throw new Error(`missing ${selector}`);
  return node as T;
}

let tracker: TaskTracker;

beforeEach(() => {
  tracker = new TaskTracker();
});

describe("KeywordPanel", () => {
  it("colors recommended chips green and custom chips purple", async () => {
    const client = stubClient({ getKeywords: async () => keywordsDoc() });
    const panel = new KeywordPanel(client, tracker, () => {});
    await panel.load(SEGMENT_ID);

    const recommended = query<HTMLElement>(panel.root, ".kw-recommended");
    const custom = query<HTMLElement>(panel.root, ".kw-custom");
    expect(recommended.style.color).toBe(KEYWORD_COLORS.recommended);
    expect(custom.style.color).toBe(KEYWORD_COLORS.custom);
    expect(recommended.dataset["origin"]).toBe("recommended");
    expect(custom.dataset["origin"]).toBe("custom");
  });

  it("marks the clicked chip selected and reports it", async () => {
    const seen: string[] = [];
    const client = stubClient({ getKeywords: async () => keywordsDoc() });
    const panel = new KeywordPanel(client, tracker, (sel) =>
      seen.push(`${sel.phrase}:${sel.origin}`),
    );
    await panel.load(SEGMENT_ID);

    query<HTMLButtonElement>(panel.root, ".kw-custom").click();
    await tracker.idle();
    expect(seen).toEqual(["core products:custom"]);
    const pressed = panel.root.querySelectorAll('.kw[aria-pressed="true"]');
    expect(pressed).toHaveLength(1);
    expect((pressed[0] as HTMLElement).dataset["phrase"]).toBe("core products");
  });

  it("adds a custom phrase through the service and reloads", async () => {
    const doc = keywordsDoc();
    const addCustomKeyword = vi.fn(async (_seg: string, phrase: string) => {
      doc.custom.push({
        phrase,
        kind: "noun_phrase",
        frequency: 1,
        first_offset: 5,
        origin: "custom",
      });
      return doc.custom[doc.custom.length - 1];
    });
    const client = stubClient({
      getKeywords: async () => doc,
      addCustomKeyword,
    });
    const panel = new KeywordPanel(client, tracker, () => {});
    await panel.load(SEGMENT_ID);

    query<HTMLInputElement>(panel.root, "#custom-keyword-input").value = "source code";
    query<HTMLButtonElement>(panel.root, "#add-custom-keyword").click();
    await tracker.idle();

    expect(addCustomKeyword).toHaveBeenCalledWith(SEGMENT_ID, "source code");
    const phrases = [...panel.root.querySelectorAll<HTMLElement>(".kw-custom")].map(
      (c) => c.dataset["phrase"],
    );
    expect(phrases).toContain("source code");
  });

  it("shows the service message when the phrase is rejected", async () => {
    const client = stubClient({
      getKeywords: async () => keywordsDoc(),
      addCustomKeyword: async () => {
        throw new ApiError(400, {
          type: "PhraseNotInSegment",
          message: "phrase does not occur in the transcript",
        });
      },
    });
    const panel = new KeywordPanel(client, tracker, () => {});
    await panel.load(SEGMENT_ID);

    query<HTMLInputElement>(panel.root, "#custom-keyword-input").value = "quantum";
    query<HTMLButtonElement>(panel.root, "#add-custom-keyword").click();
    await tracker.idle();

    const error = query<HTMLElement>(panel.root, "#keyword-error");
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("does not occur");
  });
});

describe("TranscriptEditor", () => {
  it("grows the version dropdown after a successful save", async () => {
    let versions = [versionMeta(1)];
    let current = textResponse();
    const client = stubClient({
      getText: async () => current,
      listVersions: async () => versions,
      putText: vi.fn(async (_seg: string, text: string, expected: number) => {
        expect(expected).toBe(1);
        versions = [versionMeta(1), versionMeta(2, "teacher")];
        current = textResponse({
          version_no: 2,
          head_version: 2,
          text,
          author: "teacher",
        });
        return current;
      }),
    });
    const onSaved = vi.fn();
    const editor = new TranscriptEditor(client, tracker, onSaved);
    await editor.load(SEGMENT_ID);

    const select = query<HTMLSelectElement>(editor.root, "#version-select");
    expect(select.options).toHaveLength(1);

    query<HTMLTextAreaElement>(editor.root, "#transcript-text").value += " More.";
    query<HTMLButtonElement>(editor.root, "#save-transcript").click();
    await tracker.idle();

    expect(select.options).toHaveLength(2);
    expect(select.value).toBe("2");
    expect(onSaved).toHaveBeenCalledOnce();
  });

  it("shows a conflict banner with the stored version on 409", async () => {
    const client = stubClient({
      getText: async () => textResponse(),
      listVersions: async () => [versionMeta(1)],
      putText: async () => {
        throw new ApiError(409, {
          type: "VersionConflict",
          message: "expected version 1 but history is at 5",
          current_version: 5,
        });
      },
    });
    const editor = new TranscriptEditor(client, tracker, () => {});
    await editor.load(SEGMENT_ID);

    query<HTMLButtonElement>(editor.root, "#save-transcript").click();
    await tracker.idle();

    const banner = query<HTMLElement>(editor.root, "#conflict-banner");
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("version 5");
    expect(query<HTMLSelectElement>(editor.root, "#version-select").options)
      .toHaveLength(1);
  });

  it("loads an older version when the dropdown changes", async () => {
    const getText = vi.fn(async (_seg: string, versionNo?: number) =>
      versionNo === 1
        ? textResponse({ version_no: 1, head_version: 2, text: "old text" })
        : textResponse({ version_no: 2, head_version: 2, text: "new text" }),
    );
    const client = stubClient({
      getText,
      listVersions: async () => [versionMeta(1), versionMeta(2, "teacher")],
    });
    const editor = new TranscriptEditor(client, tracker, () => {});
    await editor.load(SEGMENT_ID);

    const select = query<HTMLSelectElement>(editor.root, "#version-select");
    select.value = "1";
    select.dispatchEvent(new Event("change"));
    await tracker.idle();

    expect(query<HTMLTextAreaElement>(editor.root, "#transcript-text").value).toBe(
      "old text",
    );
  });
});

describe("QuestionSetView", () => {
  it("flips a yes/no answer through the dropdown", async () => {
    const doc = blqSet();
    const editQuestion = vi.fn(async (_set: string, rank: number, edit: object) => {
      const target = doc.questions.find((q) => q.rank === rank)!;
      Object.assign(target.payload, edit);
      target.status = "edited";
      return target;
    });
    const client = stubClient({
      editQuestion,
      getQuestionSet: async () => doc,
    });
    const view = new QuestionSetView(client, tracker, doc, () => {});

    const select = query<HTMLSelectElement>(
      view.root,
      '.question[data-rank="1"] .answer-select',
    );
    expect(select.value).toBe("yes");
    select.value = "no";
    select.dispatchEvent(new Event("change"));
    await tracker.idle();

    expect(editQuestion).toHaveBeenCalledWith("set-blq-1", 1, { answer: "no" });
    expect(
      query<HTMLSelectElement>(view.root, '.question[data-rank="1"] .answer-select')
        .value,
    ).toBe("no");
    expect(
      query<HTMLElement>(view.root, '.question[data-rank="1"] .status-badge')
        .textContent,
    ).toBe("edited");
  });

  it("reports a Good rating with its best question rank", async () => {
    const doc = saqSet();
    const rate = vi.fn(async () => ({
      rating_id: "r1",
      question_set_id: doc.question_set_id,
      qtype: "SAQ",
      verdict: "Good" as const,
      best_question_rank: 1,
      rater: "teacher",
      rated_at: "2026-01-01T00:00:00+00:00",
      supersedes: null,
    }));
    const view = new QuestionSetView(stubClient({ rate }), tracker, doc, () => {});

    query<HTMLSelectElement>(view.root, ".verdict-select").value = "Good";
    query<HTMLInputElement>(view.root, ".best-rank").value = "1";
    query<HTMLButtonElement>(view.root, ".rate-button").click();
    await tracker.idle();

    expect(rate).toHaveBeenCalledWith(doc.question_set_id, "Good", 1);
    expect(query<HTMLElement>(view.root, ".rating-result").textContent).toBe(
      "rated Good (best 1)",
    );
  });

  it("shows the service complaint when a rating is rejected", async () => {
    const view = new QuestionSetView(
      stubClient({
        rate: async () => {
          throw new ApiError(400, {
            type: "MissingBestQuestion",
            message: "a Good rating on a SAQ set must name the best question",
          });
        },
      }),
      tracker,
      saqSet(),
      () => {},
    );

    query<HTMLButtonElement>(view.root, ".rate-button").click();
    await tracker.idle();

    expect(query<HTMLElement>(view.root, ".rating-result").textContent).toContain(
      "must name the best question",
    );
  });

  it("accepts a question and re-renders its stored status", async () => {
    const doc = saqSet();
    const accept = vi.fn(async () => {
      doc.questions[0]!.status = "accepted";
      return { question_set_id: doc.question_set_id, statuses: { "1": "accepted" } };
    });
    const changed = vi.fn();
    const view = new QuestionSetView(
      stubClient({ accept, getQuestionSet: async () => doc }),
      tracker,
      doc,
      changed,
    );

    query<HTMLButtonElement>(view.root, ".accept-question").click();
    await tracker.idle();

    expect(accept).toHaveBeenCalledWith(doc.question_set_id, [1]);
    expect(
      query<HTMLElement>(view.root, '.question[data-rank="1"] .status-badge')
        .textContent,
    ).toBe("accepted");
    expect(changed).toHaveBeenCalled();
  });
});

describe("QuestionTabs", () => {
  async function panels() {
    const client = stubClient({
      getKeywords: async () => keywordsDoc(),
      getSummary: async () => ({
        segment_id: SEGMENT_ID,
        source_version_no: 1,
        backend: "extractive_builtin",
        provider_name: null,
        text: {
          versions: [
            {
              version_no: 1,
              text: "Open source software started 25 years ago.",
              author: "machine",
              edited_at: "2026-01-01T00:00:00+00:00",
            },
          ],
        },
      }),
    });
    const keywords = new KeywordPanel(client, tracker, () => {});
    const summary = new SummaryPanel(client, tracker, () => {});
    await keywords.load(SEGMENT_ID);
    await summary.load(SEGMENT_ID, true);
    return { client, keywords, summary };
  }

  it("refuses to generate keyword question types without a selected chip", async () => {
    const { client, keywords, summary } = await panels();
    const createQuestions = vi.fn();
    (client as unknown as Record<string, unknown>)["createQuestions"] =
      createQuestions;
    const tabs = new QuestionTabs(client, tracker, keywords, summary, () => {});
    tabs.reset(SEGMENT_ID);

    query<HTMLButtonElement>(tabs.root, "#generate-SAQ").click();
    await tracker.idle();

    expect(createQuestions).not.toHaveBeenCalled();
    const error = query<HTMLElement>(
      tabs.root,
      '.tab-pane[data-qtype="SAQ"] .generate-error',
    );
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("select a keyword");
  });

  it("disables gap-fill choices for phrases missing from the summary", async () => {
    const { client, keywords, summary } = await panels();
    const tabs = new QuestionTabs(client, tracker, keywords, summary, () => {});
    tabs.reset(SEGMENT_ID);

    const boxes = [
      ...tabs.root.querySelectorAll<HTMLInputElement>(".gfq-choice"),
    ];
    const byPhrase = new Map(boxes.map((b) => [b.dataset["phrase"], b.disabled]));
    expect(byPhrase.get("Open source software")).toBe(false);
    expect(byPhrase.get("core products")).toBe(true);
  });

  it("sends checked phrases as the gap-fill request", async () => {
    const { client, keywords, summary } = await panels();
    const createQuestions = vi.fn(async () => saqSet({ qtype: "GFQ" }));
    (client as unknown as Record<string, unknown>)["createQuestions"] =
      createQuestions;
    const tabs = new QuestionTabs(client, tracker, keywords, summary, () => {});
    tabs.reset(SEGMENT_ID);

    const box = [...tabs.root.querySelectorAll<HTMLInputElement>(".gfq-choice")].find(
      (b) => b.dataset["phrase"] === "Open source software",
    )!;
    box.checked = true;
    query<HTMLButtonElement>(tabs.root, "#generate-GFQ").click();
    await tracker.idle();

    expect(createQuestions).toHaveBeenCalledWith(SEGMENT_ID, {
      qtype: "GFQ",
      keywords: ["Open source software"],
    });
  });
});
