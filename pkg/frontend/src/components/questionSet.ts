import {
  ApiError,
  McqPayload,
  type Client,
  type QuestionEntry,
  type QuestionSetDoc,
} from "../api.js";
import { clear, el } from "../dom.js";
import type { TaskTracker } from "../tasks.js";
import { z } from "zod";

type Mcq = z.infer<typeof McqPayload>;

/** Option texts in display order: the stored permutation applied over the
 * correct answer followed by the distractors. */
export function mcqOptions(payload: Mcq): { text: string; correct: boolean }[] {
  const base = [payload.correct_answer, ...payload.distractors];
  return payload.option_order.map((index) => ({
    text: base[index] ?? "",
    correct: index === 0,
  }));
}

export function questionText(qtype: string, payload: QuestionEntry["payload"]): string {
  if ("gapped_text" in payload) return payload.gapped_text;
  return payload.question_text;
}

/** One generated question set: per-question editors, a rating widget, and
 * accept buttons. All mutations go through the service and the view is
 * re-rendered from the response, so what is on screen is what is stored.
 */
export class QuestionSetView {
  readonly root: HTMLElement;
  private doc: QuestionSetDoc;

  constructor(
    private readonly client: Client,
    private readonly run: TaskTracker,
    doc: QuestionSetDoc,
    private readonly onChanged: () => void,
  ) {
    this.doc = doc;
    this.root = el("div", { class: "question-set", "data-qtype": doc.qtype });
    this.render();
  }

  get setId(): string {
    return this.doc.question_set_id;
  }

  private async refresh(): Promise<void> {
    this.doc = await this.client.getQuestionSet(this.doc.question_set_id);
    this.render();
    this.onChanged();
  }

  private render(): void {
    clear(this.root);
    if (this.doc.warning) {
      this.root.append(
        el("div", { class: "set-warning", text: this.doc.warning }),
      );
    }
    if (this.doc.keyword) {
      this.root.append(
        el("div", {
          class: "set-keyword",
          text: `keyword: ${this.doc.keyword.phrase} (${this.doc.keyword.origin})`,
        }),
      );
    }
    for (const question of this.doc.questions) {
      this.root.append(this.renderQuestion(question));
    }
    this.root.append(this.renderRatingWidget());
  }

  private renderQuestion(question: QuestionEntry): HTMLElement {
    const rank = question.rank;
    const textarea = el("textarea", { class: "question-text", rows: "2" });
    textarea.value = questionText(this.doc.qtype, question.payload);

    const head = el(
      "div",
      { class: "question-head" },
      el("span", { text: `#${rank}` }),
      el("span", {
        class: "confidence",
        text: `confidence ${question.confidence.toFixed(2)}`,
      }),
      el("span", { class: "source-badge", text: question.source }),
      el("span", { class: "status-badge", text: question.status }),
    );

    const body = el(
      "div",
      { class: "question", "data-rank": String(rank) },
      head,
      textarea,
      el("button", {
        class: "save-question",
        text: "Save text",
        onclick: () => void this.run.run(this.saveText(rank, textarea.value)),
      }),
    );

    const payload = question.payload;
    if (this.doc.qtype === "BLQ" && "answer" in payload) {
      const select = el(
        "select",
        {
          class: "answer-select",
          onchange: () => void this.run.run(this.saveAnswer(rank, select.value)),
        },
        el("option", { value: "yes", text: "yes" }),
        el("option", { value: "no", text: "no" }),
      );
      select.value = payload.answer;
      body.append(
        el("div", { class: "answer-row" }, el("span", { text: "answer " }), select),
      );
    } else if ("answers" in payload) {
      body.append(
        el("div", {
          class: "gfq-answers",
          text: `answers: ${payload.answers.map((a, i) => `(${i + 1}) ${a}`).join("  ")}`,
        }),
      );
    } else if ("correct_answer" in payload) {
      const list = el("ol", { class: "mcq-options" });
      for (const option of mcqOptions(payload)) {
        list.append(
          el("li", {
            class: option.correct ? "option correct" : "option",
            text: option.text,
          }),
        );
      }
      body.append(list);
    } else if ("answer" in payload) {
      body.append(
        el("div", { class: "saq-answer", text: `answer: ${payload.answer}` }),
      );
    }

    if (question.warnings.length) {
      body.append(
        el(
          "ul",
          { class: "question-warnings" },
          ...question.warnings.map((w) => el("li", { text: w })),
        ),
      );
    }

    body.append(
      el("button", {
        class: "accept-question",
        text: "Accept",
        onclick: () => void this.run.run(this.accept(rank)),
      }),
    );
    return body;
  }

  private renderRatingWidget(): HTMLElement {
    const verdict = el(
      "select",
      { class: "verdict-select" },
      el("option", { value: "Good", text: "Good" }),
      el("option", { value: "Average", text: "Average" }),
      el("option", { value: "Bad", text: "Bad" }),
    );
    const bestRank = el("input", {
      class: "best-rank",
      type: "number",
      min: "1",
      placeholder: "best #",
    });
    const result = el("span", { class: "rating-result" });
    const rate = async () => {
      const best = bestRank.value === "" ? undefined : Number(bestRank.value);
      try {
        const rating = await this.client.rate(this.setId, verdict.value, best);
        result.textContent = `rated ${rating.verdict}${
          rating.best_question_rank === null ? "" : ` (best ${rating.best_question_rank})`
        }`;
      } catch (err) {
        if (err instanceof ApiError) {
          result.textContent = err.body.message;
          return;
        }
        throw err;
      }
      this.onChanged();
    };
    return el(
      "div",
      { class: "rating-widget" },
      el("span", { text: "Rate this set: " }),
      verdict,
      bestRank,
      el("button", { class: "rate-button", text: "Rate", onclick: () => void this.run.run(rate()) }),
      result,
    );
  }

  private async saveText(rank: number, text: string): Promise<void> {
    await this.client.editQuestion(this.setId, rank, { text });
    await this.refresh();
  }

  private async saveAnswer(rank: number, answer: string): Promise<void> {
    await this.client.editQuestion(this.setId, rank, { answer });
    await this.refresh();
  }

  private async accept(rank: number): Promise<void> {
    await this.client.accept(this.setId, [rank]);
    await this.refresh();
  }
}
