import { describe, expect, it } from "vitest";
import {
  ErrorBody,
  KeywordEntry,
  QuestionEntry,
  QuestionSetDoc,
  SegmentRow,
  VideoRow,
} from "../src/api.js";
import { mcqOptions, questionText } from "../src/components/questionSet.js";
import { blqSet, mcqSet, saqSet, segmentRow } from "./fixtures.js";

describe("wire schemas", () => {
  it("accepts documented video rows", () => {
    const row = {
      video_id: "lec1",
      title: "Intro",
      duration_s: 240,
      segment_count: 1,
    };
    expect(VideoRow.parse(row)).toEqual(row);
  });

  it("accepts a null duration", () => {
    expect(
      VideoRow.safeParse({
        video_id: "v",
        title: "t",
        duration_s: null,
        segment_count: 0,
      }).success,
    ).toBe(true);
  });

  it("rejects a segment row missing its head version", () => {
    const row: Record<string, unknown> = { ...segmentRow() };
    delete row["head_version"];
    expect(SegmentRow.safeParse(row).success).toBe(false);
  });

  it("rejects fractional segment indexes", () => {
    expect(SegmentRow.safeParse({ ...segmentRow(), index: 0.5 }).success).toBe(false);
  });

  it("accepts every fixture question set", () => {
    for (const doc of [saqSet(), blqSet(), mcqSet()]) {
      expect(QuestionSetDoc.parse(doc).question_set_id).toBe(doc.question_set_id);
    }
  });

  it("rejects an unknown question source", () => {
    const doc = saqSet();
    (doc.questions[0] as { source: string }).source = "oracle";
    expect(QuestionSetDoc.safeParse(doc).success).toBe(false);
  });

  it("rejects a yes/no set whose payload has a free-text answer", () => {
    const doc = blqSet();
    doc.questions[0]!.payload = { question_text: "Is it?", answer: "maybe" } as never;
    const result = QuestionSetDoc.safeParse(doc);
    expect(result.success).toBe(false);
  });

  it("rejects a set whose payload belongs to a different question type", () => {
    const doc = saqSet();
    (doc as { qtype: string }).qtype = "MCQ";
    expect(QuestionSetDoc.safeParse(doc).success).toBe(false);
  });

  it("keeps multiple choice payloads intact through the union", () => {
    const parsed = QuestionSetDoc.parse(mcqSet());
    const payload = parsed.questions[0]!.payload;
    expect("option_order" in payload && payload.option_order).toEqual([3, 1, 0, 2]);
  });

  it("rejects keyword origins outside recommended/custom", () => {
    expect(
      KeywordEntry.safeParse({
        phrase: "x",
        kind: "noun_phrase",
        frequency: 1,
        first_offset: 0,
        origin: "suggested",
      }).success,
    ).toBe(false);
  });

  it("parses error bodies with optional fields", () => {
    expect(ErrorBody.parse({ type: "NotFound", message: "nope" })).toEqual({
      type: "NotFound",
      message: "nope",
    });
    const conflict = ErrorBody.parse({
      type: "VersionConflict",
      message: "stale",
      current_version: 4,
    });
    expect(conflict.current_version).toBe(4);
  });
});

describe("mcqOptions", () => {
  it("applies the stored permutation over correct answer plus distractors", () => {
    const payload = {
      question_text: "When?",
      correct_answer: "A",
      distractors: ["B", "C", "D"],
      option_order: [3, 1, 0, 2],
    };
    expect(mcqOptions(payload)).toEqual([
      { text: "D", correct: false },
      { text: "B", correct: false },
      { text: "A", correct: true },
      { text: "C", correct: false },
    ]);
  });

  it("marks exactly one option correct", () => {
    const payload = {
      question_text: "When?",
      correct_answer: "A",
      distractors: ["B", "C", "D"],
      option_order: [2, 0, 3, 1],
    };
    expect(mcqOptions(payload).filter((o) => o.correct)).toHaveLength(1);
  });
});

describe("questionText", () => {
  it("reads gapped text for gap-fill payloads", () => {
    expect(
      questionText("GFQ", { gapped_text: "___(1)___ works.", answers: ["It"] }),
    ).toBe("___(1)___ works.");
  });

  it("reads question text for the other payloads", () => {
    expect(
      questionText("SAQ", { question_text: "When?", answer: "now" }),
    ).toBe("When?");
  });
});
