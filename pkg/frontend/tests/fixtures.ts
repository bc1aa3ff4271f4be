import type {
  KeywordsDoc,
  QuestionSetDoc,
  SegmentRow,
  TextResponse,
  VersionMeta,
} from "../src/api.js";

export const SEGMENT_ID = "seg1234567890ab";

export function textResponse(overrides: Partial<TextResponse> = {}): TextResponse {
  return {
    segment_id: SEGMENT_ID,
    version_no: 1,
    text: "Open source software started 25 years ago.",
    edited_at: "2026-01-01T00:00:00+00:00",
    author: "machine",
    head_version: 1,
    ...overrides,
  };
}

export function versionMeta(versionNo: number, author = "machine"): VersionMeta {
  return {
    version_no: versionNo,
    edited_at: `2026-01-01T00:00:0${versionNo}+00:00`,
    author,
  };
}

export function segmentRow(overrides: Partial<SegmentRow> = {}): SegmentRow {
  return {
    segment_id: SEGMENT_ID,
    video_id: "lec1",
    index: 0,
    start_s: 0,
    end_s: 240,
    head_version: 1,
    has_summary: false,
    ...overrides,
  };
}

export function keywordsDoc(): KeywordsDoc {
  return {
    segment_id: SEGMENT_ID,
    source_version_no: 1,
    recommended: [
      {
        phrase: "Open source software",
        kind: "noun_phrase",
        frequency: 3,
        first_offset: 0,
        origin: "recommended",
      },
    ],
    custom: [
      {
        phrase: "core products",
        kind: "noun_phrase",
        frequency: 1,
        first_offset: 120,
        origin: "custom",
      },
    ],
  };
}

export function saqSet(overrides: Partial<QuestionSetDoc> = {}): QuestionSetDoc {
  return {
    question_set_id: "set-saq-1",
    video_id: "lec1",
    segment_id: SEGMENT_ID,
    qtype: "SAQ",
    segment_version_no: 1,
    summary_version_no: null,
    keyword: { phrase: "25 years ago", origin: "recommended" },
    seed: 0,
    warning: null,
    created_at: "2026-01-01T00:00:00+00:00",
    questions: [
      {
        rank: 1,
        confidence: 0.9,
        source: "fallback_builtin",
        status: "generated",
        payload: {
          question_text: "When did open source software start?",
          answer: "25 years ago",
        },
        history: {
          versions: [
            {
              version_no: 1,
              text: "When did open source software start?",
              author: "machine",
              edited_at: "2026-01-01T00:00:00+00:00",
            },
          ],
        },
        warnings: [],
      },
    ],
    ...overrides,
  };
}

export function blqSet(): QuestionSetDoc {
  const base = saqSet({
    question_set_id: "set-blq-1",
    qtype: "BLQ",
    summary_version_no: 1,
    keyword: null,
  });
  base.questions = [1, 2].map((rank) => ({
    rank,
    confidence: 0.8,
    source: "fallback_builtin",
    status: "generated",
    payload: {
      question_text: `Is claim ${rank} true?`,
      answer: rank === 1 ? "yes" : "no",
    },
    history: {
      versions: [
        {
          version_no: 1,
          text: `Is claim ${rank} true?`,
          author: "machine",
          edited_at: "2026-01-01T00:00:00+00:00",
        },
      ],
    },
    warnings: [],
  }));
  return base;
}

export function mcqSet(): QuestionSetDoc {
  const base = saqSet({ question_set_id: "set-mcq-1", qtype: "MCQ" });
  base.questions = [
    {
      rank: 1,
      confidence: 0.9,
      source: "fallback_builtin",
      status: "generated",
      payload: {
        question_text: "When did open source software start?",
        correct_answer: "25 years ago",
        distractors: ["10 years ago", "15 years ago", "20 years ago"],
        option_order: [3, 1, 0, 2],
      },
      history: {
        versions: [
          {
            version_no: 1,
            text: "When did open source software start?",
            author: "machine",
            edited_at: "2026-01-01T00:00:00+00:00",
          },
        ],
      },
      warnings: [],
    },
  ];
  return base;
}
