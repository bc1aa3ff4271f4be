/** Typed client for the question generation REST service.
 *
 * Every response passes through a zod schema before it reaches the UI, so a
 * drifting server shows up as a WireFormatError instead of an undefined
 * property three components later.
 */
import { z } from "zod";

export const VersionedText = z.object({
  version_no: z.number().int(),
  text: z.string(),
  author: z.string(),
  edited_at: z.string(),
});

export const TextHistory = z.object({
  versions: z.array(VersionedText).min(1),
});

export const VideoRow = z.object({
  video_id: z.string(),
  title: z.string(),
  duration_s: z.number().nullable(),
  segment_count: z.number().int(),
});

export const SegmentRow = z.object({
  segment_id: z.string(),
  video_id: z.string(),
  index: z.number().int(),
  start_s: z.number(),
  end_s: z.number(),
  head_version: z.number().int(),
  has_summary: z.boolean(),
});

export const TextResponse = z.object({
  segment_id: z.string(),
  version_no: z.number().int(),
  text: z.string(),
  edited_at: z.string(),
  author: z.string(),
  head_version: z.number().int(),
});

// The summary save response has no head_version: the write it reports is
// the head, and the panel re-reads the full document afterwards anyway.
export const SavedSummaryText = TextResponse.omit({ head_version: true });

export const VersionMeta = z.object({
  version_no: z.number().int(),
  edited_at: z.string(),
  author: z.string(),
});

export const SummaryDoc = z.object({
  segment_id: z.string(),
  source_version_no: z.number().int(),
  backend: z.string(),
  provider_name: z.string().nullable(),
  text: TextHistory,
});

export const KeywordEntry = z.object({
  phrase: z.string(),
  kind: z.string(),
  frequency: z.number().int(),
  first_offset: z.number().int(),
  origin: z.enum(["recommended", "custom"]),
});

export const KeywordsDoc = z.object({
  segment_id: z.string(),
  source_version_no: z.number().int(),
  recommended: z.array(KeywordEntry),
  custom: z.array(KeywordEntry),
});

export const SaqPayload = z.object({
  question_text: z.string(),
  answer: z.string(),
});

export const BlqPayload = z.object({
  question_text: z.string(),
  answer: z.enum(["yes", "no"]),
});

export const GfqPayload = z.object({
  gapped_text: z.string(),
  answers: z.array(z.string()),
});

export const McqPayload = z.object({
  question_text: z.string(),
  correct_answer: z.string(),
  distractors: z.array(z.string()),
  option_order: z.array(z.number().int()),
});

export const QuestionPayload = z.union([
  McqPayload,
  GfqPayload,
  BlqPayload,
  SaqPayload,
]);

export const QuestionEntry = z.object({
  rank: z.number().int(),
  confidence: z.number(),
  source: z.enum(["fallback_builtin", "provider"]),
  status: z.enum(["generated", "edited", "accepted", "discarded"]),
  payload: QuestionPayload,
  history: TextHistory,
  warnings: z.array(z.string()),
});

const PAYLOAD_FOR = {
  SAQ: SaqPayload,
  BLQ: BlqPayload,
  GFQ: GfqPayload,
  MCQ: McqPayload,
} as const;

function payloadMatchesQtype(
  qtype: keyof typeof PAYLOAD_FOR,
  payload: unknown,
): boolean {
  return PAYLOAD_FOR[qtype].safeParse(payload).success;
}

export const QuestionSetDoc = z
  .object({
    question_set_id: z.string(),
    video_id: z.string(),
    segment_id: z.string(),
    qtype: z.enum(["SAQ", "BLQ", "GFQ", "MCQ"]),
    segment_version_no: z.number().int(),
    summary_version_no: z.number().int().nullable(),
    keyword: z.object({ phrase: z.string(), origin: z.string() }).nullable(),
    seed: z.number().int(),
    warning: z.string().nullable(),
    created_at: z.string(),
    questions: z.array(QuestionEntry),
  })
  .superRefine((doc, ctx) => {
    doc.questions.forEach((question, i) => {
      if (!payloadMatchesQtype(doc.qtype, question.payload)) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          path: ["questions", i, "payload"],
          message: `payload does not match question type ${doc.qtype}`,
        });
      }
    });
  });

export const RatingDoc = z.object({
  rating_id: z.string(),
  question_set_id: z.string(),
  qtype: z.string(),
  verdict: z.enum(["Good", "Average", "Bad"]),
  best_question_rank: z.number().int().nullable(),
  rater: z.string(),
  rated_at: z.string(),
  supersedes: z.string().nullable(),
});

export const AcceptResponse = z.object({
  question_set_id: z.string(),
  statuses: z.record(z.string()),
});

export const ExportEntry = z
  .object({
    qtype: z.enum(["SAQ", "BLQ", "GFQ", "MCQ"]),
    payload: QuestionPayload,
    confidence: z.number(),
    source: z.enum(["fallback_builtin", "provider"]),
    provenance: z.object({
      video_id: z.string(),
      segment_id: z.string(),
      segment_version_no: z.number().int().nullable(),
      summary_version_no: z.number().int().nullable(),
      question_set_id: z.string(),
      rank: z.number().int(),
      stale: z.boolean(),
    }),
  })
  .superRefine((entry, ctx) => {
    if (!payloadMatchesQtype(entry.qtype, entry.payload)) {
      ctx.addIssue({
        code: z.ZodIssueCode.custom,
        path: ["payload"],
        message: `payload does not match question type ${entry.qtype}`,
      });
    }
  });

export const RatingsReport = z.record(
  z.object({
    counts: z.object({
      good: z.number().int(),
      average: z.number().int(),
      bad: z.number().int(),
    }),
    total: z.number().int(),
    percent: z.object({
      good: z.number().nullable(),
      average: z.number().nullable(),
      bad: z.number().nullable(),
    }),
    acceptable_percent: z.number().nullable(),
  }),
);

export const ErrorBody = z.object({
  type: z.string(),
  message: z.string(),
  current_version: z.number().int().optional(),
  hint: z.string().optional(),
});

export type VideoRow = z.infer<typeof VideoRow>;
export type SegmentRow = z.infer<typeof SegmentRow>;
export type TextResponse = z.infer<typeof TextResponse>;
export type VersionMeta = z.infer<typeof VersionMeta>;
export type SummaryDoc = z.infer<typeof SummaryDoc>;
export type KeywordEntry = z.infer<typeof KeywordEntry>;
export type KeywordsDoc = z.infer<typeof KeywordsDoc>;
export type QuestionEntry = z.infer<typeof QuestionEntry>;
export type QuestionSetDoc = z.infer<typeof QuestionSetDoc>;
export type RatingDoc = z.infer<typeof RatingDoc>;
export type AcceptResponse = z.infer<typeof AcceptResponse>;
export type ExportEntry = z.infer<typeof ExportEntry>;
export type RatingsReport = z.infer<typeof RatingsReport>;
export type ErrorBody = z.infer<typeof ErrorBody>;
export type Qtype = QuestionSetDoc["qtype"];

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

export class WireFormatError extends Error {
  constructor(path: string, detail: string) {
    super(`unexpected response shape from ${path}: ${detail}`);
    this.name = "WireFormatError";
  }
}

export interface QuestionRequest {
  qtype: Qtype;
  keyword?: string;
  keywords?: string[];
  n?: number;
  seed?: number;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // Bind so a bare globalThis.fetch keeps its receiver in browsers.
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(
    schema: z.ZodType<T>,
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    let parsed: unknown;
    try {
      parsed = await response.json();
    } catch {
      throw new WireFormatError(path, "body is not JSON");
    }
    if (!response.ok) {
      const error = ErrorBody.safeParse(parsed);
      if (!error.success) {
        throw new WireFormatError(path, "error body is not the documented shape");
      }
      throw new ApiError(response.status, error.data);
    }
    const result = schema.safeParse(parsed);
    if (!result.success) {
      throw new WireFormatError(path, result.error.issues[0]?.message ?? "invalid");
    }
    return result.data;
  }

  listVideos(): Promise<VideoRow[]> {
    return this.request(z.array(VideoRow), "GET", "/videos");
  }

  listSegments(videoId: string): Promise<SegmentRow[]> {
    return this.request(
      z.array(SegmentRow),
      "GET",
      `/videos/${encodeURIComponent(videoId)}/segments`,
    );
  }

  getText(segmentId: string, versionNo?: number): Promise<TextResponse> {
    const query = versionNo === undefined ? "" : `?version=${versionNo}`;
    return this.request(
      TextResponse,
      "GET",
      `/segments/${encodeURIComponent(segmentId)}/text${query}`,
    );
  }

  putText(
    segmentId: string,
    text: string,
    expectedVersion: number,
    author = "teacher",
  ): Promise<TextResponse> {
    return this.request(
      TextResponse,
      "PUT",
      `/segments/${encodeURIComponent(segmentId)}/text`,
      { text, expected_version: expectedVersion, author },
    );
  }

  listVersions(segmentId: string): Promise<VersionMeta[]> {
    return this.request(
      z.array(VersionMeta),
      "GET",
      `/segments/${encodeURIComponent(segmentId)}/versions`,
    );
  }

  buildSummary(segmentId: string, backend = "extractive_builtin"): Promise<SummaryDoc> {
    return this.request(
      SummaryDoc,
      "POST",
      `/segments/${encodeURIComponent(segmentId)}/summary`,
      { backend },
    );
  }

  getSummary(segmentId: string): Promise<SummaryDoc> {
    return this.request(
      SummaryDoc,
      "GET",
      `/segments/${encodeURIComponent(segmentId)}/summary`,
    );
  }

  putSummary(
    segmentId: string,
    text: string,
    expectedVersion: number,
    author = "teacher",
  ): Promise<z.infer<typeof SavedSummaryText>> {
    return this.request(
      SavedSummaryText,
      "PUT",
      `/summaries/${encodeURIComponent(segmentId)}`,
      { text, expected_version: expectedVersion, author },
    );
  }

  getKeywords(segmentId: string, limit?: number): Promise<KeywordsDoc> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    return this.request(
      KeywordsDoc,
      "GET",
      `/segments/${encodeURIComponent(segmentId)}/keywords${query}`,
    );
  }

  addCustomKeyword(segmentId: string, phrase: string): Promise<KeywordEntry> {
    return this.request(
      KeywordEntry,
      "POST",
      `/segments/${encodeURIComponent(segmentId)}/keywords/custom`,
      { phrase },
    );
  }

  createQuestions(segmentId: string, body: QuestionRequest): Promise<QuestionSetDoc> {
    return this.request(
      QuestionSetDoc,
      "POST",
      `/segments/${encodeURIComponent(segmentId)}/questions`,
      body,
    );
  }

  getQuestionSet(setId: string): Promise<QuestionSetDoc> {
    return this.request(
      QuestionSetDoc,
      "GET",
      `/questions/${encodeURIComponent(setId)}`,
    );
  }

  editQuestion(
    setId: string,
    rank: number,
    edit: { text?: string; answer?: string; author?: string },
  ): Promise<QuestionEntry> {
    return this.request(
      QuestionEntry,
      "PUT",
      `/questions/${encodeURIComponent(setId)}/${rank}`,
      { author: "teacher", ...edit },
    );
  }

  rate(
    setId: string,
    verdict: string,
    bestQuestionRank?: number,
    rater = "teacher",
  ): Promise<RatingDoc> {
    return this.request(
      RatingDoc,
      "POST",
      `/questions/${encodeURIComponent(setId)}/rating`,
      {
        verdict,
        best_question_rank: bestQuestionRank ?? null,
        rater,
      },
    );
  }

  accept(
    setId: string,
    ranks: number[],
    discardRanks: number[] = [],
  ): Promise<AcceptResponse> {
    return this.request(
      AcceptResponse,
      "POST",
      `/questions/${encodeURIComponent(setId)}/accept`,
      { ranks, discard_ranks: discardRanks, author: "teacher" },
    );
  }

  exportSegment(segmentId: string): Promise<ExportEntry[]> {
    return this.request(
      z.array(ExportEntry),
      "GET",
      `/export/${encodeURIComponent(segmentId)}`,
    );
  }

  analyticsRatings(): Promise<RatingsReport> {
    return this.request(RatingsReport, "GET", "/analytics/ratings");
  }
}
