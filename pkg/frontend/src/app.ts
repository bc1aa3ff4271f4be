import type { Client, SegmentRow } from "./api.js";
import { el } from "./dom.js";
import { TaskTracker } from "./tasks.js";
import { ExportView } from "./components/exportView.js";
import { KeywordPanel } from "./components/keywordPanel.js";
import { QuestionTabs } from "./components/questionTabs.js";
import { SegmentList } from "./components/segmentList.js";
import { SummaryPanel } from "./components/summaryPanel.js";
import { TranscriptEditor } from "./components/transcriptEditor.js";
import { VideoPicker } from "./components/videoPicker.js";

/** Wires the workflow: pick a video, pick a segment, edit its transcript,
 * build a summary, choose keywords, generate and review questions, export.
 */
export class App {
  readonly tracker = new TaskTracker();
  readonly videoPicker: VideoPicker;
  readonly segmentList: SegmentList;
  readonly transcriptEditor: TranscriptEditor;
  readonly summaryPanel: SummaryPanel;
  readonly keywordPanel: KeywordPanel;
  readonly questionTabs: QuestionTabs;
  readonly exportView: ExportView;
  private segments: SegmentRow[] = [];
  private currentSegment: string | null = null;

  constructor(
    readonly rootElement: HTMLElement,
    readonly client: Client,
  ) {
    const run = this.tracker;
    this.videoPicker = new VideoPicker((videoId) =>
      run.run(this.selectVideo(videoId)),
    );
    this.segmentList = new SegmentList((segmentId) =>
      run.run(this.selectSegment(segmentId)),
    );
    this.transcriptEditor = new TranscriptEditor(client, run, () =>
      run.run(this.afterTranscriptEdit()),
    );
    this.summaryPanel = new SummaryPanel(client, run, () =>
      this.questionTabs.refreshGfqChoices(),
    );
    this.keywordPanel = new KeywordPanel(
      client,
      run,
      () => {},
      () => this.questionTabs.refreshGfqChoices(),
    );
    this.questionTabs = new QuestionTabs(
      client,
      run,
      this.keywordPanel,
      this.summaryPanel,
      () => run.run(this.exportView.refresh()),
    );
    this.exportView = new ExportView(client, run);

    rootElement.append(
      el("h1", { text: "Lecture question workbench" }),
      this.videoPicker.root,
      this.segmentList.root,
      this.transcriptEditor.root,
      this.summaryPanel.root,
      this.keywordPanel.root,
      this.questionTabs.root,
      this.exportView.root,
    );
  }

  idle(): Promise<void> {
    return this.tracker.idle();
  }

  async init(): Promise<void> {
    this.videoPicker.render(await this.client.listVideos());
  }

  async selectVideo(videoId: string): Promise<void> {
    this.segments = await this.client.listSegments(videoId);
    this.segmentList.render(this.segments);
  }

  async selectSegment(segmentId: string): Promise<void> {
    this.currentSegment = segmentId;
    const row = this.segments.find((s) => s.segment_id === segmentId);
    await this.transcriptEditor.load(segmentId);
    await this.summaryPanel.load(segmentId, row?.has_summary ?? false);
    await this.keywordPanel.load(segmentId);
    this.questionTabs.reset(segmentId);
    this.exportView.setSegment(segmentId);
  }

  private async afterTranscriptEdit(): Promise<void> {
    if (!this.currentSegment) return;
    await this.keywordPanel.load(this.currentSegment);
    this.questionTabs.refreshGfqChoices();
  }
}
