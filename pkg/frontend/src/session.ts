/**
 * Per-browser-session controller.
 *
 * Holds the fetched state for one open article, applies optimistic updates,
 * and reconciles against the server on every poll (server wins). The gating
 * mirror lives here: a comment request is never constructed for an
 * annotation the session has not contributed to and does not own.
 */

import {
  AnnotationData,
  ApiClient,
  ArticleData,
  ArticleListing,
  FramingRowData,
  RecommendationData,
  SummaryRevisionData,
  UserSession,
} from "./api";
import { winningTag } from "./frames";

export const POLL_INTERVAL_MS = 10_000;

/** Raised by the client-side gating mirror, before any request is built. */
export class GatingLocked extends Error {
  constructor() {
    super("contribute a tag or upvote before joining this discussion");
  }
}

export class Session {
  user: UserSession | null = null;
  articles: ArticleListing[] = [];
  article: ArticleData | null = null;
  annotations: AnnotationData[] = [];
  framing: FramingRowData[] = [];
  recommendations: RecommendationData[] = [];
  summary: SummaryRevisionData | null = null;
  summaryHistory: SummaryRevisionData[] = [];
  onChange: (() => void) | null = null;

  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    public api: ApiClient,
    public pollMs: number = POLL_INTERVAL_MS,
  ) {}

  private changed(): void {
    this.onChange?.();
  }

  get userId(): string {
    if (!this.user) throw new Error("not signed in");
    return this.user.id;
  }

  async register(displayName: string): Promise<UserSession> {
    this.user = await this.api.createUser(displayName);
    this.api.token = this.user.api_token;
    this.changed();
    return this.user;
  }

  /** Resume with an existing token (no display name lookup needed client-side). */
  resume(user: UserSession): void {
    this.user = user;
    this.api.token = user.api_token;
    this.changed();
  }

  async loadArticles(): Promise<ArticleListing[]> {
    this.articles = await this.api.listArticles();
    this.changed();
    return this.articles;
  }

  async openArticle(articleId: string): Promise<void> {
    this.article = await this.api.getArticle(articleId);
    await this.refresh();
    this.startPolling();
  }

  /** Re-fetch everything for the open article; server state replaces local. */
  async refresh(): Promise<void> {
    if (!this.article) return;
    const articleId = this.article.id;
    const [annotations, framing, recommendations, summary, history] = await Promise.all([
      this.api.getAnnotations(articleId),
      this.api.getFraming(articleId),
      this.api.getRecommendations(articleId),
      this.api.getSummary(articleId),
      this.api.getSummaryHistory(articleId),
    ]);
    this.annotations = annotations;
    this.framing = framing;
    this.recommendations = recommendations;
    this.summary = summary.revision;
    this.summaryHistory = history;
    this.changed();
  }

  startPolling(): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      void this.refresh().catch(() => {
        /* transient poll failures are retried next tick */
      });
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  annotation(annotationId: string): AnnotationData {
    const found = this.annotations.find((a) => a.id === annotationId);
    if (!found) throw new Error(`no annotation ${annotationId}`);
    return found;
  }

  /** Client-side mirror of the server's gating rule for the composer state. */
  canComment(annotationId: string): boolean {
    const annotation = this.annotation(annotationId);
    return annotation.eligible || annotation.creator === this.userId;
  }

  /**
   * The annotate flow: requires at least one tag before any request is made;
   * an optional comment is posted simultaneously with the highlight.
   */
  async annotate(
    start: number,
    end: number,
    tags: string[],
    commentBody?: string,
    commentFrames: string[] = [],
  ): Promise<AnnotationData> {
    if (!this.article) throw new Error("no article open");
    if (tags.length === 0) {
      throw new Error("pick at least one frame tag before saving");
    }
    const annotation = await this.api.createHighlight(this.article.id, {
      start,
      end,
      tags,
      ...(commentBody !== undefined
        ? { comment_body: commentBody, comment_frames: commentFrames }
        : {}),
    });
    this.annotations = [...this.annotations, annotation];
    this.changed();
    void this.refresh().catch(() => {});
    return annotation;
  }

  async addTag(annotationId: string, tag: string): Promise<void> {
    const annotation = this.annotation(annotationId);
    const result = await this.api.addTag(annotationId, tag);
    annotation.tag_assignments = [...annotation.tag_assignments, result];
    annotation.eligible = true; // adding a tag is a contribution
    annotation.display_color = winningTag(annotation.tag_assignments);
    this.changed();
  }

  async vote(annotationId: string, tag: string): Promise<number> {
    const annotation = this.annotation(annotationId);
    const assignment = annotation.tag_assignments.find((a) => a.tag === tag);
    // optimistic toggle; the server response reconciles the count
    if (assignment) {
      const voted = assignment.voters.includes(this.userId);
      assignment.voters = voted
        ? assignment.voters.filter((v) => v !== this.userId)
        : [...assignment.voters, this.userId];
      assignment.vote_count = assignment.voters.length;
      annotation.eligible = true; // voting is a contribution, retraction keeps it
      annotation.display_color = winningTag(annotation.tag_assignments);
      this.changed();
    }
    try {
      const result = await this.api.toggleVote(annotationId, tag);
      if (assignment) assignment.vote_count = result.vote_count;
      annotation.eligible = result.eligible;
      this.changed();
      return result.vote_count;
    } catch (error) {
      await this.refresh(); // roll back the optimistic change
      throw error;
    }
  }

  async comment(
    annotationId: string,
    body: string,
    declaredFrames: string[] = [],
    parent: string | null = null,
  ): Promise<void> {
    if (!this.canComment(annotationId)) {
      throw new GatingLocked();
    }
    const comment = await this.api.addComment(annotationId, {
      body,
      declared_frames: declaredFrames,
      parent_comment: parent,
    });
    const annotation = this.annotation(annotationId);
    annotation.comments = [...annotation.comments, comment];
    this.changed();
  }

  async editSummary(body: string): Promise<void> {
    if (!this.article) throw new Error("no article open");
    const revision = await this.api.putSummary(this.article.id, body);
    this.summary = revision;
    this.summaryHistory = [...this.summaryHistory, revision];
    this.changed();
  }
}
