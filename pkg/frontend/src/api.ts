/** Typed client for the service JSON API. All state round-trips through here. */

export interface UserSession {
  id: string;
  display_name: string;
  api_token: string;
}

export interface ArticleListing {
  id: string;
  title: string;
  source_url: string | null;
  created_at: string;
  suggested_tags: string[];
}

export interface FrameVectorData {
  counts: Record<string, number>;
  token_count: number;
}

export interface SuggestedTagsData {
  tags: string[];
  rates: Record<string, number>;
}

export interface ArticleData {
  id: string;
  title: string;
  source_url: string | null;
  canonical_text: string;
  frame_vector: FrameVectorData;
  suggested_tags: SuggestedTagsData;
  created_at: string;
}

export interface AnchorData {
  exact: string;
  prefix: string;
  suffix: string;
  start: number;
  end: number;
}

export interface TagAssignmentData {
  tag: string;
  added_by: string;
  voters: string[];
  vote_count: number;
  created_at: string;
}

export interface CommentData {
  id: string;
  annotation_id: string;
  author: string;
  body: string;
  declared_frames: string[];
  parent_comment: string | null;
  created_at: string;
}

export interface AnnotationData {
  id: string;
  article_id: string;
  creator: string;
  anchor: AnchorData;
  display_color: string;
  eligible: boolean;
  created_at: string;
  tag_assignments: TagAssignmentData[];
  comments: CommentData[];
}

export interface FramingRowData {
  tag: string;
  origin: "auto" | "user";
  weight: number;
}

export interface RecommendationData {
  article_id: string;
  title?: string | null;
  topic_similarity: number;
  frame_similarity: number;
  combined_score: number;
  frame_tags: SuggestedTagsData;
}

export interface SummaryRevisionData {
  article_id: string;
  revision_no: number;
  body: string;
  author: string;
  created_at: string;
}

export interface VoteResult {
  tag: string;
  vote_count: number;
  voted: boolean;
  eligible: boolean;
}

/** Minimal view of a fetch response; lets tests substitute plain objects. */
export interface FetchLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<FetchLike>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: string = "",
  ) {
    super(message);
  }
}

export class ApiClient {
  token: string | null;

  constructor(
    private baseUrl: string = "",
    token: string | null = null,
    private fetchFn: FetchFn = (url, init) => fetch(url, init),
  ) {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload: unknown = await response.json().catch(() => ({}));
    if (!response.ok) {
      const err = payload as { code?: string; message?: string; detail?: string };
      throw new ApiError(
        response.status,
        err.code ?? "error",
        err.message ?? `request failed (${response.status})`,
        err.detail ?? "",
      );
    }
    return payload as T;
  }

  createUser(displayName: string): Promise<UserSession> {
    return this.request("POST", "/users", { display_name: displayName });
  }

  listArticles(): Promise<ArticleListing[]> {
    return this.request("GET", "/articles");
  }

  getArticle(articleId: string): Promise<ArticleData> {
    return this.request("GET", `/articles/${articleId}`);
  }

  getFraming(articleId: string): Promise<FramingRowData[]> {
    return this.request("GET", `/articles/${articleId}/framing`);
  }

  getRecommendations(articleId: string, k = 5): Promise<RecommendationData[]> {
    return this.request("GET", `/articles/${articleId}/recommendations?k=${k}`);
  }

  getAnnotations(articleId: string): Promise<AnnotationData[]> {
    return this.request("GET", `/articles/${articleId}/annotations`);
  }

  createHighlight(
    articleId: string,
    body: {
      start: number;
      end: number;
      tags: string[];
      comment_body?: string;
      comment_frames?: string[];
    },
  ): Promise<AnnotationData> {
    return this.request("POST", `/articles/${articleId}/highlights`, body);
  }

  addTag(annotationId: string, tag: string): Promise<TagAssignmentData> {
    return this.request("POST", `/annotations/${annotationId}/tags`, { tag });
  }

  toggleVote(annotationId: string, tag: string): Promise<VoteResult> {
    return this.request("POST", `/annotations/${annotationId}/tags/${tag}/vote`);
  }

  addComment(
    annotationId: string,
    body: { body: string; declared_frames?: string[]; parent_comment?: string | null },
  ): Promise<CommentData> {
    return this.request("POST", `/annotations/${annotationId}/comments`, body);
  }

  getSummary(articleId: string): Promise<{ article_id: string; revision: SummaryRevisionData | null }> {
    return this.request("GET", `/articles/${articleId}/summary`);
  }

  putSummary(articleId: string, body: string): Promise<SummaryRevisionData> {
    return this.request("PUT", `/articles/${articleId}/summary`, { body });
  }

  getSummaryHistory(articleId: string): Promise<SummaryRevisionData[]> {
    return this.request("GET", `/articles/${articleId}/summary/history`);
  }
}
