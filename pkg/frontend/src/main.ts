/** Application shell: wires the session controller to the page. */

import { ApiClient, AnnotationData, CommentData } from "./api";
import { FOUNDATION_DEFINITIONS, TAGS, TAG_NAMES, tagColor, tagsByFoundation } from "./frames";
import { el, renderArticleBody, replyComposer, selectionOffsets, splitRenderable } from "./render";
import { GatingLocked, Session } from "./session";

const session = new Session(new ApiClient(""));

const $ = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

let openAnnotationId: string | null = null;
let pendingSelection: { start: number; end: number } | null = null;

function tagChip(name: string, suffix = ""): HTMLElement {
  const chip = el("span", "chip", name + suffix);
  chip.style.backgroundColor = tagColor(name);
  const info = TAGS.find((t) => t.name === name);
  if (info) chip.title = FOUNDATION_DEFINITIONS[info.foundation];
  return chip;
}

// --- session panel ---------------------------------------------------------

function renderSessionPanel(): void {
  const panel = $("session-panel");
  panel.textContent = "";
  if (!session.user) {
    const input = el("input");
    input.placeholder = "display name";
    input.id = "display-name";
    const button = el("button", "", "start session");
    button.addEventListener("click", () => {
      if (input.value.trim()) {
        void session.register(input.value.trim()).then(() => session.loadArticles());
      }
    });
    panel.append(input, button);
  } else {
    panel.append(
      el("span", "who", session.user.display_name),
      el("span", "hint", "token " + session.user.api_token.slice(0, 8) + "…"),
    );
  }
}

// --- article list -------------------------------------------------------------

function renderArticleList(): void {
  const list = $("article-list");
  list.textContent = "";
  for (const listing of session.articles) {
    const item = el("div", "article-item");
    item.append(el("div", "title", listing.title));
    const tags = el("div", "tags");
    for (const name of listing.suggested_tags) tags.append(tagChip(name));
    item.append(tags);
    item.addEventListener("click", () => {
      openAnnotationId = null;
      void session.openArticle(listing.id);
    });
    list.append(item);
  }
  if (!session.articles.length) {
    list.append(el("p", "hint", session.user ? "no articles ingested yet" : "start a session first"));
  }
}

// --- reader -----------------------------------------------------------------------

function renderReader(): void {
  const reader = $("reader");
  const body = $("article-body");
  const orphans = $("orphan-list");
  if (!session.article) {
    $("article-title").textContent = "";
    body.textContent = "";
    orphans.textContent = "";
    return;
  }
  $("article-title").textContent = session.article.title;
  const { renderable, orphaned } = splitRenderable(
    session.article.canonical_text,
    session.annotations,
  );
  renderArticleBody(body, session.article.canonical_text, renderable, (annotationId) => {
    openAnnotationId = annotationId;
    renderAnnotationPanel();
  });
  orphans.textContent = "";
  if (orphaned.length) {
    orphans.append(el("h3", "", "orphaned highlights"));
    for (const annotation of orphaned) {
      const row = el("div", "orphan", `“${annotation.anchor.exact}”`);
      row.addEventListener("click", () => {
        openAnnotationId = annotation.id;
        renderAnnotationPanel();
      });
      orphans.append(row);
    }
  }
  reader.classList.toggle("active", true);
}

// --- annotate flow ------------------------------------------------------------------

function renderComposer(): void {
  const composer = $("composer");
  composer.textContent = "";
  if (!pendingSelection || !session.article) {
    composer.classList.remove("open");
    return;
  }
  composer.classList.add("open");
  const { start, end } = pendingSelection;
  const quote = session.article.canonical_text.slice(start, end);
  composer.append(el("h3", "", "What framing(s) does this statement support?"));
  composer.append(el("blockquote", "", quote.length > 160 ? quote.slice(0, 160) + "…" : quote));

  const picked = new Set<string>();
  const picker = el("div", "picker");
  for (const group of tagsByFoundation()) {
    const box = el("div", "foundation");
    const head = el("div", "foundation-name", group.foundation);
    head.title = FOUNDATION_DEFINITIONS[group.foundation];
    box.append(head);
    for (const tag of group.tags) {
      const label = el("label", "pick");
      const checkbox = el("input");
      checkbox.type = "checkbox";
      checkbox.value = tag.name;
      checkbox.addEventListener("change", () => {
        if (checkbox.checked) picked.add(tag.name);
        else picked.delete(tag.name);
        save.disabled = picked.size === 0;
        save.title = picked.size === 0 ? "pick at least one frame tag" : "";
      });
      label.append(checkbox, tagChip(tag.name, tag.polarity === "vice" ? " (vice)" : ""));
      box.append(label);
    }
    picker.append(box);
  }
  composer.append(picker);

  const commentBox = el("textarea") as HTMLTextAreaElement;
  commentBox.placeholder = "optional comment, posted with the highlight";
  composer.append(commentBox);
  const frameLine = el("div", "declare");
  frameLine.append(el("span", "hint", "speaking from:"));
  const declared = new Set<string>();
  for (const name of TAG_NAMES) {
    const label = el("label", "pick small");
    const checkbox = el("input");
    checkbox.type = "checkbox";
    checkbox.addEventListener("change", () => {
      if (checkbox.checked) declared.add(name);
      else declared.delete(name);
    });
    label.append(checkbox, el("span", "", name));
    frameLine.append(label);
  }
  composer.append(frameLine);

  const save = el("button", "primary", "save highlight") as HTMLButtonElement;
  save.disabled = true;
  save.title = "pick at least one frame tag";
  save.addEventListener("click", () => {
    if (!pendingSelection) return;
    const body = commentBox.value.trim();
    void session
      .annotate(
        pendingSelection.start,
        pendingSelection.end,
        [...picked],
        body ? body : undefined,
        [...declared],
      )
      .then(() => {
        pendingSelection = null;
        renderComposer();
      })
      .catch((error) => showError(error));
  });
  const cancel = el("button", "", "cancel");
  cancel.addEventListener("click", () => {
    pendingSelection = null;
    renderComposer();
  });
  composer.append(save, cancel);
}

// --- annotation panel -----------------------------------------------------------------

function commentNode(comment: CommentData, annotation: AnnotationData, depth: number): HTMLElement {
  const node = el("div", "comment");
  node.style.marginLeft = `${depth * 16}px`;
  const head = el("div", "comment-head", comment.author);
  for (const frame of comment.declared_frames) head.append(tagChip(frame));
  node.append(head, el("div", "comment-body", comment.body));
  const reply = el("button", "link", "reply");
  reply.addEventListener("click", () => openReply(annotation.id, comment.id));
  node.append(reply);
  return node;
}

let replyParent: string | null = null;

function openReply(annotationId: string, parentId: string): void {
  replyParent = parentId;
  openAnnotationId = annotationId;
  renderAnnotationPanel();
}

function renderAnnotationPanel(): void {
  const panel = $("annotation-panel");
  panel.textContent = "";
  if (!openAnnotationId) return;
  let annotation: AnnotationData;
  try {
    annotation = session.annotation(openAnnotationId);
  } catch {
    openAnnotationId = null;
    return;
  }

  panel.append(el("h3", "", "annotation"));
  panel.append(el("blockquote", "", annotation.anchor.exact));

  const chips = el("div", "assignments");
  for (const assignment of annotation.tag_assignments) {
    const row = el("div", "assignment");
    row.append(tagChip(assignment.tag, ` ${assignment.vote_count}`));
    const voteButton = el("button", "", assignment.voters.includes(session.user?.id ?? "") ? "unvote" : "upvote");
    voteButton.addEventListener("click", () => {
      void session.vote(annotation.id, assignment.tag).catch(showError);
    });
    row.append(voteButton);
    chips.append(row);
  }
  panel.append(chips);

  const addTagRow = el("div", "add-tag");
  const select = el("select") as HTMLSelectElement;
  for (const name of TAG_NAMES) {
    if (!annotation.tag_assignments.some((a) => a.tag === name)) {
      const option = el("option", "", name) as HTMLOptionElement;
      option.value = name;
      select.append(option);
    }
  }
  const addButton = el("button", "", "add missing tag");
  addButton.addEventListener("click", () => {
    if (select.value) void session.addTag(annotation.id, select.value).catch(showError);
  });
  if (select.options.length) addTagRow.append(select, addButton);
  panel.append(addTagRow);

  panel.append(el("h4", "", "discussion"));
  const thread = el("div", "thread");
  const byParent = new Map<string | null, CommentData[]>();
  for (const comment of annotation.comments) {
    const siblings = byParent.get(comment.parent_comment) ?? [];
    siblings.push(comment);
    byParent.set(comment.parent_comment, siblings);
  }
  const walk = (parent: string | null, depth: number): void => {
    for (const comment of byParent.get(parent) ?? []) {
      thread.append(commentNode(comment, annotation, depth));
      walk(comment.id, depth + 1);
    }
  };
  walk(null, 0);
  panel.append(thread);

  const canComment = session.user ? session.canComment(annotation.id) : false;
  if (replyParent) panel.append(el("div", "hint", "replying…"));
  panel.append(
    replyComposer(canComment, TAG_NAMES, (body, declaredFrames) => {
      void session
        .comment(annotation.id, body, declaredFrames, replyParent)
        .then(() => {
          replyParent = null;
          renderAnnotationPanel();
        })
        .catch(showError);
    }),
  );
}

// --- dashboards --------------------------------------------------------------------------

function renderTabs(): void {
  const framing = $("tab-framing");
  framing.textContent = "";
  for (const row of session.framing) {
    const line = el("div", "framing-row");
    line.append(
      tagChip(row.tag),
      el("span", `origin ${row.origin}`, row.origin),
      el("span", "weight", row.weight.toFixed(2)),
    );
    framing.append(line);
  }
  if (!session.framing.length && session.article) {
    framing.append(el("p", "hint", "no frames detected or tagged yet"));
  }

  const recommendations = $("tab-recommendations");
  recommendations.textContent = "";
  for (const rec of session.recommendations) {
    const line = el("div", "rec-row");
    line.append(el("span", "title", rec.title ?? rec.article_id));
    const tags = el("span", "tags");
    for (const name of rec.frame_tags.tags) tags.append(tagChip(name));
    line.append(tags, el("span", "weight", rec.combined_score.toFixed(3)));
    recommendations.append(line);
  }
  if (!session.recommendations.length && session.article) {
    recommendations.append(
      el("p", "hint", "no similar articles yet; ingest more of the corpus"),
    );
  }

  const summary = $("tab-summary");
  summary.textContent = "";
  summary.append(el("div", "summary-body", session.summary?.body ?? "(no summary yet)"));
  const editor = el("textarea") as HTMLTextAreaElement;
  editor.value = session.summary?.body ?? "";
  const saveButton = el("button", "", "save new revision");
  saveButton.addEventListener("click", () => {
    if (editor.value.trim()) void session.editSummary(editor.value.trim()).catch(showError);
  });
  summary.append(editor, saveButton);
  if (session.summaryHistory.length) {
    summary.append(el("h4", "", "history"));
    for (const revision of session.summaryHistory) {
      summary.append(
        el("div", "revision", `#${revision.revision_no} by ${revision.author}: ${revision.body}`),
      );
    }
  }
}

function showError(error: unknown): void {
  const box = $("error-box");
  box.textContent =
    error instanceof GatingLocked
      ? error.message
      : error instanceof Error
        ? error.message
        : String(error);
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

// --- boot ------------------------------------------------------------------------------

function renderAll(): void {
  renderSessionPanel();
  renderArticleList();
  renderReader();
  renderAnnotationPanel();
  renderTabs();
}

export function boot(): void {
  session.onChange = renderAll;
  renderAll();
  renderComposer();

  $("article-body").addEventListener("mouseup", () => {
    const offsets = selectionOffsets($("article-body"));
    if (offsets) {
      pendingSelection = offsets;
      renderComposer();
    }
  });

  for (const name of ["framing", "recommendations", "summary"]) {
    $(`show-${name}`).addEventListener("click", () => {
      for (const other of ["framing", "recommendations", "summary"]) {
        $(`tab-${other}`).classList.toggle("active", other === name);
        $(`show-${other}`).classList.toggle("active", other === name);
      }
    });
  }
}

if (typeof document !== "undefined" && document.getElementById("session-panel")) {
  boot();
}
