/** DOM construction for the reading view and side panels. */

import { AnnotationData } from "./api";
import { tagColor } from "./frames";
import { segmentText } from "./highlights";

export interface SplitAnnotations {
  renderable: AnnotationData[];
  orphaned: AnnotationData[];
}

/**
 * An anchor renders inline only while its stored offsets still slice to its
 * quote; anything else is listed in the orphan side panel instead.
 */
export function splitRenderable(text: string, annotations: AnnotationData[]): SplitAnnotations {
  const renderable: AnnotationData[] = [];
  const orphaned: AnnotationData[] = [];
  for (const annotation of annotations) {
    const { start, end, exact } = annotation.anchor;
    if (text.slice(start, end) === exact) {
      renderable.push(annotation);
    } else {
      orphaned.push(annotation);
    }
  }
  return { renderable, orphaned };
}

/** Hex color + alpha suffix for layered highlight backgrounds. */
export function highlightBackground(tagName: string): string {
  return tagColor(tagName) + "4d";
}

/**
 * Render article text with nested highlight spans. Overlapping highlights
 * nest outermost-first; every wrapper carries its annotation id so clicks
 * can open the annotation panel.
 */
export function renderArticleBody(
  container: HTMLElement,
  text: string,
  annotations: AnnotationData[],
  onOpen?: (annotationId: string) => void,
): void {
  container.textContent = "";
  const colors = new Map(annotations.map((a) => [a.id, a.display_color]));
  const spans = annotations.map((a) => ({
    id: a.id,
    start: a.anchor.start,
    end: a.anchor.end,
    color: a.display_color,
  }));
  for (const segment of segmentText(text.length, spans)) {
    const piece = text.slice(segment.start, segment.end);
    if (!segment.covering.length) {
      container.appendChild(document.createTextNode(piece));
      continue;
    }
    let parent: HTMLElement = container;
    for (const annotationId of segment.covering) {
      const wrapper = document.createElement("span");
      wrapper.className = "hl";
      wrapper.dataset.annotationId = annotationId;
      wrapper.style.backgroundColor = highlightBackground(colors.get(annotationId) ?? "morality");
      if (onOpen) {
        wrapper.addEventListener("click", (event) => {
          event.stopPropagation();
          onOpen(annotationId);
        });
      }
      parent.appendChild(wrapper);
      parent = wrapper;
    }
    parent.appendChild(document.createTextNode(piece));
  }
}

/**
 * Character offsets of the current selection within the rendered article
 * body. The rendered text nodes concatenate to the canonical text, so the
 * prefix-range length is the start offset.
 */
export function selectionOffsets(container: HTMLElement): { start: number; end: number } | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  if (!container.contains(range.startContainer) || !container.contains(range.endContainer)) {
    return null;
  }
  const prefix = range.cloneRange();
  prefix.selectNodeContents(container);
  prefix.setEnd(range.startContainer, range.startOffset);
  const start = prefix.toString().length;
  const length = range.toString().length;
  if (length === 0) return null;
  return { start, end: start + length };
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * The comment composer under an annotation. Disabled (with an unlock hint)
 * whenever the session is not yet eligible; the server remains authoritative.
 */
export function replyComposer(
  canComment: boolean,
  tagNames: string[],
  onPost: (body: string, declaredFrames: string[]) => void,
): HTMLElement {
  const composer = el("div", "reply-composer");
  const textarea = el("textarea");
  textarea.id = "comment-box";
  textarea.disabled = !canComment;
  textarea.placeholder = canComment
    ? "join the discussion, tagged with the frames you speak from"
    : "upvote a tag or add a missing one to unlock commenting";
  const declared = new Set<string>();
  const frameLine = el("div", "declare");
  for (const name of tagNames) {
    const label = el("label", "pick small");
    const checkbox = el("input");
    checkbox.type = "checkbox";
    checkbox.disabled = !canComment;
    checkbox.addEventListener("change", () => {
      if (checkbox.checked) declared.add(name);
      else declared.delete(name);
    });
    label.append(checkbox, el("span", "", name));
    frameLine.append(label);
  }
  const post = el("button", "primary", "post comment");
  post.id = "post-comment";
  post.disabled = !canComment;
  if (!canComment) post.title = "contribute to the tagging first";
  post.addEventListener("click", () => {
    const body = textarea.value.trim();
    if (!body) return;
    onPost(body, [...declared]);
    textarea.value = "";
  });
  composer.append(textarea, frameLine, post);
  return composer;
}
