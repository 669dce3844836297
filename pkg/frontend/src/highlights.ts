/** Pure span arithmetic for rendering overlapping highlights as nested spans. */

export interface HighlightSpan {
  id: string;
  start: number;
  end: number;
  color: string;
}

export interface Segment {
  start: number;
  end: number;
  /** Covering span ids, outermost first (longer spans wrap shorter ones). */
  covering: string[];
}

/**
 * Cut [0, textLength) at every span boundary and report which spans cover
 * each piece. Deterministic: covering order is by span length descending,
 * then start, then id.
 */
export function segmentText(textLength: number, spans: HighlightSpan[]): Segment[] {
  const clamped = spans
    .map((s) => ({ ...s, start: Math.max(0, s.start), end: Math.min(textLength, s.end) }))
    .filter((s) => s.start < s.end);

  const bounds = new Set<number>([0, textLength]);
  for (const span of clamped) {
    bounds.add(span.start);
    bounds.add(span.end);
  }
  const cuts = [...bounds].sort((a, b) => a - b);

  const segments: Segment[] = [];
  for (let i = 0; i + 1 < cuts.length; i++) {
    const start = cuts[i]!;
    const end = cuts[i + 1]!;
    if (start >= end) continue;
    const covering = clamped
      .filter((s) => s.start <= start && s.end >= end)
      .sort(
        (a, b) =>
          b.end - b.start - (a.end - a.start) ||
          a.start - b.start ||
          (a.id < b.id ? -1 : a.id > b.id ? 1 : 0),
      )
      .map((s) => s.id);
    segments.push({ start, end, covering });
  }
  return segments;
}
