/** The eleven frame tags, their canonical order, fixed colors, and foundation help text. */

export type Foundation =
  | "care"
  | "fairness"
  | "loyalty"
  | "authority"
  | "sanctity"
  | "morality";

export interface TagInfo {
  name: string;
  foundation: Foundation;
  polarity: "virtue" | "vice" | "general";
}

/** Canonical order; the array index is the tag's canonical index. */
export const TAGS: TagInfo[] = [
  { name: "care", foundation: "care", polarity: "virtue" },
  { name: "harm", foundation: "care", polarity: "vice" },
  { name: "fairness", foundation: "fairness", polarity: "virtue" },
  { name: "cheating", foundation: "fairness", polarity: "vice" },
  { name: "loyalty", foundation: "loyalty", polarity: "virtue" },
  { name: "betrayal", foundation: "loyalty", polarity: "vice" },
  { name: "authority", foundation: "authority", polarity: "virtue" },
  { name: "subversion", foundation: "authority", polarity: "vice" },
  { name: "sanctity", foundation: "sanctity", polarity: "virtue" },
  { name: "degradation", foundation: "sanctity", polarity: "vice" },
  { name: "morality", foundation: "morality", polarity: "general" },
];

export const TAG_NAMES = TAGS.map((t) => t.name);

/** Fixed, documented highlight colors, one per tag. */
export const TAG_COLORS: Record<string, string> = {
  care: "#2e7d32",
  harm: "#c62828",
  fairness: "#1565c0",
  cheating: "#ef6c00",
  loyalty: "#6a1b9a",
  betrayal: "#ad1457",
  authority: "#283593",
  subversion: "#f9a825",
  sanctity: "#00838f",
  degradation: "#4e342e",
  morality: "#546e7a",
};

/** Short working definitions shown in pickers and tag chips. */
export const FOUNDATION_DEFINITIONS: Record<Foundation, string> = {
  care: "Kindness, protection, and easing the suffering of others (violated: harm).",
  fairness: "Justice, equal rights, and honest dealing (violated: cheating).",
  loyalty: "Standing with one's group, family, or nation (violated: betrayal).",
  authority: "Respect for legitimate leadership, law, and tradition (violated: subversion).",
  sanctity: "Purity, dignity, and living in an elevated way (violated: degradation).",
  morality: "A general appeal to right and wrong beyond any one foundation.",
};

export function tagIndex(name: string): number {
  const index = TAG_NAMES.indexOf(name);
  if (index < 0) throw new Error(`unknown frame tag: ${name}`);
  return index;
}

export function tagColor(name: string): string {
  const color = TAG_COLORS[name];
  if (!color) throw new Error(`unknown frame tag: ${name}`);
  return color;
}

/**
 * Most-voted tag, ties broken by canonical index. Mirrors the server's
 * derivation for optimistic updates; the server value wins on refresh.
 */
export function winningTag(assignments: { tag: string; vote_count: number }[]): string {
  if (!assignments.length) throw new Error("no tag assignments");
  let best = assignments[0]!;
  for (const candidate of assignments.slice(1)) {
    if (
      candidate.vote_count > best.vote_count ||
      (candidate.vote_count === best.vote_count &&
        tagIndex(candidate.tag) < tagIndex(best.tag))
    ) {
      best = candidate;
    }
  }
  return best.tag;
}

/** Foundation-level grouping for the tag picker, in canonical order. */
export function tagsByFoundation(): { foundation: Foundation; tags: TagInfo[] }[] {
  const groups: { foundation: Foundation; tags: TagInfo[] }[] = [];
  for (const tag of TAGS) {
    const group = groups.find((g) => g.foundation === tag.foundation);
    if (group) {
      group.tags.push(tag);
    } else {
      groups.push({ foundation: tag.foundation, tags: [tag] });
    }
  }
  return groups;
}
