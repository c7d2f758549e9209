/** Layout logic for loss-free span highlighting.
 *
 * Overlapping spans render as stacked underlines rather than nested
 * backgrounds: every annotation gets a lane below the text, so an
 * Experiencer inside a Territory stays legible.  Pure functions, no DOM.
 */

import { ROLE_COLORS, ROLE_PRIORITY } from "./types.js";
import type { AnnotationRecord, Role } from "./types.js";

export interface LaneAssignment {
  /** annotation id -> lane index (0 = closest to the text) */
  lanes: Map<number, number>;
  laneCount: number;
}

/** Assign each annotation of one sentence to the lowest free lane. */
export function assignLanes(annotations: AnnotationRecord[]): LaneAssignment {
  const ordered = [...annotations].sort(
    (a, b) => a.span.start - b.span.start
      || (b.span.end - b.span.start) - (a.span.end - a.span.start)
      || a.id - b.id);
  const laneEnds: number[] = [];          // per lane, the end of its last span
  const lanes = new Map<number, number>();
  for (const ann of ordered) {
    let lane = laneEnds.findIndex((end) => end <= ann.span.start);
    if (lane === -1) {
      lane = laneEnds.length;
      laneEnds.push(0);
    }
    laneEnds[lane] = ann.span.end;
    lanes.set(ann.id, lane);
  }
  return { lanes, laneCount: laneEnds.length };
}

export interface UnderlineSegment {
  annotationId: number;
  role: Role;
  color: string;
  lane: number;
  startsHere: boolean;
  endsHere: boolean;
}

/** Underline segments covering one token, ordered by lane. */
export function tokenUnderlines(
  tokenIndex: number,
  annotations: AnnotationRecord[],
  assignment: LaneAssignment,
): UnderlineSegment[] {
  const out: UnderlineSegment[] = [];
  for (const ann of annotations) {
    if (ann.span.start <= tokenIndex && tokenIndex < ann.span.end) {
      out.push({
        annotationId: ann.id,
        role: ann.role,
        color: ROLE_COLORS[ann.role],
        lane: assignment.lanes.get(ann.id) ?? 0,
        startsHere: ann.span.start === tokenIndex,
        endsHere: ann.span.end === tokenIndex + 1,
      });
    }
  }
  return out.sort((a, b) => a.lane - b.lane);
}

/** The highest-priority role covering a token, for the text tint. */
export function dominantRole(
  tokenIndex: number,
  annotations: AnnotationRecord[],
): Role | null {
  let best: Role | null = null;
  let bestRank = ROLE_PRIORITY.length;
  for (const ann of annotations) {
    if (ann.span.start <= tokenIndex && tokenIndex < ann.span.end) {
      const rank = ROLE_PRIORITY.indexOf(ann.role);
      if (rank !== -1 && rank < bestRank) {
        bestRank = rank;
        best = ann.role;
      }
    }
  }
  return best;
}

/** Roles actually present, for the legend (insertion-ordered by priority). */
export function legendRoles(annotations: AnnotationRecord[]): Role[] {
  const present = new Set(annotations.map((a) => a.role));
  return ROLE_PRIORITY.filter((role) => present.has(role));
}
