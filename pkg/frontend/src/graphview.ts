/** Client-side rendering of the layered token graph as SVG markup.
 *
 * Tokens of each sentence sit on a row; dependency edges arc above the
 * row, sequential and chunk edges run below it, coref edges connect
 * rows with dashed lines.  Node fill matches the engine's role palette.
 * Produces an SVG string so the logic stays testable without a DOM.
 */

import { EDGE_COLORS, ROLE_COLORS, ROLE_PRIORITY } from "./types.js";
import type { GraphPayload, Role } from "./types.js";

const X_STEP = 96;
const ROW_STEP = 150;
const TOP = 70;
const LEFT = 50;
const NODE_R = 7;

function nodeFill(roles: string[]): string {
  for (const role of ROLE_PRIORITY) {
    if (roles.includes(role)) return ROLE_COLORS[role as Role];
  }
  return roles.length ? "gray" : "white";
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function renderGraphSvg(graph: GraphPayload): string {
  const position = new Map<string, { x: number; y: number }>();
  let maxX = 0;
  let maxSent = 0;
  for (const node of graph.nodes) {
    const x = LEFT + node.index * X_STEP;
    const y = TOP + node.sent * ROW_STEP;
    position.set(node.id, { x, y });
    maxX = Math.max(maxX, x);
    maxSent = Math.max(maxSent, node.sent);
  }
  const width = maxX + LEFT;
  const height = TOP + maxSent * ROW_STEP + 80;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" class="textgraph">`);

  for (const edge of graph.edges) {
    const a = position.get(edge.src);
    const b = position.get(edge.dst);
    if (!a || !b) continue;
    const color = EDGE_COLORS[edge.type];
    if (edge.type === "Coref") {
      parts.push(`<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" ` +
        `stroke="${color}" stroke-dasharray="6 4" fill="none" class="edge-coref"/>`);
      continue;
    }
    const above = edge.type === "Dependency";
    const spread = Math.abs(b.x - a.x);
    const lift = above ? -(20 + spread / 4) : 18 + spread / 10;
    const midX = (a.x + b.x) / 2;
    const midY = a.y + lift;
    parts.push(`<path d="M ${a.x} ${a.y} Q ${midX} ${midY} ${b.x} ${b.y}" ` +
      `stroke="${color}" fill="none" class="edge-${edge.type.toLowerCase()}"/>`);
    if (edge.type === "Dependency" && edge.label) {
      parts.push(`<text x="${midX}" y="${a.y + lift / 2}" class="edge-label" ` +
        `text-anchor="middle">${escapeXml(edge.label)}</text>`);
    }
  }

  for (const node of graph.nodes) {
    const { x, y } = position.get(node.id)!;
    const fill = nodeFill(node.roles);
    const title = node.roles.length ? `${node.surface}: ${node.roles.join(", ")}` : node.surface;
    parts.push(`<g class="node"><title>${escapeXml(title)}</title>` +
      `<circle cx="${x}" cy="${y}" r="${NODE_R}" fill="${fill}" stroke="black"/>` +
      `<text x="${x}" y="${y + 24}" text-anchor="middle" class="node-label">` +
      `${escapeXml(node.surface)}-${node.index}</text></g>`);
  }

  parts.push("</svg>");
  return parts.join("");
}
