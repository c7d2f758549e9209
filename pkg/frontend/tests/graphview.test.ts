import { describe, expect, it } from "vitest";

import { renderGraphSvg } from "../src/graphview.js";
import type { GraphPayload } from "../src/types.js";

// Mirrors the service's JSON export of the passive-attack sentence.
const SKILLS_GRAPH: GraphPayload = {
  schema: "emorole-graph/1",
  layers: ["Sequential", "ChunkMembership"],
  nodes: [
    { id: "0:0", surface: "Mes", sent: 0, index: 0, roles: ["Experiencer", "Territory"] },
    { id: "0:1", surface: "compétences", sent: 0, index: 1, roles: ["Territory"] },
    { id: "0:2", surface: "sont", sent: 0, index: 2, roles: [] },
    { id: "0:3", surface: "attaquées", sent: 0, index: 3, roles: ["Attack"] },
    { id: "0:4", surface: "par", sent: 0, index: 4, roles: [] },
    { id: "0:5", surface: "Marc", sent: 0, index: 5, roles: ["Attacker"] },
  ],
  edges: [
    { src: "0:0", dst: "0:1", type: "Sequential", label: null },
    { src: "0:1", dst: "0:2", type: "Sequential", label: null },
    { src: "0:0", dst: "0:1", type: "ChunkMembership", label: null },
    { src: "0:3", dst: "0:1", type: "Dependency", label: "nsubj:pass" },
  ],
};

describe("renderGraphSvg", () => {
  it("renders one labeled node per token", () => {
    const svg = renderGraphSvg(SKILLS_GRAPH);
    expect(svg.match(/<circle/g)).toHaveLength(6);
    expect(svg).toContain("Mes-0");
    expect(svg).toContain("Marc-5");
  });

  it("paints nodes with the palette by role priority", () => {
    const svg = renderGraphSvg(SKILLS_GRAPH);
    expect(svg).toContain('fill="red"');      // Experiencer beats Territory on Mes
    expect(svg).toContain('fill="purple"');   // compétences
    expect(svg).toContain('fill="gold"');     // attaquées
    expect(svg).toContain('fill="brown"');    // Marc
    expect(svg).toContain('fill="white"');    // role-less tokens
  });

  it("colors edges per layer and labels dependencies", () => {
    const svg = renderGraphSvg(SKILLS_GRAPH);
    expect(svg).toContain('stroke="pink"');
    expect(svg).toContain('stroke="green"');
    expect(svg).toContain(">nsubj:pass</text>");
  });

  it("renders coref edges dashed across sentences", () => {
    const twoSentences: GraphPayload = {
      schema: "emorole-graph/1",
      layers: ["Coref"],
      nodes: [
        { id: "0:0", surface: "Gustave", sent: 0, index: 0, roles: [] },
        { id: "1:0", surface: "He", sent: 1, index: 0, roles: [] },
      ],
      edges: [{ src: "0:0", dst: "1:0", type: "Coref", label: "chain-0" }],
    };
    const svg = renderGraphSvg(twoSentences);
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain('stroke="blue"');
  });

  it("shows isolated nodes when no layers are materialized", () => {
    const bare: GraphPayload = { ...SKILLS_GRAPH, layers: [], edges: [] };
    const svg = renderGraphSvg(bare);
    expect(svg.match(/<circle/g)).toHaveLength(6);
    expect(svg).not.toContain("<path");
    expect(svg).not.toContain("<line");
  });

  it("escapes markup in surfaces and labels", () => {
    const tricky: GraphPayload = {
      schema: "emorole-graph/1",
      layers: [],
      nodes: [{ id: "0:0", surface: "a<b>\"c\"", sent: 0, index: 0, roles: [] }],
      edges: [],
    };
    const svg = renderGraphSvg(tricky);
    expect(svg).toContain("a&lt;b&gt;&quot;c&quot;");
    expect(svg).not.toContain("<b>");
  });
});
