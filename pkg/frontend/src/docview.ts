/** Document page: highlighted text, legend, graph panel, gold editor. */

import { WorkbenchApi, ApiError } from "./api.js";
import {
  deleteRecord, initEditor, relabelRecord, respanRecord, saveGold,
} from "./goldeditor.js";
import type { GoldEditorState } from "./goldeditor.js";
import { renderGraphSvg } from "./graphview.js";
import { assignLanes, dominantRole, legendRoles, tokenUnderlines } from "./spans.js";
import { ALL_ROLES, ROLE_COLORS } from "./types.js";
import type { AnnotationRecord, DocumentPayload } from "./types.js";

const LAYERS = ["seq", "dep", "chunk", "coref"] as const;

interface ViewState {
  kind: "predicted" | "gold";
  layers: Set<string>;
  editor: GoldEditorState | null;
}

export async function renderDocumentPage(
  root: HTMLElement, api: WorkbenchApi, docId: string,
): Promise<void> {
  const state: ViewState = { kind: "predicted", layers: new Set(LAYERS), editor: null };
  const doc = await api.getDocument(docId);

  root.innerHTML = `
    <section class="doc-page">
      <header>
        <h2>${docId}</h2>
        <div class="controls">
          <label><input type="radio" name="kind" value="predicted" checked> predicted</label>
          <label><input type="radio" name="kind" value="gold"> gold</label>
          <button id="reannotate">re-annotate</button>
        </div>
      </header>
      <div id="status" class="status"></div>
      <div id="legend" class="legend"></div>
      <article id="text" class="doc-text"></article>
      <section class="graph-panel">
        <h3>graph</h3>
        <div class="controls" id="layer-toggles"></div>
        <div id="graph"></div>
      </section>
      <section class="gold-panel">
        <h3>gold editor</h3>
        <div class="controls">
          <button id="load-predicted">start from predicted</button>
          <button id="save-gold" disabled>save gold</button>
          <span id="dirty" class="dirty-flag"></span>
        </div>
        <div id="editor-errors" class="errors"></div>
        <table id="editor-table" class="editor-table"></table>
      </section>
    </section>`;

  const statusBox = root.querySelector("#status") as HTMLElement;

  async function loadAnnotations(): Promise<AnnotationRecord[]> {
    try {
      const body = await api.getAnnotations(docId, state.kind);
      statusBox.textContent = "";
      return body.annotations;
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        statusBox.textContent = `no ${state.kind} annotations stored yet`;
        return [];
      }
      throw error;
    }
  }

  function renderText(annotations: AnnotationRecord[]): void {
    const container = root.querySelector("#text") as HTMLElement;
    container.innerHTML = "";
    for (const sentence of doc.sentences) {
      const locals = annotations.filter((a) => a.span.sent === sentence.index);
      const assignment = assignLanes(locals);
      const row = document.createElement("p");
      row.className = "sentence";
      if (sentence.section !== "Unknown") {
        const tag = document.createElement("span");
        tag.className = "section-tag";
        tag.textContent = sentence.section;
        row.appendChild(tag);
      }
      for (const token of sentence.tokens) {
        const cell = document.createElement("span");
        cell.className = "token";
        const word = document.createElement("span");
        word.className = "word";
        word.textContent = token.surface;
        const tint = dominantRole(token.index, locals);
        if (tint) word.style.color = ROLE_COLORS[tint];
        cell.appendChild(word);
        const lanes = document.createElement("span");
        lanes.className = "lanes";
        lanes.style.height = `${assignment.laneCount * 4}px`;
        for (const segment of tokenUnderlines(token.index, locals, assignment)) {
          const u = document.createElement("i");
          u.className = "lane";
          u.style.top = `${segment.lane * 4}px`;
          u.style.background = segment.color;
          u.title = segment.role;
          lanes.appendChild(u);
        }
        cell.appendChild(lanes);
        container.appendChild(cell);
        container.appendChild(document.createTextNode(" "));
      }
      container.appendChild(row);
    }
  }

  function renderLegend(annotations: AnnotationRecord[]): void {
    const legend = root.querySelector("#legend") as HTMLElement;
    legend.innerHTML = "";
    for (const role of legendRoles(annotations)) {
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.style.background = ROLE_COLORS[role];
      chip.textContent = role;
      legend.appendChild(chip);
    }
  }

  async function renderGraph(): Promise<void> {
    const target = root.querySelector("#graph") as HTMLElement;
    try {
      const graph = await api.getGraph(docId, [...state.layers]);
      target.innerHTML = renderGraphSvg(graph);
    } catch (error) {
      target.textContent = error instanceof ApiError
        ? `graph unavailable: ${error.message}` : String(error);
    }
  }

  function renderEditor(): void {
    const table = root.querySelector("#editor-table") as HTMLTableElement;
    const saveButton = root.querySelector("#save-gold") as HTMLButtonElement;
    const dirtyFlag = root.querySelector("#dirty") as HTMLElement;
    const errorBox = root.querySelector("#editor-errors") as HTMLElement;
    table.innerHTML = "";
    const editor = state.editor;
    if (!editor) {
      saveButton.disabled = true;
      dirtyFlag.textContent = "";
      return;
    }
    errorBox.textContent = editor.conflict
      ? "conflict: another writer holds this document; reload before saving"
      : editor.errors.join("; ");
    saveButton.disabled = !editor.dirty;
    dirtyFlag.textContent = editor.dirty ? "unsaved changes" : "";
    const head = table.insertRow();
    for (const label of ["id", "role", "span", "emotion", "provenance", ""]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    for (const record of editor.records) {
      const row = table.insertRow();
      row.insertCell().textContent = String(record.id);
      const roleCell = row.insertCell();
      const select = document.createElement("select");
      for (const role of ALL_ROLES) {
        const option = document.createElement("option");
        option.value = role;
        option.textContent = role;
        option.selected = role === record.role;
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        state.editor = relabelRecord(editor, record.id, select.value as never);
        renderEditor();
      });
      roleCell.appendChild(select);
      const spanCell = row.insertCell();
      const spanInput = document.createElement("input");
      spanInput.value = `${record.span.sent}:${record.span.start}:${record.span.end}`;
      spanInput.size = 8;
      spanInput.addEventListener("change", () => {
        const parts = spanInput.value.split(":").map(Number);
        if (parts.length === 3 && parts.every((n) => Number.isInteger(n))) {
          state.editor = respanRecord(editor, record.id,
            { sent: parts[0], start: parts[1], end: parts[2] });
          renderEditor();
        }
      });
      spanCell.appendChild(spanInput);
      row.insertCell().textContent = record.emotion ?? "";
      row.insertCell().textContent = record.provenance;
      const actions = row.insertCell();
      const del = document.createElement("button");
      del.textContent = "delete";
      del.addEventListener("click", () => {
        state.editor = deleteRecord(editor, record.id);
        renderEditor();
      });
      actions.appendChild(del);
    }
  }

  async function refresh(): Promise<void> {
    const annotations = await loadAnnotations();
    renderLegend(annotations);
    renderText(annotations);
    await renderGraph();
  }

  const toggles = root.querySelector("#layer-toggles") as HTMLElement;
  for (const layer of LAYERS) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = true;
    box.addEventListener("change", () => {
      if (box.checked) state.layers.add(layer);
      else state.layers.delete(layer);
      void renderGraph();
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(layer));
    toggles.appendChild(label);
  }

  root.querySelectorAll<HTMLInputElement>("input[name=kind]").forEach((radio) => {
    radio.addEventListener("change", () => {
      state.kind = radio.value as ViewState["kind"];
      void refresh();
    });
  });

  (root.querySelector("#reannotate") as HTMLButtonElement)
    .addEventListener("click", async () => {
      await api.annotate(docId);
      await refresh();
    });

  (root.querySelector("#load-predicted") as HTMLButtonElement)
    .addEventListener("click", async () => {
      const body = await api.getAnnotations(docId, "predicted");
      state.editor = initEditor(docId, body.annotations);
      state.editor = { ...state.editor, dirty: true };   // saving accept-all is meaningful
      renderEditor();
    });

  (root.querySelector("#save-gold") as HTMLButtonElement)
    .addEventListener("click", async () => {
      if (!state.editor) return;
      state.editor = await saveGold(api, state.editor);
      renderEditor();
      if (!state.editor.conflict && state.editor.errors.length === 0) {
        statusBox.textContent = "gold saved";
      }
    });

  await refresh();
}
