/** Hash-routed single page: document list, document view, rule editor. */

import { WorkbenchApi, ApiError } from "./api.js";
import { renderDocumentPage } from "./docview.js";
import { IDLE_PREVIEW, previewDraft, promoteDraft } from "./ruleeditor.js";
import type { PreviewState } from "./ruleeditor.js";

const api = new WorkbenchApi("");

function debounce<A extends unknown[]>(fn: (...args: A) => void, wait: number) {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(() => fn(...args), wait);
  };
}

async function renderDocumentList(root: HTMLElement): Promise<void> {
  const ids = await api.listDocuments();
  root.innerHTML = "<h2>documents</h2>";
  const list = document.createElement("ul");
  list.className = "doc-list";
  for (const id of ids) {
    const item = document.createElement("li");
    const link = document.createElement("a");
    link.href = `#/doc/${encodeURIComponent(id)}`;
    link.textContent = id;
    item.appendChild(link);
    list.appendChild(item);
  }
  root.appendChild(list);
}

async function renderRuleEditorPage(root: HTMLElement): Promise<void> {
  root.innerHTML = `
    <section class="rules-page">
      <h2>rule editor</h2>
      <p class="hint">Draft one rule as JSON; every edit previews it server-side.</p>
      <textarea id="draft" rows="18" spellcheck="false"></textarea>
      <div class="controls">
        <button id="promote" disabled>promote to active ruleset</button>
        <span id="verdict" class="status"></span>
      </div>
      <div id="diagnostic" class="errors"></div>
      <table id="counts" class="editor-table"></table>
      <h3>active ruleset</h3>
      <pre id="active"></pre>
    </section>`;

  const draft = root.querySelector("#draft") as HTMLTextAreaElement;
  const promote = root.querySelector("#promote") as HTMLButtonElement;
  const verdict = root.querySelector("#verdict") as HTMLElement;
  const diagnostic = root.querySelector("#diagnostic") as HTMLElement;
  const counts = root.querySelector("#counts") as HTMLTableElement;
  const activeBox = root.querySelector("#active") as HTMLElement;

  const active = await api.getRuleset();
  activeBox.textContent = JSON.stringify(active.ruleset, null, 2);
  const firstRule = active.ruleset.rules[0];
  draft.value = JSON.stringify(firstRule ?? { id: "my-rule", priority: 10, vars: {} }, null, 2);

  function apply(state: PreviewState): void {
    promote.disabled = !state.promotable;
    verdict.textContent = state.status === "ok" ? "compiles" : state.status;
    diagnostic.textContent = state.diagnostic;
    counts.innerHTML = "";
    const head = counts.insertRow();
    for (const label of ["document", "matches"]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    for (const [docId, count] of Object.entries(state.counts).sort()) {
      const row = counts.insertRow();
      row.insertCell().textContent = docId;
      row.insertCell().textContent = String(count);
    }
  }

  const runPreview = debounce(async () => {
    apply(await previewDraft(api, draft.value));
  }, 300);

  draft.addEventListener("input", () => {
    apply({ ...IDLE_PREVIEW, diagnostic: "previewing..." });
    runPreview();
  });

  promote.addEventListener("click", async () => {
    const result = await promoteDraft(api, draft.value);
    if (result.ok) {
      verdict.textContent = "promoted";
      const refreshed = await api.getRuleset();
      activeBox.textContent = JSON.stringify(refreshed.ruleset, null, 2);
    } else {
      diagnostic.textContent = result.diagnostic;
    }
  });

  apply(await previewDraft(api, draft.value));
}

async function route(): Promise<void> {
  const root = document.querySelector("#app") as HTMLElement;
  const hash = window.location.hash || "#/";
  try {
    const docMatch = /^#\/doc\/(.+)$/.exec(hash);
    if (docMatch) {
      await renderDocumentPage(root, api, decodeURIComponent(docMatch[1]));
    } else if (hash === "#/rules") {
      await renderRuleEditorPage(root);
    } else {
      await renderDocumentList(root);
    }
  } catch (error) {
    const note = error instanceof ApiError
      ? `service error ${error.status}: ${error.message}`
      : `service unreachable: ${String(error)}`;
    root.innerHTML = `<div class="errors">${note}</div>` +
      '<button onclick="window.location.reload()">retry</button>';
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
