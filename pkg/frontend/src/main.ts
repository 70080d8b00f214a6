// Browser bootstrap: wires the pure renderers to the live API. State is
// refreshed from the service after every mutation (optimistic updates would
// risk divergence from the single source of truth).

import { ApiClient, guidanceFor } from "./api.js";
import {
  BoardState,
  DEFAULT_THRESHOLD,
  initialState,
  intentValid,
  withClusters,
  withError,
  withPage,
  withProgress,
  withPropagation,
} from "./state.js";
import {
  renderBoard,
  renderLabelDialog,
  renderMemberPage,
  renderPropagationPanel,
} from "./ui.js";

const MEMBER_PAGE_SIZE = 25;

function mount(api: ApiClient, root: HTMLElement): void {
  let state: BoardState = initialState();
  let threshold = DEFAULT_THRESHOLD;
  let dialogCluster: number | null = null;
  let dialogDraft = "";
  let memberView: { cluster: number; page: number } | null = null;

  async function refresh(): Promise<void> {
    try {
      state = withClusters(state, await api.clusters());
      state = withProgress(state, await api.progress());
    } catch (err) {
      state = withError(state, guidanceFor(err));
    }
    render();
  }

  async function render(): Promise<void> {
    const dialog =
      dialogCluster !== null
        ? renderLabelDialog(
            state.clusters.find((c) => c.id === dialogCluster)!,
            dialogDraft,
          )
        : "";
    let members = "";
    if (memberView !== null) {
      try {
        members = renderMemberPage(
          await api.members(memberView.cluster, memberView.page, MEMBER_PAGE_SIZE),
        );
      } catch (err) {
        state = withError(state, guidanceFor(err));
      }
    }
    root.innerHTML = `
      <h1>intent labeling</h1>
      ${state.progress ? renderBoard(state) : renderBoard(state)}
      ${dialog}${members}
      ${renderPropagationPanel(state, threshold)}
    `;
    wire();
  }

  function wire(): void {
    root.querySelectorAll<HTMLButtonElement>(".label-btn").forEach((btn) =>
      btn.addEventListener("click", () => {
        dialogCluster = Number(btn.dataset.cluster);
        dialogDraft = "";
        render();
      }),
    );
    root.querySelectorAll<HTMLButtonElement>(".members-btn").forEach((btn) =>
      btn.addEventListener("click", () => {
        memberView = { cluster: Number(btn.dataset.cluster), page: 0 };
        render();
      }),
    );
    const input = root.querySelector<HTMLInputElement>(".intent-input");
    input?.addEventListener("input", () => {
      dialogDraft = input.value;
      const submit = root.querySelector<HTMLButtonElement>(".intent-submit");
      if (submit) submit.disabled = !intentValid(dialogDraft);
    });
    root.querySelector<HTMLButtonElement>(".intent-submit")?.addEventListener(
      "click",
      async () => {
        if (dialogCluster === null || !intentValid(dialogDraft)) return;
        try {
          await api.labelCluster(dialogCluster, dialogDraft.trim());
          dialogCluster = null;
        } catch (err) {
          state = withError(state, guidanceFor(err));
        }
        await refresh();
      },
    );
    root.querySelector(".dialog-cancel")?.addEventListener("click", () => {
      dialogCluster = null;
      render();
    });
    root.querySelector<HTMLInputElement>(".threshold")?.addEventListener(
      "change",
      (event) => {
        threshold = Number((event.target as HTMLInputElement).value);
        render();
      },
    );
    root.querySelector<HTMLButtonElement>(".propagate-btn")?.addEventListener(
      "click",
      async () => {
        try {
          state = withPropagation(state, await api.propagate(threshold));
        } catch (err) {
          state = withError(state, guidanceFor(err));
        }
        await refresh();
      },
    );
    root.querySelector<HTMLButtonElement>(".export-btn")?.addEventListener(
      "click",
      async () => {
        try {
          const body = await api.exportCorpus();
          const blob = new Blob([body], { type: "application/x-ndjson" });
          const link = document.createElement("a");
          link.href = URL.createObjectURL(blob);
          link.download = "labeled_corpus.jsonl";
          link.click();
          URL.revokeObjectURL(link.href);
        } catch (err) {
          state = withError(state, guidanceFor(err));
          render();
        }
      },
    );
    root.querySelector(".page-prev")?.addEventListener("click", () => {
      state = withPage(state, state.page - 1);
      render();
    });
    root.querySelector(".page-next")?.addEventListener("click", () => {
      state = withPage(state, state.page + 1);
      render();
    });
    root.querySelectorAll(".members-prev, .members-next").forEach((btn) =>
      btn.addEventListener("click", () => {
        if (memberView === null) return;
        const delta = btn.classList.contains("members-next") ? 1 : -1;
        memberView = {
          cluster: memberView.cluster,
          page: Math.max(0, memberView.page + delta),
        };
        render();
      }),
    );
  }

  void refresh();
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    const base =
      new URLSearchParams(window.location.search).get("api") ??
      "http://127.0.0.1:8000";
    mount(new ApiClient(base), root);
  }
}

export { mount };
