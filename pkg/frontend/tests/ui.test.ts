import { describe, expect, it } from "vitest";

import { initialState, withClusters, withPropagation } from "../src/state.js";
import {
  escapeHtml,
  renderBoard,
  renderClusterCard,
  renderLabelDialog,
  renderMemberPage,
  renderPropagationPanel,
} from "../src/ui.js";
import type { ClusterSummary } from "../src/types.js";

function cluster(id: number, size: number, label: string | null = null): ClusterSummary {
  return { id, size, label, representatives: ["first rep", "second rep"] };
}

describe("cluster cards", () => {
  it("shows size and an unlabeled badge for fresh clusters", () => {
    const html = renderClusterCard(cluster(3, 25));
    expect(html).toContain("25 utterances");
    expect(html).toContain("unlabeled");
    expect(html).toContain("first rep");
  });

  it("echoes the intent after labeling", () => {
    const html = renderClusterCard(cluster(3, 25, "login issue"));
    expect(html).toContain("login issue");
    expect(html).not.toContain(">unlabeled<");
  });

  it("escapes markup in utterance text and labels", () => {
    const nasty = {
      id: 0, size: 1, label: "<b>bold</b>",
      representatives: ['<script>alert("x")</script>'],
    };
    const html = renderClusterCard(nasty);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
    expect(html).toContain("&lt;b&gt;bold&lt;/b&gt;");
  });
});

describe("board", () => {
  it("renders one card per visible cluster", () => {
    const state = withClusters(initialState(), [cluster(0, 9), cluster(1, 5, "x")]);
    const html = renderBoard(state);
    expect(html.match(/class="card"/g)).toHaveLength(2);
    expect(html).not.toContain("page 1 /"); // single page: no pager
  });

  it("surfaces errors inline", () => {
    const state = { ...initialState(), error: "service unreachable" };
    expect(renderBoard(state)).toContain("service unreachable");
  });
});

describe("label dialog", () => {
  it("disables submit while the intent is empty", () => {
    const empty = renderLabelDialog(cluster(1, 4), "");
    expect(empty).toMatch(/intent-submit" disabled/);
    const filled = renderLabelDialog(cluster(1, 4), "billing");
    expect(filled).not.toMatch(/intent-submit" disabled/);
  });
});

describe("member pager", () => {
  it("disables prev on the first page and next past the end", () => {
    const first = renderMemberPage({
      cluster: 0, page: 0, page_size: 10, total: 25,
      members: [{ id: "u1", text: "hello" }],
    });
    expect(first).toMatch(/members-prev" disabled/);
    expect(first).not.toMatch(/members-next"\s+disabled/);
    const last = renderMemberPage({
      cluster: 0, page: 2, page_size: 10, total: 25,
      members: [],
    });
    expect(last).toMatch(/members-next"\s+disabled/);
  });
});

describe("propagation panel", () => {
  it("is disabled with guidance until two clusters are labeled", () => {
    const state = withClusters(initialState(), [cluster(0, 9, "a"), cluster(1, 5)]);
    const html = renderPropagationPanel(state, 0.7);
    expect(html).toMatch(/propagate-btn" disabled/);
    expect(html).toContain("label at least two clusters");
  });

  it("shows the propagation summary and per-intent histogram verbatim", () => {
    let state = withClusters(initialState(), [cluster(0, 9, "a"), cluster(1, 5, "b")]);
    state = withPropagation(state, {
      propagated: 41, remaining_unlabeled: 0, threshold: 0.5,
      per_intent: { a: 30, b: 11 },
    });
    const html = renderPropagationPanel(state, 0.5);
    expect(html).not.toMatch(/propagate-btn" disabled/);
    expect(html).toContain("propagated 41");
    expect(html).toContain("remaining unlabeled 0");
    expect(html).toContain(">30</span>");
    expect(html).toContain(">11</span>");
  });

  it("defaults the threshold slider to 0.7", () => {
    const html = renderPropagationPanel(initialState(), 0.7);
    expect(html).toContain('value="0.7"');
    expect(html).toContain("0.70");
  });
});
