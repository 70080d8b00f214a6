// End-to-end: the UI's own client and state logic driven against a real
// labeling service on the bundled 100-utterance fixture.

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { canPropagate, withClusters, initialState } from "../src/state.js";

const PORT = 8942;
const BASE = `http://127.0.0.1:${PORT}`;
const FIXTURE = new URL("../../fixtures/ui_fixture_100.jsonl", import.meta.url)
  .pathname;

let server: ChildProcess;
const client = new ApiClient(BASE);

async function waitForServer(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      await client.progress();
      return;
    } catch (err) {
      lastError = err;
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
  throw new Error(`labeling service never came up: ${lastError}`);
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "iterintent.cli", "serve", "--input", FIXTURE,
     "--port", String(PORT), "--seed", "0"],
    { stdio: "ignore" },
  );
  await waitForServer(60_000);
}, 70_000);

afterAll(() => {
  server?.kill();
});

describe("labeling flow end-to-end", () => {
  it("labels two clusters, propagates at 0.0, and exports 100 rows", async () => {
    const clusters = await client.clusters();
    expect(clusters.length).toBeGreaterThanOrEqual(2);
    expect(clusters[0].size).toBeGreaterThanOrEqual(clusters[1].size);

    let board = withClusters(initialState(), clusters);
    expect(canPropagate(board.clusters)).toBe(false);

    const first = await client.labelCluster(clusters[0].id, "schedule inquiry");
    expect(first.label).toBe("schedule inquiry");
    const second = await client.labelCluster(clusters[1].id, "connection search");
    expect(second.label).toBe("connection search");

    board = withClusters(board, await client.clusters());
    expect(canPropagate(board.clusters)).toBe(true);

    const summary = await client.propagate(0.0);
    expect(summary.remaining_unlabeled).toBe(0);

    const progress = await client.progress();
    expect(progress.total).toBe(100);
    expect(progress.unlabeled).toBe(0);
    expect(progress.labeled + progress.propagated).toBe(100);

    const corpus = await client.exportCorpus();
    const rows = corpus.split("\n").filter((line) => line.length > 0);
    expect(rows).toHaveLength(100);
    const parsed = rows.map((line) => JSON.parse(line));
    for (const row of parsed) {
      expect(["cluster", "propagated"]).toContain(row.source);
      expect(["schedule inquiry", "connection search"]).toContain(row.intent);
    }
  }, 30_000);

  it("pages cluster members stably through the client", async () => {
    const clusters = await client.clusters();
    const big = clusters[0];
    const pageSize = 25;
    const seen = new Set<string>();
    let page = 0;
    for (;;) {
      const members = await client.members(big.id, page, pageSize);
      expect(members.total).toBe(big.size);
      if (members.members.length === 0) break;
      for (const m of members.members) seen.add(m.id);
      page += 1;
    }
    expect(seen.size).toBe(big.size);
  });
});
