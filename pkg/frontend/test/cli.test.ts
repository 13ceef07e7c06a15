import { access, mkdtemp, rm, stat } from "fs/promises";
import { tmpdir } from "os";
import path from "path";

import { describe, expect, it } from "vitest";

import { runCli } from "../src/cli.js";
import { makeFig3Bundle } from "./bundle.js";

async function exists(p: string): Promise<boolean> {
  try {
    await access(p);
    return true;
  } catch {
    return false;
  }
}

describe("runCli", () => {
  it("renders a bundle and exits 0", async () => {
    const dir = await makeFig3Bundle();
    const out = path.join(dir, "fig3.svg");
    try {
      const code = await runCli(["render", "--figure", "fig3", "--in", dir, "--out", out]);
      expect(code).toBe(0);
      expect((await stat(out)).size).toBeGreaterThan(0);
    } finally {
      await rm(dir, { recursive: true, force: true });
    }
  });

  it("exits nonzero on a missing input dir without creating the output", async () => {
    const scratch = await mkdtemp(path.join(tmpdir(), "cli-"));
    const out = path.join(scratch, "out.svg");
    try {
      const code = await runCli([
        "render", "--figure", "fig3", "--in", path.join(scratch, "no-such-dir"), "--out", out,
      ]);
      expect(code).not.toBe(0);
      expect(await exists(out)).toBe(false);
    } finally {
      await rm(scratch, { recursive: true, force: true });
    }
  });

  it("exits nonzero on an unknown figure id", async () => {
    const code = await runCli(["render", "--figure", "fig9", "--in", ".", "--out", "x.svg"]);
    expect(code).toBe(2);
    expect(await exists("x.svg")).toBe(false);
  });

  it("exits nonzero on bad arguments", async () => {
    expect(await runCli(["render", "--figure", "fig3"])).toBe(2);
    expect(await runCli(["plot"])).toBe(2);
    expect(await runCli([])).toBe(2);
  });
});
