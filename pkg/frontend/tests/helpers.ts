import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { createContext, runInContext } from "node:vm";

const HERE = dirname(fileURLToPath(import.meta.url));

// Load dist/runtime.js (plus compiled fixture modules) into a fresh VM
// context so every test starts from a clean symbol root and timestamp
// counter.  Top-level `var` declarations become context properties, so
// the returned context exposes $s, $extends, $r, $rt, and friends.
export function loadRuntime(fixtures: string[] = [], order?: string[]): any {
  const ctx: any = createContext({ console });
  const files = ["runtime"].concat(order ?? fixtures);
  for (const f of files) {
    const path =
      f === "runtime"
        ? join(HERE, "..", "dist", "runtime.js")
        : join(HERE, "fixtures", f + ".js");
    runInContext(readFileSync(path, "utf8"), ctx, { filename: f + ".js" });
  }
  return ctx;
}

export function evalIn(ctx: any, src: string): any {
  return runInContext(src, ctx);
}

// Drain an answer iterator, formatting `vars` after each solution.
export function collect(ctx: any, goal: any, vars: any[] = []): string[][] {
  const w = ctx.$rt.createWorker();
  const it = ctx.$rt.solve(w, goal);
  const out: string[][] = [];
  while (it.next()) out.push(vars.map((v) => ctx.$rt.format(v)));
  return out;
}
