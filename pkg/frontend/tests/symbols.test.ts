import { describe, expect, it } from "vitest";
import { evalIn, loadRuntime } from "./helpers";

const MOD_A = `
$r.def("a", function (m) {
  m.def("p/0", function ($m) {
    function f() {}
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) { $c.prototype.name = "p"; $c.prototype.arity = 0; };
  });
  m.exports["p/0"] = m.query("p/0");
  m.link = function () {
    $count.a++;
    $seen.a = $r.query("b").prepare().exports["q/0"];
  };
});
`;

const MOD_B = `
$r.def("b", function (m) {
  m.def("q/0", function ($m) {
    function f() {}
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) { $c.prototype.name = "q"; $c.prototype.arity = 0; };
  });
  m.exports["q/0"] = m.query("q/0");
  m.link = function () {
    $count.b++;
    $seen.b = $r.query("a").prepare().exports["p/0"];
  };
});
`;

function loadPair(first: string, second: string) {
  const ctx = loadRuntime();
  evalIn(ctx, "var $count = { a: 0, b: 0 }; var $seen = {};");
  evalIn(ctx, first);
  evalIn(ctx, second);
  return ctx;
}

describe("symbol records", () => {
  it("query before def yields an UNDEFINED record; def marks NOT_READY", () => {
    const ctx = loadRuntime();
    const sym = ctx.$r.query("nothing");
    expect(sym.status).toBe(0);
    const defined = ctx.$r.def("something", () => {});
    expect(defined.status).toBe(1);
  });

  it("query returns the identical record every time", () => {
    const ctx = loadRuntime();
    const a = ctx.$r.query("x");
    expect(ctx.$r.query("x")).toBe(a);
    ctx.$r.def("x", () => {});
    expect(ctx.$r.query("x")).toBe(a);
  });

  it("chained query addresses a predicate record", () => {
    const ctx = loadRuntime(["m"]);
    const pred = ctx.$r.query("m").query("member/2");
    expect(pred.status).toBe(1);
    ctx.$r.query("m").prepare();
    expect(pred.status).toBe(3);
    expect(typeof pred.ctor).toBe("function");
  });

  it("prepare splices the delegation chain through base ctors", () => {
    const ctx = loadRuntime(["m"]);
    const m = ctx.$r.query("m").prepare();
    const cons = m.query("./2").ctor;
    const base = ctx.$r.query("t_struct").ctor;
    const inst = new cons(ctx.$rt.atom("a"), ctx.$rt.atom("[]"));
    expect(inst instanceof base).toBe(true);
    expect(inst.name).toBe(".");
    expect(inst.arity).toBe(2);
  });
});

describe("linking", () => {
  it("cyclic imports terminate and run each link exactly once", () => {
    const ctx = loadPair(MOD_A, MOD_B);
    ctx.$r.query("a").prepare();
    expect(ctx.$r.query("a").status).toBe(3);
    expect(ctx.$r.query("b").status).toBe(3);
    expect(evalIn(ctx, "$count.a")).toBe(1);
    expect(evalIn(ctx, "$count.b")).toBe(1);
    expect(evalIn(ctx, "$seen.a")).toBe(ctx.$r.query("b").exports["q/0"]);
    expect(evalIn(ctx, "$seen.b")).toBe(ctx.$r.query("a").exports["p/0"]);
  });

  it("prepare is idempotent", () => {
    const ctx = loadPair(MOD_A, MOD_B);
    ctx.$r.query("a").prepare();
    ctx.$r.query("a").prepare();
    ctx.$r.query("b").prepare();
    expect(evalIn(ctx, "$count.a + $count.b")).toBe(2);
  });

  it("is insensitive to load order", () => {
    for (const [x, y] of [[MOD_A, MOD_B], [MOD_B, MOD_A]]) {
      const ctx = loadPair(x, y);
      ctx.$r.query("b").prepare();
      expect(ctx.$r.query("a").status).toBe(3);
      expect(ctx.$r.query("b").status).toBe(3);
      expect(evalIn(ctx, "$count.a")).toBe(1);
      expect(evalIn(ctx, "$count.b")).toBe(1);
    }
  });

  it("compiled fixtures load in any order relative to each other", () => {
    for (const order of [["m", "queens"], ["queens", "m"]]) {
      const ctx = loadRuntime([], order);
      const m = ctx.$r.query("m").prepare();
      const q = ctx.$r.query("queens").prepare();
      expect(m.status).toBe(3);
      expect(q.status).toBe(3);
    }
  });
});
