// Embedding interface.  The host builds terms, solves goals through an
// answer iterator, and reads bindings back; compiled drivers use the
// higher-level runQuery/takeOutput pair.

var $rt = {
  flags: $FLAGS,

  createWorker: function () {
    return new ($Worker as any)();
  },

  // -- term building -------------------------------------------------------
  variable: function () {
    return new $TV();
  },
  num: function (v: number) {
    return new $TN(v);
  },
  str: function (s: string) {
    return new $TS(s);
  },
  atom: function (name: string) {
    return $mkAtom(name);
  },
  struct: function (name: string, args: any[]) {
    return args.length === 0 ? $mkAtom(name) : new $TG(name, args);
  },
  list: function (items: any[]) {
    return $mkList(items);
  },
  box: function (obj: any) {
    return new ($r.query("t_foreign").ctor)(obj);
  },

  // -- read-back -----------------------------------------------------------
  deref: function (t: any) {
    return t.deref();
  },
  // Host view of a term: primitives unbox, atoms become their name,
  // compounds become {name, args}, unbound variables a tagged object.
  readback: function rb(t: any): any {
    t = t.deref();
    if (t.is_var) return { variable: "_G" + t.time };
    if (t.is_num === true || t.is_str === true || t.is_foreign === true) {
      return t.unbox();
    }
    if (t.arity === 0) return t.name;
    var args = [];
    for (var i = 0; i < t.arity; i++) args.push(rb(t["a" + i]));
    return { name: t.name, args: args };
  },
  format: function (t: any) {
    return $format(t, null);
  },

  // -- solving -------------------------------------------------------------

  // Answer iterator over goal on worker w.  next() returns true while
  // solutions remain (bindings are live in the goal term); on exhaustion
  // it untrails to the entry mark and returns false.
  solve: function (w: any, goal: any) {
    var mark = w.undo.length;
    var entryTime = $time;
    var started = false;
    var done = false;
    var pending: any = null;
    return {
      next: function () {
        if (done) return false;
        var t;
        if (!started) {
          started = true;
          w.cont = function () {
            return $YES;
          };
          t = typeof goal.execute === "function" ? goal : $metacall(w, goal);
        } else {
          t = pending;
        }
        for (;;) {
          if (t === $FAIL || t === null) {
            t = $backtrack(w);
            if (t !== null) continue;
            done = true;
            $untrail(w, mark);
            $time = entryTime;
            return false;
          }
          if (t === $YES) {
            pending = $FAIL;
            return true;
          }
          if (t === $HALT) {
            w.halted = true;
            done = true;
            return false;
          }
          t = typeof t === "function" ? t() : t.execute(w);
        }
      },
    };
  },

  // Solve module:key with fresh variables for varnames; collect every
  // answer as canonical text.  The entry predicate must exist.
  runQuery: function (module: string, key: string, varnames: string[]) {
    var msym = $r.query(module).prepare();
    var ps = msym.nested[key] !== undefined ? msym.nested[key] : msym.exports[key];
    if (ps === undefined || ps.ctor === undefined) {
      throw new Error("existence error: " + module + ":" + key);
    }
    var vars = [];
    for (var i = 0; i < varnames.length; i++) vars.push(new $TV());
    var goal = Object.create(ps.ctor.prototype);
    ps.ctor.apply(goal, vars);
    var w = new ($Worker as any)();
    var answers: string[][] = [];
    var it = (this as any).solve(w, goal);
    while (it.next()) {
      var names = { list: [] as any[] };
      var row = [];
      for (var j = 0; j < vars.length; j++) row.push($format(vars[j], names));
      answers.push(row);
      if (w.halted) break;
    }
    return { vars: varnames, answers: answers };
  },

  // -- output --------------------------------------------------------------
  setSink: function (fn: ((s: string) => void) | null) {
    $sink = fn !== null
      ? fn
      : function (s: string) {
          $OUTBUF.push(s);
        };
  },
  takeOutput: function () {
    var s = $OUTBUF.join("");
    $OUTBUF.length = 0;
    return s;
  },
};

// -- bootstrap ---------------------------------------------------------------

// Prepare the term kinds and capture the primitive constructors used by
// the built-ins above.  Runs at script load, before any emitted module
// is defined; emitted modules re-query these symbols in their own link
// thunks.
$TV = $r.query("t_var").prepare().ctor;
$TN = $r.query("t_num").prepare().ctor;
$TS = $r.query("t_string").prepare().ctor;
$TATOM = $r.query("t_atom").prepare().ctor;
$TG = $r.query("t_gstruct").prepare().ctor;
$r.query("t_attrvar").prepare();
$r.query("t_foreign").prepare();
