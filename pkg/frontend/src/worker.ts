// Worker state and driver loop.  The currency of the trampoline is: a
// parameterless closure (continuation), a goal term (its execute method
// is invoked), the FAIL sentinel (backtrack), the YES sentinel (an
// answer), or the HALT sentinel.  One worker is one logical thread;
// metacall splices continuations on the same worker rather than nesting
// driver loops.

var $FAIL: any = { toString: function () { return "$FAIL"; } };
var $YES: any = { toString: function () { return "$YES"; } };
var $HALT: any = { toString: function () { return "$HALT"; } };

var $FLAGS = {
  // Conditional trailing (skip trailing variables younger than the
  // newest choicepoint).  Off by default: unconditional trailing is the
  // normative behavior.
  conditionalTrail: false,
};

function $Worker(this: any) {
  this.goal = null;
  this.undo = [];
  this.choice = null;
  this.frame = null;
  this.cont = null;
  this.halted = false;
}

($Worker as any).prototype.fail = function () {
  return $FAIL;
};

($Worker as any).prototype.trail = function (v: any) {
  this.undo.push(v);
};

($Worker as any).prototype.unify = function (a: any, b: any) {
  a = a.deref();
  b = b.deref();
  if (a === b) return true;
  return a.unify(this, b);
};

($Worker as any).prototype.isVar = function (t: any) {
  return t.deref().is_var === true;
};

($Worker as any).prototype.key = function (t: any) {
  if (t.is_var) return null;
  if (t.is_num === true) return "N:" + $fmtNum(t.a0);
  if (t.is_str === true) return "S:" + t.a0;
  return t.name + "/" + t.arity;
};

($Worker as any).prototype.pushFrame = function (n: number) {
  var f = { y: new Array(n), frame: this.frame, cont: this.cont, cut: null };
  this.frame = f;
  return f;
};

($Worker as any).prototype.pushChoice = function (alts: any[], goal: any) {
  this.choice = {
    alts: alts,
    i: 1,
    goal: goal,
    frame: this.frame,
    cont: this.cont,
    undo: this.undo.length,
    time: $time,
    prev: this.choice,
  };
};

($Worker as any).prototype.arith = function (t: any) {
  return $arith(t);
};

($Worker as any).prototype.atom = function (name: string) {
  return new ($r.query("t_atom").prepare().ctor)(name);
};

($Worker as any).prototype.box = function (obj: any) {
  return new ($r.query("t_foreign").prepare().ctor)(obj);
};

// -- binding and the trail -------------------------------------------------

// Bind variable v to (dereferenced) term t, trail the binding, then run
// the attribute hooks of v if it carries attributes.  The binding is in
// place while the hooks run; a failing hook makes the unification fail
// and the enclosing failure undoes the binding.
function $bindVar(w: any, v: any, t: any) {
  v.ref = t;
  if (!$FLAGS.conditionalTrail || (w.choice !== null && v.time < w.choice.time)) {
    w.undo.push(v);
  }
  if (v.attrs !== undefined) return $wakeHooks(w, v, t);
  return true;
}

function $untrail(w: any, mark: number) {
  var undo = w.undo;
  while (undo.length > mark) undo.pop().unbind();
}

function $wakeHooks(w: any, v: any, value: any) {
  var attrs = v.attrs;
  for (var mod in attrs) {
    if (!Object.prototype.hasOwnProperty.call(attrs, mod)) continue;
    var msym = $r.query(mod).prepare();
    var ps = msym.nested["attr_unify_hook/2"];
    if (ps === undefined || ps.ctor === undefined) {
      throw new Error("existence error: " + mod + ":attr_unify_hook/2");
    }
    var goal = new ps.ctor(attrs[mod], value);
    if (!$callNested(w, goal)) return false;
  }
  return true;
}

// Change the attribute map of a variable, trailing the previous map.  A
// plain variable is upgraded by binding it to a fresh attrvar.
function $setAttr(w: any, v: any, mod: string, value: any) {
  if (v.attrs === undefined) {
    var av = new ($r.query("t_attrvar").prepare().ctor)();
    av.attrs[mod] = value;
    v.ref = av;
    w.undo.push(v);
    return;
  }
  var old = v.attrs;
  var na: any = {};
  for (var k in old) {
    if (Object.prototype.hasOwnProperty.call(old, k)) na[k] = old[k];
  }
  na[mod] = value;
  v.attrs = na;
  w.undo.push({
    unbind: function () {
      v.attrs = old;
    },
  });
}

function $delAttr(w: any, v: any, mod: string) {
  if (v.attrs === undefined || v.attrs[mod] === undefined) return;
  var old = v.attrs;
  var na: any = {};
  for (var k in old) {
    if (k !== mod && Object.prototype.hasOwnProperty.call(old, k)) na[k] = old[k];
  }
  v.attrs = na;
  w.undo.push({
    unbind: function () {
      v.attrs = old;
    },
  });
}

// -- backtracking and the driver -------------------------------------------

// Restore the newest choicepoint and run its next alternative.  Returns
// the alternative's result, or null when no choicepoint remains.
function $backtrack(w: any) {
  var ch = w.choice;
  if (ch === null) return null;
  $untrail(w, ch.undo);
  $time = ch.time;
  w.frame = ch.frame;
  w.cont = ch.cont;
  w.goal = ch.goal;
  var alt = ch.alts[ch.i++];
  var prev = ch.prev;
  if (ch.i >= ch.alts.length) w.choice = prev;
  return alt(w, ch.goal, prev);
}

// Drive until the YES sentinel or until backtracking would pass below
// barrier.  Bindings of a successful run are kept; on failure the caller
// relies on the enclosing failure (or untrails itself).
function $drive(w: any, t: any, barrier: any) {
  for (;;) {
    if (t === $FAIL) {
      if (w.choice === barrier) return false;
      t = $backtrack(w);
      if (t === null) return false;
      continue;
    }
    if (t === $YES) return true;
    if (t === $HALT) {
      w.halted = true;
      return true;
    }
    t = typeof t === "function" ? t() : t.execute(w);
  }
}

// Solve goal for one solution on the same worker (attribute hooks,
// foreign callbacks).  Choicepoints the goal left behind are discarded
// (committed-choice), registers are restored either way.
function $callNested(w: any, goal: any) {
  var sFrame = w.frame;
  var sCont = w.cont;
  var sGoal = w.goal;
  var barrier = w.choice;
  w.cont = function () {
    return $YES;
  };
  var ok = $drive(w, goal, barrier);
  w.choice = barrier;
  w.frame = sFrame;
  w.cont = sCont;
  w.goal = sGoal;
  return ok;
}

// -- metacall --------------------------------------------------------------

var $predCache: any = {};

// Find a predicate's constructor by "name/arity" over the root's nested
// modules (first match, cached).
function $lookupPred(key: string) {
  var hit = $predCache[key];
  if (hit !== undefined) return hit;
  for (var mod in $r.nested) {
    if (!Object.prototype.hasOwnProperty.call($r.nested, mod)) continue;
    var msym = $r.nested[mod];
    if (msym.nested === undefined) continue;
    var ps = msym.nested[key];
    if (ps !== undefined && ps.ctor !== undefined) {
      msym.prepare();
      $predCache[key] = ps.ctor;
      return ps.ctor;
    }
  }
  $predCache[key] = null;
  return null;
}

function $metacall(w: any, t: any): any {
  t = t.deref();
  if (t.is_var) throw new Error("call/1: unbound goal");
  var name = t.name;
  var arity = t.arity;
  if (name === undefined || arity === undefined) {
    throw new Error("call/1: goal is not callable");
  }
  if (arity === 2 && name === ",") {
    var rest = t.a1;
    var saved = w.cont;
    w.cont = function () {
      w.cont = saved;
      return $metacall(w, rest);
    };
    return $metacall(w, t.a0);
  }
  if (arity === 2 && name === ";") {
    w.pushChoice($OR_ALTS, t);
    return $OR_ALTS[0](w, t);
  }
  if (arity === 0) {
    if (name === "true" || name === "!") return w.cont;
    if (name === "fail" || name === "false") return w.fail();
    if (name === "halt") return $HALT;
  }
  var ctor = $lookupPred(name + "/" + arity);
  if (ctor === null) return w.fail();
  if (t instanceof ctor) return t;
  var g = Object.create(ctor.prototype);
  for (var i = 0; i < arity; i++) g["a" + i] = t["a" + i];
  return g;
}

var $OR_ALTS = [
  function (w: any, g: any) {
    return $metacall(w, g.a0);
  },
  function (w: any, g: any) {
    return $metacall(w, g.a1);
  },
];

// -- arithmetic ------------------------------------------------------------

function $arith(t: any): number {
  t = t.deref();
  if (t.is_num === true) return t.a0;
  if (t.is_var) throw new Error("arithmetic: unbound variable");
  var name = t.name;
  var n = t.arity;
  if (name === undefined) throw new Error("arithmetic: bad expression");
  if (n === 0) throw new Error("arithmetic: unknown constant " + name);
  var a = $arith(t.a0);
  if (n === 1) {
    switch (name) {
      case "-": return -a;
      case "+": return a;
      case "abs": return Math.abs(a);
      case "sign": return a > 0 ? 1 : a < 0 ? -1 : 0;
      case "sqrt": return Math.sqrt(a);
      case "sin": return Math.sin(a);
      case "cos": return Math.cos(a);
      case "truncate": return $trunc(a);
      case "float": return a;
    }
    throw new Error("arithmetic: unknown operator " + name);
  }
  if (n === 2) {
    var b = $arith(t.a1);
    switch (name) {
      case "+": return a + b;
      case "-": return a - b;
      case "*": return a * b;
      case "/":
        if (b === 0) throw new Error("arithmetic: division by zero");
        return a / b;
      case "//": return $intdiv(a, b);
      case "mod":
        if (b === 0) throw new Error("arithmetic: division by zero");
        return a - b * Math.floor(a / b);
      case "rem": return a - b * $intdiv(a, b);
      case "min": return Math.min(a, b);
      case "max": return Math.max(a, b);
      case "**": return Math.pow(a, b);
      case "^": return Math.pow(a, b);
      case ">>": return Math.floor(a / Math.pow(2, b));
      case "<<": return a * Math.pow(2, b);
    }
    throw new Error("arithmetic: unknown operator " + name);
  }
  throw new Error("arithmetic: bad expression " + name + "/" + n);
}

function $trunc(a: number) {
  return a < 0 ? Math.ceil(a) : Math.floor(a);
}

function $intdiv(a: number, b: number) {
  if (b === 0) throw new Error("arithmetic: division by zero");
  return $trunc(a / b);
}

// -- standard order --------------------------------------------------------

// Var < Num < String < Atom < Compound; variables by timestamp.
function $orderClass(t: any) {
  if (t.is_var) return 0;
  if (t.is_num === true) return 1;
  if (t.is_str === true) return 2;
  if (t.is_foreign === true) return 4;
  return t.arity === 0 ? 3 : 4;
}

function $compare(a: any, b: any): number {
  a = a.deref();
  b = b.deref();
  if (a === b) return 0;
  var ca = $orderClass(a);
  var cb = $orderClass(b);
  if (ca !== cb) return ca < cb ? -1 : 1;
  if (ca === 0) return a.time < b.time ? -1 : a.time > b.time ? 1 : 0;
  if (ca === 1) return a.a0 < b.a0 ? -1 : a.a0 > b.a0 ? 1 : 0;
  if (ca === 2 || ca === 3) {
    var x = ca === 2 ? a.a0 : a.name;
    var y = ca === 2 ? b.a0 : b.name;
    return x < y ? -1 : x > y ? 1 : 0;
  }
  if (a.is_foreign === true || b.is_foreign === true) {
    if (a.is_foreign !== b.is_foreign) return a.is_foreign ? -1 : 1;
    return a.a0 === b.a0 ? 0 : -1;
  }
  if (a.arity !== b.arity) return a.arity < b.arity ? -1 : 1;
  if (a.name !== b.name) return a.name < b.name ? -1 : 1;
  for (var i = 0; i < a.arity; i++) {
    var c = $compare(a["a" + i], b["a" + i]);
    if (c !== 0) return c;
  }
  return 0;
}
