// Built-in predicate modules: term_basic, arithmetic, io, attr, freeze.
// Each predicate is a symbol record shaped exactly like a compiled one
// (ctor with a0..aN fields, base t_struct, execute installed in mlink),
// so emitted modules import them through the ordinary link path.

function $defpred(m: any, name: string, arity: number, exec: (this: any, w: any) => any) {
  var key = name + "/" + arity;
  m.def(key, function (pm: any) {
    var f: any = function (this: any) {
      for (var i = 0; i < arguments.length; i++) this["a" + i] = arguments[i];
    };
    pm.ctor = f;
    pm.base = $r.query("t_struct");
    pm.mlink = function (c: any) {
      c.prototype.name = name;
      c.prototype.arity = arity;
      c.prototype.execute = exec;
    };
  });
  m.exports[key] = m.query(key);
}

// Primitive constructors, captured once the term symbols are prepared
// (see the runtime bootstrap at the end of the script).
var $TV: any, $TN: any, $TS: any, $TATOM: any, $TG: any;

function $mkAtom(name: string) {
  return new $TATOM(name);
}

function $mkList(items: any[]) {
  var out: any = $mkAtom("[]");
  for (var i = items.length - 1; i >= 0; i--) {
    out = new $TG(".", [items[i], out]);
  }
  return out;
}

// Proper list -> array of element terms, or null.
function $listItems(t: any) {
  var items = [];
  t = t.deref();
  while (t.name === "." && t.arity === 2) {
    items.push(t.a0);
    t = t.a1.deref();
  }
  if (t.name === "[]" && t.arity === 0) return items;
  return null;
}

function $isAtomTerm(t: any) {
  return (
    !t.is_var &&
    t.is_num !== true &&
    t.is_str !== true &&
    t.is_foreign !== true &&
    t.arity === 0
  );
}

// -- term_basic ------------------------------------------------------------

$r.def("term_basic", function (m: any) {
  $defpred(m, "=", 2, function (w: any) {
    // Failed unification is side-effect-free: snapshot and untrail.
    var mark = w.undo.length;
    if (w.unify(this.a0, this.a1)) return w.cont;
    $untrail(w, mark);
    return w.fail();
  });
  $defpred(m, "\\=", 2, function (w: any) {
    var mark = w.undo.length;
    var ok = w.unify(this.a0, this.a1);
    $untrail(w, mark);
    return ok ? w.fail() : w.cont;
  });
  $defpred(m, "==", 2, function (w: any) {
    return $compare(this.a0, this.a1) === 0 ? w.cont : w.fail();
  });
  $defpred(m, "\\==", 2, function (w: any) {
    return $compare(this.a0, this.a1) !== 0 ? w.cont : w.fail();
  });
  $defpred(m, "@<", 2, function (w: any) {
    return $compare(this.a0, this.a1) < 0 ? w.cont : w.fail();
  });
  $defpred(m, "@>", 2, function (w: any) {
    return $compare(this.a0, this.a1) > 0 ? w.cont : w.fail();
  });
  $defpred(m, "@=<", 2, function (w: any) {
    return $compare(this.a0, this.a1) <= 0 ? w.cont : w.fail();
  });
  $defpred(m, "@>=", 2, function (w: any) {
    return $compare(this.a0, this.a1) >= 0 ? w.cont : w.fail();
  });
  $defpred(m, "compare", 3, function (w: any) {
    var c = $compare(this.a1, this.a2);
    var sym = $mkAtom(c < 0 ? "<" : c > 0 ? ">" : "=");
    return w.unify(this.a0, sym) ? w.cont : w.fail();
  });
  $defpred(m, "var", 1, function (w: any) {
    return this.a0.deref().is_var ? w.cont : w.fail();
  });
  $defpred(m, "nonvar", 1, function (w: any) {
    return this.a0.deref().is_var ? w.fail() : w.cont;
  });
  $defpred(m, "atom", 1, function (w: any) {
    return $isAtomTerm(this.a0.deref()) ? w.cont : w.fail();
  });
  $defpred(m, "number", 1, function (w: any) {
    return this.a0.deref().is_num === true ? w.cont : w.fail();
  });
  $defpred(m, "functor", 3, function (w: any) {
    var t = this.a0.deref();
    if (t.is_var) {
      var name = this.a1.deref();
      var ar = this.a2.deref();
      if (ar.is_num !== true || ar.a0 !== Math.floor(ar.a0)) {
        throw new Error("functor/3: arity must be an integer");
      }
      if (ar.a0 === 0) {
        return w.unify(t, name) ? w.cont : w.fail();
      }
      if (!$isAtomTerm(name)) {
        throw new Error("functor/3: name must be an atom");
      }
      var args = [];
      for (var i = 0; i < ar.a0; i++) args.push(new $TV());
      return w.unify(t, new $TG(name.name, args)) ? w.cont : w.fail();
    }
    var fname;
    var farity;
    if (t.arity !== undefined && t.arity > 0) {
      fname = $mkAtom(t.name);
      farity = new $TN(t.arity);
    } else {
      fname = t;
      farity = new $TN(0);
    }
    var mark = w.undo.length;
    if (w.unify(this.a1, fname) && w.unify(this.a2, farity)) return w.cont;
    $untrail(w, mark);
    return w.fail();
  });
  $defpred(m, "arg", 3, function (w: any) {
    var n = this.a0.deref();
    var t = this.a1.deref();
    if (t.is_var || t.arity === undefined || t.arity === 0) {
      throw new Error("arg/3: second argument must be compound");
    }
    if (n.is_num === true) {
      if (n.a0 >= 1 && n.a0 <= t.arity) {
        return w.unify(this.a2, t["a" + (n.a0 - 1)]) ? w.cont : w.fail();
      }
      return w.fail();
    }
    var alts = [];
    for (var i = 0; i < t.arity; i++) {
      alts.push(
        (function (idx: number) {
          return function (w2: any, g: any) {
            var tt = g.a1.deref();
            var mark = w2.undo.length;
            if (w2.unify(g.a0, new $TN(idx + 1)) && w2.unify(g.a2, tt["a" + idx])) {
              return w2.cont;
            }
            $untrail(w2, mark);
            return w2.fail();
          };
        })(i)
      );
    }
    if (alts.length > 1) w.pushChoice(alts, this);
    return alts[0](w, this);
  });
  $defpred(m, "=..", 2, function (w: any) {
    var t = this.a0.deref();
    if (!t.is_var) {
      var parts;
      if (t.arity !== undefined && t.arity > 0) {
        parts = [$mkAtom(t.name)];
        for (var i = 0; i < t.arity; i++) parts.push(t["a" + i]);
      } else {
        parts = [t];
      }
      return w.unify(this.a1, $mkList(parts)) ? w.cont : w.fail();
    }
    var items = $listItems(this.a1);
    if (items === null || items.length === 0) {
      throw new Error("=../2: bad list");
    }
    var head = items[0].deref();
    if (items.length === 1) {
      return w.unify(t, head) ? w.cont : w.fail();
    }
    if (!$isAtomTerm(head)) {
      throw new Error("=../2: functor must be an atom");
    }
    return w.unify(t, new $TG(head.name, items.slice(1))) ? w.cont : w.fail();
  });
  $defpred(m, "copy_term", 2, function (w: any) {
    var map: any[] = [];
    function cp(t: any): any {
      t = t.deref();
      if (t.is_var) {
        for (var i = 0; i < map.length; i++) {
          if (map[i][0] === t) return map[i][1];
        }
        var v = new $TV();
        map.push([t, v]);
        return v;
      }
      if (t.arity !== undefined && t.arity > 0) {
        var args = [];
        for (var j = 0; j < t.arity; j++) args.push(cp(t["a" + j]));
        return new $TG(t.name, args);
      }
      return t;
    }
    return w.unify(this.a1, cp(this.a0)) ? w.cont : w.fail();
  });
  $defpred(m, "true", 0, function (w: any) {
    return w.cont;
  });
  $defpred(m, "fail", 0, function (w: any) {
    return w.fail();
  });
  $defpred(m, "false", 0, function (w: any) {
    return w.fail();
  });
  $defpred(m, "halt", 0, function () {
    return $HALT;
  });
  for (var n = 1; n <= 8; n++) {
    (function (extra: number) {
      $defpred(m, "call", extra + 1, function (w: any) {
        var g = this.a0.deref();
        if (extra === 0) return $metacall(w, g);
        if (g.is_var) throw new Error("call/" + (extra + 1) + ": unbound goal");
        var name = g.name;
        var base = g.arity;
        if (name === undefined) {
          throw new Error("call/" + (extra + 1) + ": goal is not callable");
        }
        var args = [];
        for (var i = 0; i < base; i++) args.push(g["a" + i]);
        for (var j = 0; j < extra; j++) args.push(this["a" + (j + 1)]);
        return $metacall(w, new $TG(name, args));
      });
    })(n - 1);
  }
});

// -- arithmetic ------------------------------------------------------------

$r.def("arithmetic", function (m: any) {
  $defpred(m, "is", 2, function (w: any) {
    return w.unify(this.a0, new $TN($arith(this.a1))) ? w.cont : w.fail();
  });
  var cmps: any = {
    "<": function (a: number, b: number) { return a < b; },
    ">": function (a: number, b: number) { return a > b; },
    "=<": function (a: number, b: number) { return a <= b; },
    ">=": function (a: number, b: number) { return a >= b; },
    "=:=": function (a: number, b: number) { return a === b; },
    "=\\=": function (a: number, b: number) { return a !== b; },
  };
  for (var op in cmps) {
    if (!Object.prototype.hasOwnProperty.call(cmps, op)) continue;
    (function (test: any, name: string) {
      $defpred(m, name, 2, function (w: any) {
        return test($arith(this.a0), $arith(this.a1)) ? w.cont : w.fail();
      });
    })(cmps[op], op);
  }
  $defpred(m, "between", 3, function (w: any) {
    var lo = $arith(this.a0);
    var hi = $arith(this.a1);
    var x = this.a2.deref();
    if (x.is_num === true) {
      return lo <= x.a0 && x.a0 <= hi ? w.cont : w.fail();
    }
    if (lo > hi) return w.fail();
    var alts = [];
    for (var i = lo; i <= hi; i++) {
      alts.push(
        (function (v: number) {
          return function (w2: any, g: any) {
            return w2.unify(g.a2, new $TN(v)) ? w2.cont : w2.fail();
          };
        })(i)
      );
    }
    if (alts.length > 1) w.pushChoice(alts, this);
    return alts[0](w, this);
  });
});

// -- io --------------------------------------------------------------------

// Output goes through a replaceable sink; the default buffers so the
// embedder can collect it deterministically ($rt.takeOutput).
var $OUTBUF: string[] = [];

var $sink = function (s: string) {
  $OUTBUF.push(s);
};

$r.def("io", function (m: any) {
  $defpred(m, "write", 1, function (w: any) {
    $sink($format(this.a0, null));
    return w.cont;
  });
  $defpred(m, "nl", 0, function (w: any) {
    $sink("\n");
    return w.cont;
  });
});

// -- attr ------------------------------------------------------------------

function $attrModName(t: any) {
  var d = t.deref();
  if (!$isAtomTerm(d)) throw new Error("attribute module must be an atom");
  return d.name;
}

$r.def("attr", function (m: any) {
  $defpred(m, "put_attr", 3, function (w: any) {
    var v = this.a0.deref();
    if (!v.is_var) throw new Error("put_attr/3: not a variable");
    $setAttr(w, v, $attrModName(this.a1), this.a2.deref());
    return w.cont;
  });
  $defpred(m, "get_attr", 3, function (w: any) {
    var v = this.a0.deref();
    if (!v.is_var) throw new Error("get_attr/3: not a variable");
    var mod = $attrModName(this.a1);
    if (v.attrs === undefined || v.attrs[mod] === undefined) return w.fail();
    return w.unify(this.a2, v.attrs[mod]) ? w.cont : w.fail();
  });
  $defpred(m, "del_attr", 2, function (w: any) {
    var v = this.a0.deref();
    if (!v.is_var) throw new Error("del_attr/2: not a variable");
    $delAttr(w, v, $attrModName(this.a1));
    return w.cont;
  });
});

// -- freeze ----------------------------------------------------------------

function $freezeGoalOf(v: any) {
  return v.attrs !== undefined ? v.attrs["freeze"] : undefined;
}

function $addFrozen(w: any, v: any, goal: any) {
  var existing = $freezeGoalOf(v);
  var combined = existing === undefined ? goal : new $TG(",", [existing, goal]);
  $setAttr(w, v, "freeze", combined);
}

$r.def("freeze", function (m: any) {
  $defpred(m, "freeze", 2, function (w: any) {
    var v = this.a0.deref();
    if (!v.is_var) return $metacall(w, this.a1);
    $addFrozen(w, v, this.a1.deref());
    return w.cont;
  });
  // Binding to a nonvar wakes the delayed goals; binding to another
  // variable transfers them so they wake when that one is bound.
  $defpred(m, "attr_unify_hook", 2, function (w: any) {
    var value = this.a1.deref();
    if (value.is_var) {
      $addFrozen(w, value, this.a0.deref());
      return w.cont;
    }
    return $metacall(w, this.a0);
  });
});
