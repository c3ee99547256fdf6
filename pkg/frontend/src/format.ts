// Canonical term writer.  Output must re-parse to a structurally
// identical tree: operator notation for the default table, [..|..] for
// lists, braces for {}/1, name(args) otherwise.  The compiler-side
// writer uses the same rules, so stored outputs compare byte-for-byte.

var $INFIX: any = {
  ":-": [1200, "xfx"], "-->": [1200, "xfx"],
  ";": [1100, "xfy"], "->": [1050, "xfy"], ",": [1000, "xfy"],
  "::": [978, "xfx"],
  "=": [700, "xfx"], "\\=": [700, "xfx"], "==": [700, "xfx"], "\\==": [700, "xfx"],
  "@<": [700, "xfx"], "@>": [700, "xfx"], "@=<": [700, "xfx"], "@>=": [700, "xfx"],
  "is": [700, "xfx"], "=:=": [700, "xfx"], "=\\=": [700, "xfx"],
  "<": [700, "xfx"], ">": [700, "xfx"], "=<": [700, "xfx"], ">=": [700, "xfx"],
  "=..": [700, "xfx"],
  "+": [500, "yfx"], "-": [500, "yfx"], "/\\": [500, "yfx"], "\\/": [500, "yfx"],
  "*": [400, "yfx"], "/": [400, "yfx"], "//": [400, "yfx"],
  "mod": [400, "yfx"], "rem": [400, "yfx"], "<<": [400, "yfx"], ">>": [400, "yfx"],
  "**": [200, "xfx"], "^": [200, "xfy"], ":": [200, "xfy"],
};

var $PREFIX: any = {
  ":-": [1200, "fx"], "?-": [1200, "fx"], "pred": [1150, "fx"],
  "\\+": [900, "fy"], "-": [200, "fy"], "+": [200, "fy"], "\\": [200, "fy"],
};

// Integral values print without a fractional part so host doubles and
// exact integers agree.
function $fmtNum(v: number): string {
  if (v !== v) return "nan";
  if (v === Infinity) return "inf";
  if (v === -Infinity) return "-inf";
  if (v === Math.floor(v) && Math.abs(v) < 9007199254740992) {
    return String(Math.floor(v));
  }
  return String(v);
}

function $isAlpha(ch: string) {
  return (ch >= "a" && ch <= "z") || (ch >= "A" && ch <= "Z");
}

function $escapeStr(s: string) {
  return s.replace(/\\/g, "\\\\").replace(/"/g, '\\"').replace(/\n/g, "\\n");
}

// names: {list: [[var, name], ...]} assigning _A, _B, ... per first
// occurrence, or null to print unbound variables as _G<timestamp>.
function $format(t: any, names: any): string {
  function varName(v: any): string {
    if (names === null) return "_G" + v.time;
    var lst = names.list;
    for (var i = 0; i < lst.length; i++) {
      if (lst[i][0] === v) return lst[i][1];
    }
    var k = lst.length;
    var nm = "_" + String.fromCharCode(65 + (k % 26)) + (Math.floor(k / 26) || "");
    lst.push([v, nm]);
    return nm;
  }

  function fmt(t: any, maxp: number): string {
    t = t.deref();
    if (t.is_var) return varName(t);
    if (t.is_num === true) return $fmtNum(t.a0);
    if (t.is_str === true) return '"' + $escapeStr(t.a0) + '"';
    if (t.is_foreign === true) return "<foreign>";
    var name = t.name;
    var arity = t.arity;
    if (name === "." && arity === 2) {
      var items = [];
      var cur = t;
      for (;;) {
        items.push(fmt(cur.a0, 999));
        cur = cur.a1.deref();
        if (!(cur.name === "." && cur.arity === 2)) break;
      }
      if (cur.name === "[]" && cur.arity === 0) {
        return "[" + items.join(",") + "]";
      }
      return "[" + items.join(",") + "|" + fmt(cur, 999) + "]";
    }
    if (arity === 0) return name;
    if (name === "{}" && arity === 1) return "{" + fmt(t.a0, 1200) + "}";
    var op;
    if (arity === 2 && (op = $INFIX[name]) !== undefined) {
      var prio = op[0];
      var typ = op[1];
      var lp = prio - (typ.charAt(0) === "y" ? 0 : 1);
      var rp = prio - (typ.charAt(2) === "y" ? 0 : 1);
      var body;
      if (name === ",") {
        body = fmt(t.a0, lp) + "," + fmt(t.a1, rp);
      } else if (!$isAlpha(name.charAt(0))) {
        body = fmt(t.a0, lp) + name + fmt(t.a1, rp);
      } else {
        body = fmt(t.a0, lp) + " " + name + " " + fmt(t.a1, rp);
      }
      return prio > maxp ? "(" + body + ")" : body;
    }
    if (arity === 1 && (op = $PREFIX[name]) !== undefined) {
      var prio1 = op[0];
      var rp1 = prio1 - (op[1].charAt(1) === "y" ? 0 : 1);
      var arg = fmt(t.a0, rp1);
      var sep;
      if (name === "-" || name === "+") {
        var c0 = arg.charAt(0);
        sep = (c0 >= "0" && c0 <= "9") || c0 === "+" || c0 === "-" ? " " : "";
      } else {
        sep = $isAlpha(name.charAt(0)) || $isAlpha(name.charAt(name.length - 1)) ? " " : "";
      }
      var body1 = name + sep + arg;
      return prio1 > maxp ? "(" + body1 + ")" : body1;
    }
    var parts = [];
    for (var i = 0; i < arity; i++) parts.push(fmt(t["a" + i], 999));
    return name + "(" + parts.join(",") + ")";
  }

  return fmt(t, 1200);
}
