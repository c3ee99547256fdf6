// Symbol table and linker.  Modules, predicates and term kinds are all
// symbol records hanging off the root symbol $r.  A record is defined
// eagerly (def runs the definition closure at load time) and linked
// lazily (prepare resolves bases, runs mlink over the constructor, runs
// the link thunk, then prepares nested records).  The PREPARING state
// makes preparation of cyclic imports terminate.

var $S_UNDEFINED = 0;
var $S_NOT_READY = 1;
var $S_PREPARING = 2;
var $S_READY = 3;

function $s(this: any, name: string) {
  this.name = name;
  this.status = $S_UNDEFINED;
  this.exports = {};
  this.nested = {};
  this.ctor = undefined;
  this.base = null;
  this.link = null;
  this.mlink = null;
}

($s as any).prototype.query = function (name: string) {
  var sym = this.nested[name];
  if (sym === undefined) {
    sym = new ($s as any)(name);
    this.nested[name] = sym;
  }
  return sym;
};

($s as any).prototype.def = function (name: string, definition: (m: any) => void) {
  var sym = this.query(name);
  sym.status = $S_NOT_READY;
  definition(sym);
  return sym;
};

($s as any).prototype.prepare = function () {
  if (this.status !== $S_NOT_READY) return this;
  this.status = $S_PREPARING;
  if (this.ctor !== undefined) {
    if (this.base !== null) {
      this.base.prepare();
      $extends(this.ctor, this.base.ctor);
    }
    if (this.mlink !== null) this.mlink(this.ctor);
  }
  if (this.link !== null) this.link();
  this.status = $S_READY;
  for (var k in this.nested) {
    if (Object.prototype.hasOwnProperty.call(this.nested, k)) {
      this.nested[k].prepare();
    }
  }
  return this;
};

// Splice the delegation chain: instances of ctor delegate to an instance
// of base, so mlink additions on base.prototype are inherited.  mlink of
// the derived record runs after this and installs onto the fresh
// prototype object.
function $extends(ctor: any, base: any) {
  ctor.prototype = new base();
  ctor.prototype.constructor = ctor;
}

var $r = new ($s as any)("$root");
