// Term hierarchy.  Every term kind is a symbol record on the root with a
// constructor whose prototype chain is spliced by prepare ($extends), so
// all methods are installed in mlink (the chain replacement would discard
// anything set earlier).  Structures and atoms compiled from source get
// one kind per functor with base t_struct; the generic methods here work
// across modules because they only look at name/arity and the a0..aN
// fields.

var $time = 0;

$r.def("term_base", function (m: any) {
  function TermBase() {}
  m.ctor = TermBase;
});

$r.def("var_base", function (m: any) {
  function VarBase() {}
  m.ctor = VarBase;
  m.base = $r.query("term_base");
  m.mlink = function (c: any) {
    c.prototype.is_var = true;
  };
});

$r.def("nonvar_base", function (m: any) {
  function NonvarBase() {}
  m.ctor = NonvarBase;
  m.base = $r.query("term_base");
  m.mlink = function (c: any) {
    c.prototype.is_var = false;
    c.prototype.deref = function () {
      return this;
    };
    c.prototype.unify = function (w: any, other: any) {
      return other.unify_nonvar(w, this);
    };
  };
});

$r.def("t_var", function (m: any) {
  function TVar(this: any) {
    this.ref = this;
    this.time = $time++;
  }
  m.ctor = TVar;
  m.base = $r.query("var_base");
  m.mlink = function (c: any) {
    c.prototype.deref = function () {
      var t = this;
      while (t.is_var && t.ref !== t) t = t.ref;
      return t;
    };
    // Both sides are dereferenced.  Var-var binding points the younger
    // variable at the older one; a variable carrying attributes survives
    // unification with a plain variable regardless of age.
    c.prototype.unify = function (w: any, other: any) {
      if (this === other) return true;
      if (!other.is_var) return $bindVar(w, this, other);
      if (this.attrs !== undefined && other.attrs === undefined) {
        return $bindVar(w, other, this);
      }
      if (other.attrs !== undefined && this.attrs === undefined) {
        return $bindVar(w, this, other);
      }
      if (this.time > other.time) return $bindVar(w, this, other);
      return $bindVar(w, other, this);
    };
    c.prototype.unify_nonvar = function (w: any, t: any) {
      return $bindVar(w, this, t);
    };
    c.prototype.unbind = function () {
      this.ref = this;
    };
    c.prototype.unbox = function () {
      return this;
    };
  };
});

// Attributed variable: a t_var carrying a module-name -> term map.  A
// plain variable is upgraded by binding it (trailed) to a fresh attrvar.
$r.def("t_attrvar", function (m: any) {
  function TAttrVar(this: any) {
    this.ref = this;
    this.time = $time++;
    this.attrs = {};
  }
  m.ctor = TAttrVar;
  m.base = $r.query("t_var");
});

$r.def("t_num", function (m: any) {
  function TNum(this: any, a0: number) {
    this.a0 = a0;
  }
  m.ctor = TNum;
  m.base = $r.query("nonvar_base");
  m.mlink = function (c: any) {
    c.prototype.is_num = true;
    c.prototype.unify_nonvar = function (w: any, x: any) {
      if (x.is_var) return x.unify_nonvar(w, this);
      return x.is_num === true && x.a0 === this.a0;
    };
    c.prototype.unbox = function () {
      return this.a0;
    };
  };
});

$r.def("t_string", function (m: any) {
  function TString(this: any, a0: string) {
    this.a0 = a0;
  }
  m.ctor = TString;
  m.base = $r.query("nonvar_base");
  m.mlink = function (c: any) {
    c.prototype.is_str = true;
    c.prototype.unify_nonvar = function (w: any, x: any) {
      if (x.is_var) return x.unify_nonvar(w, this);
      return x.is_str === true && x.a0 === this.a0;
    };
    c.prototype.unbox = function () {
      return this.a0;
    };
  };
});

$r.def("t_struct", function (m: any) {
  function TStruct() {}
  m.ctor = TStruct;
  m.base = $r.query("nonvar_base");
  m.mlink = function (c: any) {
    c.prototype.unify_nonvar = function (w: any, x: any) {
      if (x.is_var) return x.unify_nonvar(w, this);
      if (x.name !== this.name || x.arity !== this.arity) return false;
      for (var i = 0; i < this.arity; i++) {
        if (!w.unify(this["a" + i], x["a" + i])) return false;
      }
      return true;
    };
    c.prototype.unbox = function () {
      return this.arity === 0 ? this.name : this;
    };
  };
});

// Runtime-made atom (w.atom / foreign stubs): name is per instance.
$r.def("t_atom", function (m: any) {
  function TAtom(this: any, name: string) {
    this.name = name;
  }
  m.ctor = TAtom;
  m.base = $r.query("t_struct");
  m.mlink = function (c: any) {
    c.prototype.arity = 0;
  };
});

// Runtime-made structure (embedder term building, metacall plumbing):
// functor and args are per instance.
$r.def("t_gstruct", function (m: any) {
  function TGStruct(this: any, name: string, args: any[]) {
    this.name = name;
    this.arity = args.length;
    for (var i = 0; i < args.length; i++) this["a" + i] = args[i];
  }
  m.ctor = TGStruct;
  m.base = $r.query("t_struct");
});

// Wrapper for foreign (host) data; unifies by payload identity only.
$r.def("t_foreign", function (m: any) {
  function TForeign(this: any, a0: any) {
    this.a0 = a0;
  }
  m.ctor = TForeign;
  m.base = $r.query("nonvar_base");
  m.mlink = function (c: any) {
    c.prototype.is_foreign = true;
    c.prototype.unify_nonvar = function (w: any, x: any) {
      if (x.is_var) return x.unify_nonvar(w, this);
      return x.is_foreign === true && x.a0 === this.a0;
    };
    c.prototype.unbox = function () {
      return this.a0;
    };
  };
});
