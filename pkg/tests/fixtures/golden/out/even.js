$r.def("even", function (m) {
  var $tn, $tv;
  var even_1_0, s_1_1, odd_1_2;
  m.def("s/1", function ($m) {
    function f(a0) { this.a0 = a0; }
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) {
      $c.prototype.name = "s";
      $c.prototype.arity = 1;
    };
  });
  m.def("even/1", function ($m) {
    function f(a0) { this.a0 = a0; }
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) {
      $c.prototype.name = "even";
      $c.prototype.arity = 1;
      function c0(w, g, ch0) {
        if (!w.unify(g.a0, new $tn(0))) return w.fail();
        return w.cont;
      }
      function c1(w, g, ch0) {
        var t0;
        if (!w.unify(g.a0, new s_1_1((t0 = new $tv())))) return w.fail();
        return new odd_1_2(t0);
      }
      var all = [c0, c1];
      var sw = {};
      sw["N:0"] = [c0];
      sw["s/1"] = [c1];
      var dflt = [];
      $c.prototype.execute = function (w) {
        var ch0 = w.choice;
        var k = w.key(this.a0.deref());
        var cs = k === null ? all : sw.hasOwnProperty(k) ? sw[k] : dflt;
        if (cs.length === 0) return w.fail();
        if (cs.length > 1) w.pushChoice(cs, this);
        return cs[0](w, this, ch0);
      };
    };
  });
  m.exports["even/1"] = m.query("even/1");
  m.link = function () {
    $tn = $r.query("t_num").prepare().ctor;
    $tv = $r.query("t_var").prepare().ctor;
    even_1_0 = m.query("even/1").ctor;
    s_1_1 = m.query("s/1").ctor;
    var p;
    p = $r.query("odd").prepare();
    odd_1_2 = p.exports["odd/1"].ctor;
  };
});
