$r.def("odd", function (m) {
  var $tv;
  var odd_1_0, s_1_1, even_1_2;
  m.def("s/1", function ($m) {
    function f(a0) { this.a0 = a0; }
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) {
      $c.prototype.name = "s";
      $c.prototype.arity = 1;
    };
  });
  m.def("odd/1", function ($m) {
    function f(a0) { this.a0 = a0; }
    $m.ctor = f;
    $m.base = $r.query("t_struct");
    $m.mlink = function ($c) {
      $c.prototype.name = "odd";
      $c.prototype.arity = 1;
      function c0(w, g, ch0) {
        var t0;
        if (!w.unify(g.a0, new s_1_1((t0 = new $tv())))) return w.fail();
        return new even_1_2(t0);
      }
      $c.prototype.execute = function (w) {
        return c0(w, this, w.choice);
      };
    };
  });
  m.exports["odd/1"] = m.query("odd/1");
  m.link = function () {
    $tv = $r.query("t_var").prepare().ctor;
    odd_1_0 = m.query("odd/1").ctor;
    s_1_1 = m.query("s/1").ctor;
    var p;
    p = $r.query("even").prepare();
    even_1_2 = p.exports["even/1"].ctor;
  };
});
