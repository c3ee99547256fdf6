var $load_order = [
  "runtime.js",
  "lists.js",
  "odd.js",
  "even.js",
  "ui.js",
  "main.js",
];
