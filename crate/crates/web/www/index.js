import init, { compare_tokenizers, encode_corpus, run_fixture_experiment } from "./pkg/slp_web.js";

const $ = (id) => document.getElementById(id);

function el(tag, attrs = {}, children = []) {
  const node = document.createElement(tag);
  Object.assign(node, attrs);
  for (const child of children) node.append(child);
  return node;
}

function table(head, rows) {
  return el("table", {}, [
    el("tr", {}, head.map((h) => el("th", { textContent: h }))),
    ...rows.map((r) => el("tr", {}, r.map((c) => el("td", { textContent: String(c) })))),
  ]);
}

function show(target, result, render) {
  const body = JSON.parse(result);
  target.replaceChildren(body.error ? el("p", { className: "error", textContent: body.error }) : render(body));
}

function renderTokens(body) {
  const typed = el("p", {}, body.slp.map((t) => el("span", { className: `tok ${t.kind}`, title: t.kind, textContent: t.value })));
  const parts = [el("p", { textContent: `input: ${body.normalized}` }), typed];
  if (body.warnings.length) parts.push(el("p", { className: "error", textContent: body.warnings.join("; ") }));
  parts.push(table(["tokenizer", "tokens"], body.splits.map((s) => [s.tokenizer, JSON.stringify(s.tokens)])));
  return el("div", {}, parts);
}

function renderEncoding(body) {
  const fmt = (v) => (Number.isInteger(v) ? v : v.toFixed(4));
  const head = $("encoding").value === "label" ? body.rows[0]?.map((_, i) => `pos ${i}`) ?? [] : body.vocabulary;
  return el("div", {}, [
    el("p", { textContent: `vocabulary (ids from 2): ${JSON.stringify(body.vocabulary)}` }),
    table(["row", ...head], body.rows.map((r, i) => [i, ...r.map(fmt)])),
  ]);
}

function renderReport(body) {
  const f = (x) => x.toFixed(4);
  const section = (title, pick) => [
    el("h3", { textContent: title }),
    table(
      ["tokenizer", "vocab", "AUC", "F1", "Precision", "Recall"],
      body.rows.map((r) => [r.tokenizer, r.vocabulary_size, f(pick(r).auc), f(pick(r).f1), f(pick(r).precision), f(pick(r).recall)]),
    ),
  ];
  return el("div", {}, [
    el("p", { textContent: `benign ${body.n_benign}, malicious ${body.n_malicious}, ${body.encoding}` }),
    ...section("training set", (r) => r.train),
    ...section(`${body.folds}-fold cross-validation`, (r) => r.cv),
  ]);
}

await init();

const tokenize = () => show($("tok-out"), compare_tokenizers($("cmd").value, $("norm").checked), renderTokens);
$("cmd").addEventListener("input", tokenize);
$("norm").addEventListener("change", tokenize);
tokenize();

$("encode").addEventListener("click", () =>
  show($("enc-out"), encode_corpus($("corpus").value, $("encoding").value, Number($("top").value), Number($("seq").value)), renderEncoding),
);

$("run").addEventListener("click", () => {
  $("exp-out").textContent = "running...";
  setTimeout(() => show($("exp-out"), run_fixture_experiment(Number($("rounds").value), Number($("depth").value), Number($("folds").value)), renderReport));
});
