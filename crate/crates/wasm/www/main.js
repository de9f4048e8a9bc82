import init, { Demo } from "./pkg/drift_wasm.js";

const $ = (id) => document.getElementById(id);
let demo;

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function visible(ch) {
  if (ch === " ") return ["·", true];
  if (ch === "\t") return ["→", true];
  if (ch === "\n") return ["↵\n", true];
  return [ch, false];
}

// Render an encoding as chips. `marks` may carry sets of character
// positions: gained (token starts), lost (boundaries inside tokens) and
// edits (characters touched by the rewrite).
function renderStrip(el, encoding, marks = {}) {
  const { gained = new Set(), lost = new Set(), edits = new Set() } = marks;
  el.replaceChildren();
  for (const tok of encoding.tokens) {
    const chip = document.createElement("span");
    chip.className = "tok";
    chip.title = `${JSON.stringify(tok.token)} id ${tok.id} [${tok.start}, ${tok.end})`;
    if (tok.start === tok.end) chip.classList.add("partial");
    if (gained.has(tok.start)) chip.classList.add("gained");
    const chars = [...tok.text];
    chars.forEach((ch, i) => {
      const pos = tok.start + i;
      if (i > 0 && lost.has(pos)) {
        const m = document.createElement("span");
        m.className = "lost-mark";
        chip.append(m);
      }
      const [shown, ws] = visible(ch);
      const span = document.createElement("span");
      span.textContent = shown;
      if (ws) span.classList.add("ws");
      if (edits.has(pos)) span.classList.add("edit");
      chip.append(span);
    });
    if (tok.start === tok.end) chip.append("​");
    el.append(chip);
  }
}

function renderGrammar(tokens) {
  const el = $("grammar");
  el.replaceChildren();
  for (const t of tokens) {
    const span = document.createElement("span");
    span.className = String(t.kind).toLowerCase();
    span.textContent = t.lexeme;
    span.title = `${t.kind} [${t.start}, ${t.end})`;
    el.append(span);
  }
}

const source = () => $("source").value;
const language = () => $("language").value;

function tokenize() {
  showError();
  try {
    renderStrip($("bpe"), JSON.parse(demo.encode(source())));
    renderGrammar(JSON.parse(demo.lex(source(), language())));
  } catch (e) {
    showError(e);
  }
}

// Positions touched by each edit: inserted characters in the new text,
// deleted characters in the old one.
function editSites(events) {
  const inserted = new Set();
  const deleted = new Set();
  let offset = 0;
  for (const ev of events) {
    if (ev.delta > 0) inserted.add(ev.pos + offset);
    else deleted.add(ev.pos);
    offset += ev.delta;
  }
  return { inserted, deleted };
}

function analyze(rule = $("rule").value) {
  showError();
  try {
    const a = JSON.parse(demo.analyze(source(), language(), rule));
    const { inserted, deleted } = editSites(a.events);
    renderStrip($("before"), a.old, { edits: deleted });
    renderStrip($("after"), a.new, {
      gained: new Set(a.gained),
      lost: new Set(a.lost),
      edits: inserted,
    });
    const badge = $("label");
    badge.className = `badge ${a.label}`;
    badge.textContent = a.affected ? a.label : "not affected";
    $("details").textContent = JSON.stringify(
      { rule: a.rule, events: a.events, renames: a.renames, lost: a.lost, gained: a.gained },
      null,
      1,
    );
  } catch (e) {
    showError(e);
  }
}

function sweep() {
  showError();
  const body = $("sweep-table").querySelector("tbody");
  body.replaceChildren();
  try {
    for (const row of JSON.parse(demo.sweep(source(), language()))) {
      const tr = document.createElement("tr");
      for (const v of [row.rule, row.name, row.affected ? "yes" : "no", row.label, row.lost, row.gained]) {
        const td = document.createElement("td");
        td.textContent = v;
        tr.append(td);
      }
      tr.addEventListener("click", () => {
        $("rule").value = row.rule;
        analyze(row.rule);
        $("analyze").scrollIntoView({ behavior: "smooth", block: "center" });
      });
      body.append(tr);
    }
  } catch (e) {
    showError(e);
  }
}

function fillRules() {
  const select = $("rule");
  const current = select.value;
  select.replaceChildren();
  for (const r of JSON.parse(demo.rules())) {
    if (!r.languages.includes(language())) continue;
    const opt = document.createElement("option");
    opt.value = r.id;
    opt.textContent = `${r.id} ${r.name} (${r.pattern})`;
    select.append(opt);
  }
  if ([...select.options].some((o) => o.value === current)) select.value = current;
  else if ([...select.options].some((o) => o.value === "N1")) select.value = "N1";
}

async function loadTokenizer(event) {
  const file = event.target.files[0];
  if (!file) return;
  showError();
  try {
    const size = demo.loadTokenizer(await file.text());
    $("tokenizer-info").textContent = `${file.name}: ${size} tokens`;
    tokenize();
  } catch (e) {
    showError(e);
  }
}

async function main() {
  await init();
  demo = new Demo();
  $("tokenizer-info").textContent = `bundled desk tokenizer: ${demo.vocabSize()} tokens`;
  fillRules();
  $("language").addEventListener("change", () => {
    fillRules();
    tokenize();
  });
  $("tokenize").addEventListener("click", tokenize);
  $("analyze").addEventListener("click", () => analyze());
  $("sweep").addEventListener("click", sweep);
  $("tokenizer-file").addEventListener("change", loadTokenizer);
  tokenize();
  analyze();
}

main().catch(showError);
