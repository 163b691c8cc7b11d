import init, { runExperiment, compareAll, classifyText, markerHint } from "./pkg/detect_wasm.js";

const $ = (id) => document.getElementById(id);
const status = (msg) => { $("status").textContent = msg; };

const PALETTE = {
  "extra-trees": "#4cc38a",
  "random-forest": "#6c9ef8",
  "bagging": "#e5934a",
  "decision-tree": "#d96a6a",
  "logistic-regression": "#b98aec",
  "knn": "#50c6d8",
  "adaboost": "#d8c650",
};

function currentParams() {
  return JSON.stringify({
    model: $("model").value,
    n_per_class: Number($("n").value),
    trees: Number($("trees").value),
    rounds: Number($("trees").value),
    split_ratio: Number($("split").value),
    seed: Number($("seed").value),
  });
}

function drawAxes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#3a4357";
  ctx.lineWidth = 1;
  ctx.strokeRect(30.5, 10.5, w - 41, h - 41);
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(30.5, h - 30.5);
  ctx.lineTo(w - 10.5, 10.5);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#8b93a3";
  ctx.font = "11px sans-serif";
  ctx.fillText("fpr", w / 2 - 8, h - 8);
  ctx.save();
  ctx.translate(12, h / 2 + 8);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText("tpr", 0, 0);
  ctx.restore();
}

function drawCurve(ctx, w, h, roc, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  roc.forEach((p, i) => {
    const x = 30.5 + p.fpr * (w - 41);
    const y = h - 30.5 - p.tpr * (h - 41);
    if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

function renderMetrics(metrics) {
  const fields = [
    ["accuracy", metrics.accuracy],
    ["precision", metrics.precision],
    ["recall", metrics.recall],
    ["f1", metrics.f1],
    ["mcc", metrics.mcc],
    ["auc", metrics.auc],
  ];
  $("metrics").innerHTML = fields
    .map(([name, value]) =>
      `<div class="metric"><div class="name">${name}</div><div class="value">${value.toFixed(3)}</div></div>`)
    .join("") +
    `<div class="metric"><div class="name">confusion</div><div class="value" style="font-size:0.95rem">` +
    `tp ${metrics.confusion.tp} · tn ${metrics.confusion.tn}<br>fp ${metrics.confusion.fp} · fn ${metrics.confusion.fn}</div></div>`;
}

async function onRun() {
  const button = $("run");
  button.disabled = true;
  status("training…");
  await new Promise(requestAnimationFrame);
  try {
    const t0 = performance.now();
    const result = JSON.parse(runExperiment(currentParams()));
    const ms = performance.now() - t0;
    renderMetrics(result.metrics);
    const canvas = $("roc");
    const ctx = canvas.getContext("2d");
    drawAxes(ctx, canvas.width, canvas.height);
    drawCurve(ctx, canvas.width, canvas.height, result.metrics.roc, PALETTE[result.model] ?? "#4cc38a");
    status(`${result.model}: trained on ${result.dataset.train.n_total} docs ` +
      `(${result.dataset.vocabulary_size} terms), evaluated on ${result.dataset.test.n_total} — ${ms.toFixed(0)} ms`);
  } catch (err) {
    status(`error: ${err}`);
  } finally {
    button.disabled = false;
  }
}

async function onCompare() {
  const button = $("compare");
  button.disabled = true;
  status("training all seven models…");
  await new Promise(requestAnimationFrame);
  try {
    const t0 = performance.now();
    const report = JSON.parse(compareAll(currentParams()));
    const ms = performance.now() - t0;
    const tbody = $("compare-table").querySelector("tbody");
    tbody.innerHTML = "";
    const canvas = $("roc-all");
    const ctx = canvas.getContext("2d");
    drawAxes(ctx, canvas.width, canvas.height);
    const legend = $("legend");
    legend.innerHTML = "";
    for (const row of report.models) {
      const tr = document.createElement("tr");
      if (row.status !== "ok") {
        tr.className = "dim";
        tr.innerHTML = `<td>${row.model}</td><td colspan="6">${row.status}</td>`;
      } else {
        const m = row.metrics;
        tr.innerHTML = `<td>${row.model}</td>` +
          [m.accuracy, m.precision, m.recall, m.f1, m.mcc, m.auc]
            .map((v) => `<td>${v.toFixed(3)}</td>`).join("");
        const color = PALETTE[row.model] ?? "#8b93a3";
        drawCurve(ctx, canvas.width, canvas.height, m.roc, color);
        const tag = document.createElement("span");
        tag.style.color = color;
        tag.textContent = row.model;
        legend.appendChild(tag);
      }
      tbody.appendChild(tr);
    }
    $("compare-table").hidden = false;
    canvas.hidden = false;
    status(`comparison done in ${(ms / 1000).toFixed(1)} s`);
  } catch (err) {
    status(`error: ${err}`);
  } finally {
    button.disabled = false;
  }
}

function onClassify() {
  try {
    const result = JSON.parse(classifyText($("text").value));
    const verdict = $("verdict");
    const pct = (result.score * 100).toFixed(1);
    verdict.innerHTML =
      `<b class="${result.label}">${result.label}</b> — score ${result.score.toFixed(3)} ` +
      `<span class="hint">(${pct}% toward chatgpt, ${result.model})</span>` +
      (result.all_oov ? ' <span class="hint">· every token is out of vocabulary</span>' : "");
    $("scorebar").hidden = false;
    $("scoremark").style.left = `${result.score * 100}%`;
    status("");
  } catch (err) {
    status(`error: ${err}`);
  }
}

function renderChips() {
  const hint = JSON.parse(markerHint());
  const add = (id, words, title) => {
    const box = $(id);
    box.innerHTML = `<span class="hint">${title}:</span>`;
    for (const word of words.slice(0, 10)) {
      const chip = document.createElement("em");
      chip.textContent = word;
      chip.onclick = () => { $("text").value = ($("text").value + " " + word).trim(); };
      box.appendChild(chip);
    }
  };
  add("human-chips", hint.human, "human markers");
  add("chatgpt-chips", hint.chatgpt, "chatgpt markers");
}

function bindSlider(id) {
  const input = $(id);
  const out = $(`${id}-out`);
  const show = () => { out.textContent = id === "split" ? Number(input.value).toFixed(2) : input.value; };
  input.addEventListener("input", show);
  show();
}

async function main() {
  status("loading wasm…");
  await init();
  ["n", "trees", "split"].forEach(bindSlider);
  $("run").addEventListener("click", onRun);
  $("compare").addEventListener("click", onCompare);
  $("classify").addEventListener("click", onClassify);
  renderChips();
  status("ready — train a model to begin");
}

main();
