import init, { propagate, alphaCurve, classify } from "./pkg/hdconv_demo.js";

const $ = (id) => document.getElementById(id);
const PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];

function parseRows(text) {
  return text.trim().split("\n").filter((l) => l.trim()).map((l) => l.trim().split(/[\s,]+/).map(Number));
}

function runPropagate() {
  const out = $("p-result");
  $("p-alpha-out").textContent = $("p-alpha").value;
  try {
    const rows = parseRows($("p-features").value);
    const d = rows[0].length;
    const edges = parseRows($("p-edges").value).flat();
    const result = propagate(
      rows.length, new Uint32Array(edges), new Float32Array(rows.flat()), d,
      Number($("p-layers").value), Number($("p-alpha").value), $("p-mode").value,
    );
    let html = '<table class="matrix">';
    for (let i = 0; i < rows.length; i++) {
      html += `<tr><th>${i}</th>`;
      for (let k = 0; k < d; k++) {
        const v = result[i * d + k];
        const shade = Math.round(255 - 200 * Math.min(1, Math.abs(v)));
        html += `<td style="background:rgb(${shade},${shade},255)">${v.toFixed(3)}</td>`;
      }
      html += "</tr>";
    }
    out.innerHTML = html + "</table>";
  } catch (e) {
    out.innerHTML = `<p class="error">${e}</p>`;
  }
}

function syntheticArgs() {
  for (const id of ["s-homophily", "s-signal"]) $(`${id}-out`).textContent = $(id).value;
  return [
    Number($("s-nodes").value), Number($("s-classes").value), Number($("s-degree").value),
    Number($("s-homophily").value), Number($("s-signal").value), $("s-binary").checked,
    Number($("s-layers").value), Number($("s-seed").value),
  ];
}

function drawCurve(points) {
  const c = $("curve");
  const g = c.getContext("2d");
  const pad = 40;
  const w = c.width - 2 * pad;
  const h = c.height - 2 * pad;
  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, w, h);
  g.fillStyle = "#444";
  g.font = "12px sans-serif";
  for (let t = 0; t <= 1.0001; t += 0.25) {
    g.fillText(t.toFixed(2), pad + t * w - 10, c.height - pad + 16);
    g.fillText(t.toFixed(2), 4, pad + (1 - t) * h + 4);
  }
  g.fillText("alpha", c.width / 2 - 14, c.height - 6);
  const series = [["test_accuracy", "#e15759"], ["val_accuracy", "#4e79a7"]];
  for (const [key, color] of series) {
    g.strokeStyle = color;
    g.lineWidth = 2;
    g.beginPath();
    points.forEach((p, i) => {
      const x = pad + p.alpha * w;
      const y = pad + (1 - p[key]) * h;
      i === 0 ? g.moveTo(x, y) : g.lineTo(x, y);
    });
    g.stroke();
  }
  const best = points.reduce((a, b) => (b.val_accuracy > a.val_accuracy ? b : a));
  g.fillStyle = "#222";
  g.fillText(`best validation at alpha ${best.alpha.toFixed(2)}: test ${best.test_accuracy.toFixed(3)}`, pad + 8, pad + 16);
  g.fillStyle = "#e15759";
  g.fillText("test", pad + w - 70, pad + 16);
  g.fillStyle = "#4e79a7";
  g.fillText("val", pad + w - 30, pad + 16);
}

function drawNodes(result) {
  const c = $("nodes");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const n = result.labels.length;
  const order = [...Array(n).keys()].sort((a, b) => result.labels[a] - result.labels[b] || a - b);
  const pos = new Array(n);
  const r = c.width / 2 - 30;
  order.forEach((v, i) => {
    const t = (2 * Math.PI * i) / n;
    pos[v] = [c.width / 2 + r * Math.cos(t), c.height / 2 + r * Math.sin(t)];
  });
  g.strokeStyle = "rgba(0,0,0,0.06)";
  for (const [u, v] of result.edges) {
    g.beginPath();
    g.moveTo(...pos[u]);
    g.lineTo(...pos[v]);
    g.stroke();
  }
  const train = new Set(result.train);
  let wrong = 0;
  for (let v = 0; v < n; v++) {
    const ok = result.predictions[v] === result.labels[v];
    if (!ok) wrong++;
    g.beginPath();
    g.arc(...pos[v], ok ? 5 : 7, 0, 2 * Math.PI);
    g.fillStyle = PALETTE[result.predictions[v] % PALETTE.length];
    g.fill();
    if (train.has(v)) {
      g.strokeStyle = "#000";
      g.lineWidth = 1.5;
      g.stroke();
    }
  }
  $("c-info").textContent =
    `test accuracy ${result.test_accuracy.toFixed(3)}; ${wrong} of ${n} nodes misclassified (drawn larger)`;
}

function runSynthetic() {
  $("s-error").textContent = "";
  try {
    drawCurve(JSON.parse(alphaCurve(...syntheticArgs())));
    runClassify();
  } catch (e) {
    $("s-error").textContent = String(e);
  }
}

function runClassify() {
  $("c-alpha-out").textContent = $("c-alpha").value;
  try {
    drawNodes(JSON.parse(classify(...syntheticArgs(), Number($("c-alpha").value))));
  } catch (e) {
    $("c-info").textContent = String(e);
  }
}

await init();
for (const id of ["p-edges", "p-features", "p-mode", "p-layers", "p-alpha"]) $(id).addEventListener("input", runPropagate);
for (const id of ["s-nodes", "s-classes", "s-degree", "s-layers", "s-homophily", "s-signal", "s-binary", "s-seed"]) {
  $(id).addEventListener("change", runSynthetic);
}
$("c-alpha").addEventListener("input", runClassify);
runPropagate();
runSynthetic();
