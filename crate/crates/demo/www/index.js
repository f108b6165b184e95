import init, { eci, thci, appendix } from "./pkg/econ_complexity_demo.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";
const COLORS = ["#1f77b4", "#d62728", "#2ca02c"];

const ECI_SAMPLE = `country,wine,cars,chips,rice,steel,textiles
Alba,90,5,2,10,4,30
Borea,10,80,40,5,30,8
Calia,2,60,90,3,20,4
Dorn,30,4,1,70,6,40
Esta,5,30,10,4,50,20
Fenn,40,10,5,20,25,10`;

const CP = `country,p1,p2,p3,p4
A,1,1,0,0
B,1,0,1,0
C,0,1,1,1
D,0,0,1,1`;
const CT = `country,t1,t2,t3
A,1,0,0
B,1,1,0
C,0,1,1
D,0,0,1`;
const PT = `product,t1,t2,t3
p1,1,0,0
p2,1,1,0
p3,0,1,1
p4,0,0,1`;

function el(tag, attrs = {}, text) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function bars(target, labels, values) {
  const rowH = 18, w = 420, mid = 240, scale = 70;
  const svg = el("svg", { width: w, height: rowH * labels.length + 10 });
  const order = labels.map((_, i) => i).sort((a, b) => values[b] - values[a]);
  order.forEach((i, r) => {
    const y = 5 + r * rowH, v = values[i];
    const x = v >= 0 ? mid : mid + v * scale;
    svg.append(el("text", { x: mid - 80, y: y + 13, "text-anchor": "end", "font-size": 12 }, labels[i]));
    svg.append(el("rect", { x, y: y + 2, width: Math.abs(v) * scale, height: rowH - 4, fill: v >= 0 ? COLORS[0] : COLORS[1] }));
    svg.append(el("text", { x: mid - 75, y: y + 13, "font-size": 11, fill: "#666" }, v.toFixed(3)));
  });
  svg.append(el("line", { x1: mid, x2: mid, y1: 0, y2: rowH * labels.length + 10, stroke: "#999" }));
  target.replaceChildren(svg);
}

function table(target, head, rows, cls = () => "") {
  const t = document.createElement("table");
  const tr = t.insertRow();
  for (const h of head) { const th = document.createElement("th"); th.textContent = h; tr.append(th); }
  for (const r of rows) {
    const row = t.insertRow();
    r.forEach((c, j) => { const td = row.insertCell(); td.textContent = c; td.className = cls(c, j); });
  }
  target.replaceChildren(t);
}

const fmt = (z) => (Math.abs(z.im) < 1e-12 ? z.re.toFixed(4) : `${z.re.toFixed(4)}${z.im < 0 ? "-" : "+"}${Math.abs(z.im).toFixed(4)}i`);

function runEci() {
  $("eci-error").textContent = "";
  try {
    const r = JSON.parse(eci($("eci-input").value, Number($("eci-threshold").value), $("eci-rule").value));
    table($("eci-matrix"), ["", ...r.products], r.labels.map((l, i) => [l, ...r.incidence[i]]), (c, j) => (j > 0 && c === 1 ? "on" : ""));
    bars($("eci-bars"), r.labels, r.values);
    let text = `selected eigenvalue ${r.eigenvalue.toFixed(4)}; spectrum ${r.eigenvalues.map(fmt).join(", ")}`;
    if (r.removed_rows.length || r.removed_cols.length) text += `; pruned ${[...r.removed_rows, ...r.removed_cols].join(", ")}`;
    for (const w of r.warnings) text += `; ${w}`;
    $("eci-spectrum").textContent = text;
  } catch (e) {
    $("eci-error").textContent = e.message ?? String(e);
  }
}

function runThci() {
  $("thci-error").textContent = "";
  try {
    const r = JSON.parse(thci($("thci-cp").value, $("thci-ct").value, $("thci-pt").value, $("thci-rule").value));
    bars($("thci-bars"), r.labels, r.values);
    table(
      $("thci-table"),
      ["country", "k+", "k-", "THCI"],
      r.labels.map((l, i) => [l, r.k_plus[i].toFixed(4), r.k_minus[i].toFixed(4), r.values[i].toFixed(4)]),
    );
    const removed = [...r.removed_countries, ...r.removed_products, ...r.removed_technologies];
    $("thci-table").append(
      `clockwise ${r.clockwise.toFixed(4)}, counter-clockwise ${r.counterclockwise.toFixed(4)}` +
        (removed.length ? `; pruned ${removed.join(", ")}` : ""),
    );
  } catch (e) {
    $("thci-error").textContent = e.message ?? String(e);
  }
}

function lineChart(target, series) {
  const w = 640, h = 260, pad = 40;
  const years = series[0].years;
  const x = (i) => pad + (i * (w - 2 * pad)) / (years.length - 1);
  const y = (v) => h - pad - ((v + 1) * (h - 2 * pad)) / 2;
  const svg = el("svg", { width: w, height: h });
  for (const v of [-1, -0.5, 0, 0.5, 1]) {
    svg.append(el("line", { x1: pad, x2: w - pad, y1: y(v), y2: y(v), stroke: v === 0 ? "#999" : "#e5e5e5" }));
    svg.append(el("text", { x: pad - 6, y: y(v) + 4, "text-anchor": "end", "font-size": 11 }, v));
  }
  years.forEach((yr, i) => {
    if (i % 2 === 0) svg.append(el("text", { x: x(i), y: h - pad + 16, "text-anchor": "middle", "font-size": 11 }, yr));
  });
  series.forEach((s, k) => {
    const pts = s.values.map((v, i) => (v === null ? null : `${x(i)},${y(v)}`)).filter(Boolean);
    svg.append(el("polyline", { points: pts.join(" "), fill: "none", stroke: COLORS[k], "stroke-width": 2 }));
    svg.append(el("text", { x: w - pad - 90, y: pad + 14 * k, fill: COLORS[k], "font-size": 12 }, s.pair));
  });
  target.replaceChildren(svg);
}

function runAppendix() {
  $("app-error").textContent = "";
  try {
    const r = JSON.parse(appendix($("app-method").value, $("app-entity").value, 4));
    lineChart($("app-series"), r.series);
    const lags = [...new Set(r.lags.map((l) => l.lag))];
    const rows = ["ECI", "PatCI"].map((f) => [
      `THCI(t) vs ${f}(t+lag)`,
      ...lags.map((lag) => {
        const c = r.lags.find((l) => l.follow === f && l.lag === lag).coefficient;
        return c === null ? "" : c.toFixed(3);
      }),
    ]);
    table($("app-lags"), ["lag", ...lags], rows);
  } catch (e) {
    $("app-error").textContent = e.message ?? String(e);
  }
}

await init();
$("eci-input").value = ECI_SAMPLE;
$("thci-cp").value = CP;
$("thci-ct").value = CT;
$("thci-pt").value = PT;
for (const id of ["eci-input", "eci-threshold", "eci-rule"]) $(id).addEventListener("input", runEci);
for (const id of ["thci-cp", "thci-ct", "thci-pt", "thci-rule"]) $(id).addEventListener("input", runThci);
for (const id of ["app-method", "app-entity"]) $(id).addEventListener("input", runAppendix);

const entities = JSON.parse(appendix("pearson", "United States", 0)).entities;
for (const e of entities) $("app-entity").append(new Option(e, e, false, e === "United States"));
runEci();
runThci();
runAppendix();
