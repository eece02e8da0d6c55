import init, { interval_spectrum, symbol_curve, alpha, lower_bound_curve } from "./pkg/logspec_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function plot(canvas, xs, ys, dots) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const finite = ys.filter(Number.isFinite);
  if (finite.length === 0) return;
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...finite, 0), Math.max(...finite, 0)];
  if (y1 === y0) y1 = y0 + 1;
  const px = (x) => 40 + ((x - x0) / (x1 - x0 || 1)) * (w - 50);
  const py = (y) => h - 20 - ((y - y0) / (y1 - y0)) * (h - 30);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(40, py(0));
  ctx.lineTo(w - 10, py(0));
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.fillText(y1.toPrecision(4), 2, 12);
  ctx.fillText(y0.toPrecision(4), 2, h - 22);
  ctx.strokeStyle = ctx.fillStyle = "#1a5fb4";
  ctx.beginPath();
  xs.forEach((x, i) => {
    if (!Number.isFinite(ys[i])) return;
    if (dots) ctx.fillRect(px(x) - 2, py(ys[i]) - 2, 4, 4);
    else if (i === 0) ctx.moveTo(px(x), py(ys[i]));
    else ctx.lineTo(px(x), py(ys[i]));
  });
  if (!dots) ctx.stroke();
}

function guarded(out, f) {
  return () => {
    $(out).classList.remove("err");
    try {
      f();
    } catch (e) {
      $(out).classList.add("err");
      $(out).textContent = String(e.message ?? e);
    }
  };
}

function spectrum() {
  const t = performance.now();
  const ev = Array.from(interval_spectrum(num("sp-m"), num("sp-len"), num("sp-cells"), num("sp-k")));
  plot($("sp-plot"), ev.map((_, i) => i + 1), ev, true);
  $("sp-out").textContent =
    ev.map((v, i) => `λ_${i + 1} = ${v.toFixed(6)}`).join("\n") + `\n(${(performance.now() - t).toFixed(0)} ms)`;
}

function symbolAndAlpha() {
  const m = num("sy-m");
  const [lo, hi, n] = [0.05, 4, 400];
  const ys = Array.from(symbol_curve(m, lo, hi, n));
  plot($("sy-plot"), ys.map((_, i) => lo + ((hi - lo) * i) / (n - 1)), ys, false);
  const a = Array.from(alpha(num("sy-n"), m));
  $("sy-out").textContent = `(2 ln r)^${m} on [${lo}, ${hi}]\n` + a.map((v, j) => `α_${j} = ${v.toPrecision(12)}`).join("\n");
}

function lowerBound() {
  const m = num("lb-m");
  const l1 = m % 2 === 1 ? num("lb-l1") : undefined;
  const ys = Array.from(lower_bound_curve(num("lb-n"), m, num("lb-vol"), l1, num("lb-k")));
  plot($("lb-plot"), ys.map((_, i) => i + 1), ys, false);
  $("lb-out").textContent = [1, 10, 100, 1000, 10000]
    .filter((k) => k <= ys.length)
    .map((k) => `k = ${k}: ${ys[k - 1].toPrecision(8)}`)
    .join("\n");
}

await init();
for (const [button, out, f] of [
  ["sp-run", "sp-out", spectrum],
  ["sy-run", "sy-out", symbolAndAlpha],
  ["lb-run", "lb-out", lowerBound],
]) {
  const run = guarded(out, f);
  $(button).addEventListener("click", run);
  run();
}
