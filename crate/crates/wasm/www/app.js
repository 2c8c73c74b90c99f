// Plain-canvas front end for the hyers-lab wasm bindings. No framework;
// every redraw pulls fresh Float64Array buffers out of the kernel.

import init, {
  gajda_curve,
  zeta_curve,
  approx_slice,
  threshold_witness,
  witness_profile,
} from "./pkg/hyers_lab_wasm.js";

const CURVE_POINTS = 481;

function plot(canvas) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pad = 34;
  return {
    ctx, w, h, pad,
    sx(x, x0, x1) { return pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad); },
    sy(y, y0, y1) { return h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad); },
  };
}

function axes(p, x0, x1, y0, y1) {
  const { ctx } = p;
  ctx.strokeStyle = "#8886";
  ctx.lineWidth = 1;
  ctx.beginPath();
  if (y0 < 0 && y1 > 0) { ctx.moveTo(p.sx(x0, x0, x1), p.sy(0, y0, y1)); ctx.lineTo(p.sx(x1, x0, x1), p.sy(0, y0, y1)); }
  if (x0 < 0 && x1 > 0) { ctx.moveTo(p.sx(0, x0, x1), p.sy(y0, y0, y1)); ctx.lineTo(p.sx(0, x0, x1), p.sy(y1, y0, y1)); }
  ctx.stroke();
  ctx.fillStyle = "#888";
  ctx.font = "11px system-ui";
  ctx.fillText(x0.toPrecision(3), p.pad, p.h - 8);
  ctx.fillText(x1.toPrecision(3), p.w - p.pad - 24, p.h - 8);
  ctx.fillText(y1.toPrecision(3), 4, p.pad);
  ctx.fillText(y0.toPrecision(3), 4, p.h - p.pad);
}

function polyline(p, xs, ys, x0, x1, y0, y1, style, width = 2, dash = []) {
  const { ctx } = p;
  ctx.strokeStyle = style;
  ctx.lineWidth = width;
  ctx.setLineDash(dash);
  ctx.beginPath();
  for (let i = 0; i < xs.length; i++) {
    const px = p.sx(xs[i], x0, x1);
    const py = p.sy(ys[i], y0, y1);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  }
  ctx.stroke();
  ctx.setLineDash([]);
}

function linspace(a, b, count) {
  const out = new Float64Array(count);
  for (let i = 0; i < count; i++) out[i] = a + ((b - a) * i) / (count - 1);
  return out;
}

// --- panel 1: the bounded counterexample function ------------------------

function drawGajda() {
  const eps = Number(document.getElementById("g-eps").value);
  document.getElementById("g-eps-out").value = eps.toFixed(1);
  const [x0, x1] = [-4, 4];
  const xs = linspace(x0, x1, CURVE_POINTS);
  const f = gajda_curve(eps, x0, x1, CURVE_POINTS);
  const bound = eps / 3;
  const y1 = bound * 1.25, y0 = -y1;

  const p = plot(document.getElementById("g-canvas"));
  axes(p, x0, x1, y0, y1);
  polyline(p, [x0, x1], [bound, bound], x0, x1, y0, y1, "#e67e22", 1, [6, 4]);
  polyline(p, [x0, x1], [-bound, -bound], x0, x1, y0, y1, "#e67e22", 1, [6, 4]);
  if (document.getElementById("g-zeta").checked) {
    const z = zeta_curve(eps, x0, x1, CURVE_POINTS);
    polyline(p, xs, z, x0, x1, y0, y1, "#27ae60", 1.5);
  }
  polyline(p, xs, f, x0, x1, y0, y1, "#2980b9", 2.5);
}

// --- panel 2: recovery with a certified band ------------------------------

function drawApprox() {
  const beta = Number(document.getElementById("a-beta").value);
  let r = Number(document.getElementById("a-r").value);
  document.getElementById("a-beta-out").value = beta.toFixed(2);
  document.getElementById("a-r-out").value = r.toFixed(2);
  const readout = document.getElementById("a-readout");
  const canvas = document.getElementById("a-canvas");

  if (Math.abs(r - 1) < 1e-9) {
    plot(canvas);
    readout.innerHTML =
      '<span class="error">r = 1 is the stability threshold: no certified ' +
      "approximant exists — see panel 3 for the counterexamples.</span>";
    return;
  }
  let slice;
  try {
    slice = approx_slice(beta, r, 1.0, -4, 4, 161);
  } catch (err) {
    plot(canvas);
    readout.innerHTML = `<span class="error">${err}</span>`;
    return;
  }
  const xs = slice.xs, g = slice.g, a = slice.approximant, band = slice.bound;
  const upper = a.map((v, i) => v + band[i]);
  const lower = a.map((v, i) => v - band[i]);
  const lo = Math.min(...lower, ...g), hi = Math.max(...upper, ...g);
  const margin = 0.05 * (hi - lo || 1);
  const [x0, x1, y0, y1] = [-4, 4, lo - margin, hi + margin];

  const p = plot(canvas);
  // certified band
  const { ctx } = p;
  ctx.fillStyle = "#2980b922";
  ctx.beginPath();
  for (let i = 0; i < xs.length; i++) {
    const px = p.sx(xs[i], x0, x1), py = p.sy(upper[i], y0, y1);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  }
  for (let i = xs.length - 1; i >= 0; i--) {
    ctx.lineTo(p.sx(xs[i], x0, x1), p.sy(lower[i], y0, y1));
  }
  ctx.closePath();
  ctx.fill();
  axes(p, x0, x1, y0, y1);
  polyline(p, xs, g, x0, x1, y0, y1, "#c0392b", 2);
  polyline(p, xs, a, x0, x1, y0, y1, "#2980b9", 2);
  readout.textContent =
    `mode: ${r < 1 ? "doubling" : "halving"} · worst-case iterations: ` +
    `${slice.max_iterations} · red: perturbed map, blue: recovered multiadditive map, ` +
    "shaded: certified bound";
}

// --- panel 3: the witness profile -----------------------------------------

function drawWitness() {
  const c = Number(document.getElementById("w-c").value);
  const deltaExp = Number(document.getElementById("w-delta").value);
  const delta = Math.pow(10, deltaExp);
  document.getElementById("w-c-out").value = c.toFixed(1);
  document.getElementById("w-delta-out").value = delta.toPrecision(3);
  const eps = 6.0;
  const readout = document.getElementById("w-readout");
  const canvas = document.getElementById("w-canvas");

  let witness, profile;
  try {
    witness = threshold_witness(c, eps, delta);
    const maxDepth = Math.max(witness.depth + 8, 24);
    profile = witness_profile(c, eps, delta, maxDepth);
  } catch (err) {
    plot(canvas);
    readout.innerHTML = `<span class="error">${err}</span>`;
    return;
  }
  const depths = Array.from(profile, (_, i) => i + 1);
  const logRatios = Array.from(profile, (v) => Math.log10(Math.max(v, 1e-12)));
  const x0 = 1, x1 = depths.length;
  const y0 = Math.min(...logRatios, -0.5) - 0.2;
  const y1 = Math.max(...logRatios, 0.5) + 0.2;

  const p = plot(canvas);
  axes(p, x0, x1, y0, y1);
  // the ratio-1 line that a witness must cross
  polyline(p, [x0, x1], [0, 0], x0, x1, y0, y1, "#e67e22", 1, [6, 4]);
  polyline(p, depths, logRatios, x0, x1, y0, y1, "#2980b9", 2);
  const { ctx } = p;
  ctx.fillStyle = "#c0392b";
  ctx.beginPath();
  ctx.arc(p.sx(witness.depth, x0, x1), p.sy(Math.log10(witness.ratio), y0, y1), 5, 0, 2 * Math.PI);
  ctx.fill();
  readout.textContent =
    `reduced slope m(1) = ${witness.slope.toFixed(3)} · witness x* = 2^-${witness.depth}` +
    ` = ${witness.x_star.toExponential(3)} · |f(x*) - m(x*)| = ${witness.lhs.toExponential(3)}` +
    ` > δ|x*| = ${witness.rhs.toExponential(3)} · ratio = ${witness.ratio.toFixed(3)}` +
    " (log10 scale; dashed line is ratio 1)";
}

// --- wiring ----------------------------------------------------------------

await init();

for (const id of ["g-eps", "g-zeta"]) {
  document.getElementById(id).addEventListener("input", drawGajda);
}
for (const id of ["a-beta", "a-r"]) {
  document.getElementById(id).addEventListener("input", drawApprox);
}
for (const id of ["w-c", "w-delta"]) {
  document.getElementById(id).addEventListener("input", drawWitness);
}

drawGajda();
drawApprox();
drawWitness();
