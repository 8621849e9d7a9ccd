// Plain-JS glue for the nodalab wasm demo. Build the pkg/ directory per the
// crate README, then serve this directory statically.

import init, { Lab } from "./pkg/nodalab_wasm.js";

const $ = (id) => document.getElementById(id);

let lab = null;

function blit(canvas, rgba, w, h) {
  canvas.width = w;
  canvas.height = h;
  canvas.style.width = "320px";
  canvas.style.height = "320px";
  const ctx = canvas.getContext("2d");
  ctx.putImageData(new ImageData(new Uint8ClampedArray(rgba), w, h), 0, 0);
}

function tauFactor() {
  return Math.pow(10, parseFloat($("tau").value));
}

function redrawThresholded() {
  if (!lab) return;
  const w = lab.width(), h = lab.height();
  blit($("nodal"), lab.render_nodal(tauFactor()), w, h);
  blit($("harnack"), lab.render_harnack(parseFloat($("rfrac").value)), w, h);
  $("metrics").textContent = JSON.stringify(
    JSON.parse(lab.metrics_json(tauFactor())), null, 1);
  drawProfile(JSON.parse(lab.zero_profile_json()));
}

function drawProfile(data) {
  const cv = $("profile");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const pts = data.profile;
  if (!pts || pts.length === 0) {
    ctx.fillStyle = "#666";
    ctx.fillText("zero set is empty", 10, 20);
    return;
  }
  const maxC = Math.max(...pts.map((p) => p[1]), 1);
  const maxE = pts[pts.length - 1][0];
  ctx.strokeStyle = "#0571b0";
  ctx.beginPath();
  pts.forEach(([e, c], i) => {
    const x = 15 + (e / maxE) * (cv.width - 25);
    const y = cv.height - 15 - (c / maxC) * (cv.height - 30);
    if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.fillText(`${data.points} pts, ${maxC} comp @ small eps`, 10, 10);
}

function solve() {
  const status = $("status");
  status.textContent = "solving…";
  // let the status paint before the solver blocks the thread
  setTimeout(() => {
    try {
      lab = new Lab(
        $("domain").value,
        parseFloat($("p").value),
        $("expr").value,
        parseInt($("cells").value, 10),
      );
      status.textContent = "";
      blit($("field"), lab.render_field(), lab.width(), lab.height());
      redrawThresholded();
    } catch (e) {
      status.textContent = String(e);
    }
  }, 10);
}

async function main() {
  await init();
  $("solve").addEventListener("click", solve);
  $("p").addEventListener("input", () => { $("pval").value = $("p").value; });
  $("tau").addEventListener("input", () => {
    $("tauval").value = `1e${$("tau").value}`;
    redrawThresholded();
  });
  $("rfrac").addEventListener("input", () => {
    $("rval").value = $("rfrac").value;
    redrawThresholded();
  });
  document.querySelectorAll(".preset").forEach((b) =>
    b.addEventListener("click", () => { $("expr").value = b.dataset.expr; solve(); }));
  solve();
}

main();
