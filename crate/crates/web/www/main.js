import init, { hscMap, directionProfile, wuCheck } from "./pkg/hermcurv_web.js";

const $ = (id) => document.getElementById(id);

function report(el, err) {
  el.className = "error";
  el.textContent = String(err);
}

function color(t) {
  // blue (low) to red (high)
  const r = Math.round(255 * Math.min(1, 2 * t));
  const b = Math.round(255 * Math.min(1, 2 * (1 - t)));
  const g = Math.round(255 * (1 - Math.abs(2 * t - 1)));
  return [r, g, b];
}

function drawMap() {
  const info = $("map-info");
  info.className = "";
  try {
    const res = Number($("map-res").value);
    const m = JSON.parse(hscMap($("map-spec").value, res, Number($("map-extent").value)));
    const values = m[$("map-which").value];
    const finite = values.filter((v) => v !== null);
    const lo = Math.min(...finite);
    const hi = Math.max(...finite);
    const canvas = $("map-canvas");
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(res, res);
    values.forEach((v, k) => {
      const i = k % res;
      const j = res - 1 - Math.floor(k / res);
      const o = 4 * (j * res + i);
      const [r, g, b] = v === null ? [235, 235, 235] : color(hi > lo ? (v - lo) / (hi - lo) : 0.5);
      img.data.set([r, g, b, 255], o);
    });
    const off = new OffscreenCanvas(res, res);
    off.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    info.textContent = `n = ${m.n}; range [${lo.toPrecision(6)}, ${hi.toPrecision(6)}]; grey cells are outside the domain`;
  } catch (e) {
    report(info, e);
  }
}

function drawProfile() {
  const info = $("prof-info");
  info.className = "";
  try {
    const p = JSON.parse(directionProfile($("prof-spec").value, $("prof-point").value, 361));
    const canvas = $("prof-canvas");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    const pad = 30;
    const lo = Math.min(p.min, ...p.hsc);
    const hi = Math.max(p.max, ...p.hsc);
    const span = hi > lo ? hi - lo : 1;
    const x = (t) => pad + ((w - 2 * pad) * t) / Math.PI;
    const y = (v) => h - pad - ((h - 2 * pad) * (v - lo)) / span;
    ctx.clearRect(0, 0, w, h);
    ctx.strokeStyle = "#bbb";
    ctx.setLineDash([4, 4]);
    for (const v of [p.min, p.max]) {
      ctx.beginPath();
      ctx.moveTo(pad, y(v));
      ctx.lineTo(w - pad, y(v));
      ctx.stroke();
    }
    ctx.setLineDash([]);
    ctx.strokeStyle = "#1f5fbf";
    ctx.lineWidth = 2;
    ctx.beginPath();
    p.theta.forEach((t, k) => (k ? ctx.lineTo(x(t), y(p.hsc[k])) : ctx.moveTo(x(t), y(p.hsc[k]))));
    ctx.stroke();
    ctx.fillStyle = "#444";
    ctx.fillText("0", pad, h - 10);
    ctx.fillText("π", w - pad, h - 10);
    info.textContent = `min over all directions ${p.min.toPrecision(8)}, max ${p.max.toPrecision(8)} (dashed)`;
  } catch (e) {
    report(info, e);
  }
}

function runWu() {
  const info = $("wu-info");
  info.className = "";
  try {
    const out = wuCheck(
      $("wu-g").value,
      $("wu-h").value,
      Number($("wu-points").value),
      Number($("wu-samples").value),
      Number($("wu-seed").value),
    );
    const r = JSON.parse(out);
    info.textContent = r.pass ? "all checks hold" : "a check failed";
    $("wu-out").textContent = JSON.stringify(r, null, 2);
  } catch (e) {
    report(info, e);
  }
}

await init();
$("map-run").onclick = drawMap;
$("prof-run").onclick = drawProfile;
$("wu-run").onclick = runWu;
drawMap();
drawProfile();
