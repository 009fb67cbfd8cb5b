// Demo wiring: parse form inputs, call the wasm exports, draw the
// returned samples on plain canvases.  No framework, no build step beyond
// wasm-bindgen.

import init, {
  ground_state,
  constant_comparison,
  inequality_playground,
} from "./pkg/opial_lab_wasm.js";

const fmt = (x, digits = 6) => {
  if (!Number.isFinite(x)) return String(x);
  const a = Math.abs(x);
  return a !== 0 && (a < 1e-3 || a >= 1e5) ? x.toExponential(digits) : x.toPrecision(digits + 1);
};

// ---------------------------------------------------------------- plotting

function plot(canvas, curves, { labels = [] } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const padL = 46, padR = 12, padT = 12, padB = 24;
  ctx.clearRect(0, 0, W, H);

  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const c of curves) {
    for (const v of c.x) { xMin = Math.min(xMin, v); xMax = Math.max(xMax, v); }
    for (const v of c.y) { yMin = Math.min(yMin, v); yMax = Math.max(yMax, v); }
  }
  if (!Number.isFinite(xMin) || xMax === xMin) return;
  if (yMax === yMin) { yMax += 1; yMin -= 1; }
  const ySpan = yMax - yMin;
  yMin -= 0.06 * ySpan; yMax += 0.06 * ySpan;

  const sx = x => padL + ((x - xMin) / (xMax - xMin)) * (W - padL - padR);
  const sy = y => H - padB - ((y - yMin) / (yMax - yMin)) * (H - padT - padB);

  // Axes and a light grid.
  ctx.strokeStyle = "#2a3342";
  ctx.fillStyle = "#8b95a3";
  ctx.lineWidth = 1;
  ctx.font = "10px monospace";
  const ticks = 4;
  for (let i = 0; i <= ticks; i++) {
    const y = yMin + (i / ticks) * (yMax - yMin);
    const py = sy(y);
    ctx.beginPath(); ctx.moveTo(padL, py); ctx.lineTo(W - padR, py); ctx.stroke();
    ctx.fillText(fmt(y, 2), 4, py + 3);
    const x = xMin + (i / ticks) * (xMax - xMin);
    const px = sx(x);
    ctx.fillText(fmt(x, 2), px - 8, H - 8);
  }
  if (yMin < 0 && yMax > 0) {
    ctx.strokeStyle = "#3c465a";
    ctx.beginPath(); ctx.moveTo(padL, sy(0)); ctx.lineTo(W - padR, sy(0)); ctx.stroke();
  }

  const colors = ["#5fb4ff", "#3ecf8e", "#f7c948"];
  curves.forEach((c, k) => {
    ctx.strokeStyle = colors[k % colors.length];
    ctx.lineWidth = 1.8;
    ctx.beginPath();
    c.x.forEach((x, i) => {
      const px = sx(x), py = sy(c.y[i]);
      if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
    });
    ctx.stroke();
  });

  labels.forEach((text, k) => {
    ctx.fillStyle = colors[k % colors.length];
    ctx.font = "11px sans-serif";
    ctx.fillText(text, W - padR - 150, padT + 14 + 14 * k);
  });
}

// ---------------------------------------------------------------- panels

function values(form) {
  const out = {};
  for (const input of form.querySelectorAll("input")) out[input.name] = Number(input.value);
  return out;
}

function runGround(form) {
  const v = values(form);
  const doc = JSON.parse(ground_state(v.p, v.mu, v.L, Math.max(64, v.n | 0)));
  plot(document.getElementById("ground-plot"), [{ x: doc.x, y: doc.u }], {
    labels: [`u(x), p = ${doc.p}`],
  });
  document.getElementById("ground-stats").innerHTML = `
    <span>amplitude <b>${fmt(doc.amplitude)}</b></span>
    <span>energy ∫u′² <b>${fmt(doc.energy)}</b></span>
    <span>μ∫u<sup>p+1</sup> <b>${fmt(doc.mu * doc.nonlinear_mass)}</b></span>
    <span>ODE residual <b>${fmt(doc.residuals.ode, 2)}</b></span>
    <span>energy identity <b>${fmt(doc.residuals.energy_identity, 2)}</b></span>`;
}

function runConstant(form) {
  const v = values(form);
  const doc = JSON.parse(constant_comparison(v.p, v.L, Math.max(64, v.n | 0)));
  const m = doc.maximizer;
  const h = m.length / (m.values.length - 1);
  const xs = m.values.map((_, i) => i * h);
  plot(document.getElementById("constant-plot"), [{ x: xs, y: m.values }], {
    labels: ["energy-normalized maximizer"],
  });
  const drift = doc.rel_diff_max_printed;
  const badge = drift > 0.5
    ? `<span class="badge fail">printed form off by ${fmt(drift, 2)} rel</span>`
    : `<span class="badge ok">printed form consistent</span>`;
  document.getElementById("constant-stats").innerHTML = `
    <span>c_maximized <b>${fmt(doc.c_maximized, 10)}</b></span>
    <span>c_closed_form <b>${fmt(doc.c_closed_form, 10)}</b></span>
    <span>c_paper_printed <b>${fmt(doc.c_paper_printed, 10)}</b></span>
    <span>iterations <b>${doc.iterations}</b></span>
    ${badge}`;
}

function runPlayground(form) {
  const v = values(form);
  const doc = JSON.parse(
    inequality_playground(Math.max(1, v.modes | 0), v.decay, v.seed >>> 0, v.L, v.p),
  );
  plot(
    document.getElementById("playground-plot"),
    [
      { x: doc.x, y: doc.u },
      { x: doc.x, y: doc.even_part },
    ],
    { labels: ["random series u", "even-mode part"] },
  );
  const rows = doc.checks
    .map(
      c => `<tr>
        <td>${c.name}</td>
        <td class="num">${fmt(c.lhs)}</td>
        <td class="num">${fmt(c.rhs)}</td>
        <td class="num">${fmt(c.margin)}</td>
        <td>${c.holds ? '<span class="badge ok">holds</span>' : '<span class="badge fail">violated</span>'}</td>
      </tr>`,
    )
    .join("");
  document.getElementById("playground-table").innerHTML = `
    <table>
      <thead><tr><th>check</th><th>lhs</th><th>rhs</th><th>margin</th><th></th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

const runners = { ground: runGround, constant: runConstant, playground: runPlayground };

async function main() {
  await init();
  for (const form of document.querySelectorAll("form[data-run]")) {
    const name = form.dataset.run;
    const errBox = document.getElementById(`${name}-error`);
    const go = () => {
      errBox.textContent = "";
      try {
        runners[name](form);
      } catch (e) {
        errBox.textContent = String(e);
      }
    };
    form.addEventListener("submit", ev => {
      ev.preventDefault();
      go();
    });
    go(); // render the defaults immediately
  }
}

main();
