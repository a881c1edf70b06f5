// Built by `wasm-bindgen --target web --out-dir crates/web/www/pkg ...`.
import init, { euler_gate, check_configuration, render_wiring, sample } from "./pkg/nkconf_web.js";

const $ = (id) => document.getElementById(id);

function updateGate() {
  const n = parseInt($("gate-n").value, 10);
  const k = parseInt($("gate-k").value, 10);
  let current;
  try {
    current = JSON.parse(euler_gate(n, k));
  } catch (e) {
    $("gate-verdict").textContent = String(e);
    $("gate-table").replaceChildren();
    return;
  }
  $("gate-verdict").textContent =
    `${current.gate.verdict} (impossible for n <= ${current.gate.threshold})`;

  // a window of n around the boundary for this k
  const boundary = current.gate.threshold;
  const rows = [];
  for (let m = Math.max(1, boundary - 3); m <= boundary + 4; m++) {
    const r = JSON.parse(euler_gate(m, k));
    const tr = document.createElement("tr");
    if (r.gate.verdict === "Impossible") tr.classList.add("impossible");
    if (m === n) tr.classList.add("current");
    for (const v of [m, r.counts.f0, r.counts.f1, r.counts.f2, r.counts.digon_slack, r.gate.verdict]) {
      const td = document.createElement("td");
      td.textContent = v;
      tr.appendChild(td);
    }
    rows.push(tr);
  }
  $("gate-table").replaceChildren(...rows);
}

function updateWiring() {
  $("wiring-error").textContent = "";
  try {
    const h = parseInt($("wiring-highlight").value, 10);
    $("wiring-svg").innerHTML = render_wiring($("wiring-text").value, Number.isNaN(h) ? -1 : h);
  } catch (e) {
    $("wiring-svg").replaceChildren();
    $("wiring-error").textContent = String(e);
  }
}

function runCheck() {
  const r = JSON.parse(check_configuration($("config-text").value));
  if (!r.valid) {
    $("config-result").textContent = r.error;
    return;
  }
  const p = r.poincare;
  $("config-result").textContent = [
    `${r.n}_${r.k} configuration`,
    `canonical code   ${r.code}`,
    `Poincaré         ${p ? `${p.b0} + ${p.b1}t + ${p.b2}t^2` : "n/a"}`,
    `Euler gate       ${r.gate}`,
    `orientability    ${r.orientability} (${r.nodes} nodes)`,
    r.witness ? `witness chirotope\n${r.witness}` : "",
  ].join("\n");
}

await init();

$("gate-n").addEventListener("input", updateGate);
$("gate-k").addEventListener("input", updateGate);

$("wiring-sample").addEventListener("change", () => {
  $("wiring-text").value = sample($("wiring-sample").value);
  updateWiring();
});
$("wiring-text").addEventListener("input", updateWiring);
$("wiring-highlight").addEventListener("input", updateWiring);

$("config-sample").addEventListener("change", () => {
  $("config-text").value = sample($("config-sample").value);
  runCheck();
});
$("config-run").addEventListener("click", runCheck);

$("wiring-text").value = sample($("wiring-sample").value);
$("config-text").value = sample($("config-sample").value);
updateGate();
updateWiring();
runCheck();
