import init, { thomPolynomial, sigmaAt, stratify } from "./pkg/singcalc_wasm.js";

function show(id, f) {
  const out = document.getElementById(id);
  try {
    out.textContent = JSON.stringify(JSON.parse(f()), null, 2);
    out.className = "";
  } catch (e) {
    out.textContent = String(e);
    out.className = "err";
  }
}

function bind(id, handler) {
  document.getElementById(id).addEventListener("submit", (ev) => {
    ev.preventDefault();
    handler(new FormData(ev.target));
  });
}

await init();
document.getElementById("status").textContent = "ready";

bind("tp", (d) =>
  show("tp-out", () => thomPolynomial(Number(d.get("r")), Number(d.get("k")), d.has("integral"))));
bind("sigma", (d) =>
  show("sigma-out", () => sigmaAt(d.get("point"), Number(d.get("k")))));
bind("strat", (d) =>
  show("strat-out", () => stratify(Number(d.get("n")), Number(d.get("k")), d.get("grid"))));
