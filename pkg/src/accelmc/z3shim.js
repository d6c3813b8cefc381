#!/usr/bin/env node
// Present the npm z3-solver WASM build as a child process speaking SMT-LIB 2
// on stdin/stdout, like `z3 -in`.  The driver writes one command per line.
//
// Commands are dispatched onto solver objects through the C API rather than
// fed to Z3's own command interpreter: the interpreter keeps parser state
// across eval calls and corrupts it intermittently under the WASM build.
// parse_smtlib2_string is stateless (declarations are passed in explicitly),
// so only the command forms the driver actually emits are supported here:
// set-option / set-logic / declare-const / assert / push / pop / check-sat /
// get-value / reset / exit.
//
// Used as the fallback solver when no native z3 binary is on PATH.

"use strict";

const { execSync } = require("child_process");
try {
  const globalRoot = execSync("npm root -g", { encoding: "utf8" }).trim();
  if (globalRoot) module.paths.push(globalRoot);
} catch (e) {
  // npm not available; rely on the normal resolution paths
}
for (const p of ["/usr/lib/node_modules", "/usr/local/lib/node_modules"]) {
  if (!module.paths.includes(p)) module.paths.push(p);
}

let initZ3;
try {
  ({ init: initZ3 } = require("z3-solver"));
} catch (e) {
  process.stderr.write(
    "z3shim: cannot resolve the z3-solver npm package; " +
      "install it with `npm install -g z3-solver`\n"
  );
  process.exit(3);
}

async function main() {
  const { Z3 } = await initZ3();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  Z3.del_config(cfg);
  const intSort = Z3.mk_int_sort(ctx);

  let solver = Z3.mk_simple_solver(ctx);
  Z3.solver_inc_ref(ctx, solver);
  const decls = new Map(); // name -> 0-ary Int func_decl
  const options = new Map(); // param name -> uint value

  function applyOptions() {
    const params = Z3.mk_params(ctx);
    Z3.params_inc_ref(ctx, params);
    for (const [name, value] of options) {
      try {
        Z3.params_set_uint(ctx, params, Z3.mk_string_symbol(ctx, name), value);
      } catch (e) {
        // unknown parameters are best effort
      }
    }
    Z3.solver_set_params(ctx, solver, params);
    Z3.params_dec_ref(ctx, params);
  }

  function declare(name) {
    if (!decls.has(name)) {
      const d = Z3.mk_func_decl(ctx, Z3.mk_string_symbol(ctx, name), [], intSort);
      decls.set(name, d);
    }
  }

  function assertText(text) {
    const names = [];
    const ds = [];
    for (const [n, d] of decls) {
      names.push(Z3.mk_string_symbol(ctx, n));
      ds.push(d);
    }
    const vec = Z3.parse_smtlib2_string(ctx, text, [], [], names, ds);
    Z3.ast_vector_inc_ref(ctx, vec);
    const size = Z3.ast_vector_size(ctx, vec);
    for (let i = 0; i < size; i++) {
      Z3.solver_assert(ctx, solver, Z3.ast_vector_get(ctx, vec, i));
    }
    Z3.ast_vector_dec_ref(ctx, vec);
  }

  function getValues(symbols) {
    const model = Z3.solver_get_model(ctx, solver);
    Z3.model_inc_ref(ctx, model);
    const parts = [];
    try {
      for (const name of symbols) {
        const d = decls.get(name);
        if (d === undefined) throw new Error(`undeclared symbol ${name}`);
        const app = Z3.mk_app(ctx, d, []);
        const val = Z3.model_eval(ctx, model, app, true);
        if (val === null) throw new Error(`no model value for ${name}`);
        let s = Z3.get_numeral_string(ctx, val);
        if (s.startsWith("-")) s = `(- ${s.slice(1)})`;
        parts.push(`(${name} ${s})`);
      }
    } finally {
      Z3.model_dec_ref(ctx, model);
    }
    return `(${parts.join(" ")})`;
  }

  async function dispatch(cmd) {
    let m;
    if ((m = cmd.match(/^\(set-option\s+:([a-zA-Z0-9._-]+)\s+(\d+)\s*\)$/))) {
      // numeric options go to the solver as params; the smt. prefix of the
      // command-line names is not used for solver params
      let name = m[1].replace(/^smt\./, "").replace(/-/g, "_");
      if (name === "random_seed" || name === "seed") name = "random_seed";
      options.set(name, parseInt(m[2], 10));
      applyOptions();
      return "success";
    }
    if (cmd.startsWith("(set-option") || cmd.startsWith("(set-logic") ||
        cmd.startsWith("(set-info")) {
      return "success";
    }
    if ((m = cmd.match(/^\(declare-const\s+([^\s()]+)\s+Int\s*\)$/))) {
      declare(m[1]);
      return "success";
    }
    if (/^\(push\s+1\s*\)$/.test(cmd)) {
      Z3.solver_push(ctx, solver);
      return "success";
    }
    if (/^\(pop\s+1\s*\)$/.test(cmd)) {
      Z3.solver_pop(ctx, solver, 1);
      return "success";
    }
    if (cmd.startsWith("(assert")) {
      assertText(cmd);
      return "success";
    }
    if (cmd === "(check-sat)") {
      const r = await Z3.solver_check(ctx, solver);
      return r === 1 ? "sat" : r === -1 ? "unsat" : "unknown";
    }
    if ((m = cmd.match(/^\(get-value\s+\((.*)\)\s*\)$/))) {
      return getValues(m[1].trim().split(/\s+/).filter((s) => s.length > 0));
    }
    if (cmd === "(reset)") {
      Z3.solver_dec_ref(ctx, solver);
      solver = Z3.mk_simple_solver(ctx);
      Z3.solver_inc_ref(ctx, solver);
      decls.clear();
      applyOptions();
      return "success";
    }
    if (cmd === "(exit)") {
      process.exit(0);
    }
    throw new Error(`unsupported command: ${cmd.slice(0, 40)}`);
  }

  const readline = require("readline");
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  // commands must run strictly in order against the shared solver
  let chain = Promise.resolve();
  rl.on("line", (line) => {
    chain = chain.then(async () => {
      const cmd = line.trim();
      if (cmd === "") return;
      let out;
      try {
        out = await dispatch(cmd);
      } catch (e) {
        out = '(error "' + String(e.message || e).replace(/"/g, "'") + '")';
      }
      if (out) process.stdout.write(out + "\n");
    });
  });
  rl.on("close", () => {
    chain.then(() => process.exit(0));
  });
}

main().catch((e) => {
  process.stderr.write("z3shim: " + String(e) + "\n");
  process.exit(3);
});
