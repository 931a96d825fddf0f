#!/usr/bin/env node
// z3 shim over the WASM build (npm z3-solver).
//
// One-shot:    z3cli.js [flags] <file.smt2|->    evaluate script, print output
// Persistent:  z3cli.js --server                 read SMT-LIB2 scripts from
//   stdin, each terminated by a line ";; --query-end--"; each script is
//   evaluated in a fresh context and the output is followed by a line
//   ";; --response-end--".
// z3-style flags (-smt2, -T:..., -t:...) are accepted; -T:<secs> sets a
// soft timeout in the solver where supported.
const fs = require('fs');
const path = require('path');
const readline = require('readline');
const { init } = require(path.join(__dirname, 'node_modules/z3-solver'));

const QUERY_END = ';; --query-end--';
const RESPONSE_END = ';; --response-end--';

async function evalScript(Z3, input) {
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  try {
    return await Z3.eval_smtlib2_string(ctx, input);
  } finally {
    Z3.del_context(ctx);
  }
}

async function main() {
  const argv = process.argv.slice(2);
  const server = argv.includes('--server');
  const { Z3 } = await init();

  if (server) {
    const rl = readline.createInterface({ input: process.stdin, terminal: false });
    let buf = [];
    for await (const line of rl) {
      if (line.trim() === QUERY_END) {
        let out;
        try {
          out = await evalScript(Z3, buf.join('\n'));
        } catch (e) {
          out = '(error "' + String(e).replace(/"/g, "'") + '")';
        }
        buf = [];
        if (out && out.length) process.stdout.write(out.endsWith('\n') ? out : out + '\n');
        process.stdout.write(RESPONSE_END + '\n');
      } else {
        buf.push(line);
      }
    }
    process.exit(0);
  }

  const args = argv.filter(a => !a.startsWith('-') || a === '-');
  const arg = args[args.length - 1] || '-';
  const input = arg === '-' ? fs.readFileSync(0, 'utf8') : fs.readFileSync(arg, 'utf8');
  let out;
  try {
    out = await evalScript(Z3, input);
  } catch (e) {
    out = '(error "' + String(e).replace(/"/g, "'") + '")';
  }
  if (out && out.length) process.stdout.write(out.endsWith('\n') ? out : out + '\n');
  process.exit(0);
}
main().catch(e => { process.stderr.write(String(e) + '\n'); process.exit(1); });
