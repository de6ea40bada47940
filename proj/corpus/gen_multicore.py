#!/usr/bin/env python3
"""Generates multicore.od: several fetch/execute cores plus an aggregator."""
import sys

CORES = 8


def core(k):
    mod = 5 + k % 4
    return f"""
module fetch{k}(out insn{k}, in redirect{k}) {{
    reg k, pc, epoch, r, target;
    pc = {k * 100};
    for (k : {120 + 10 * k}) {{
        r = redirect{k}.read_nb(target);
        if (r) {{
            pc = target;
            epoch = epoch + 1;
        }} else {{
            pc = pc + 1;
        }}
        insn{k}.write((epoch << 16) | pc);
    }}
    insn{k}.write(-1);
}}

module exec{k}(in insn{k}, out redirect{k}, out stat{k}) {{
    reg w, cur, ep, pc, n, sq, red;
    loop {{
        w = insn{k}.read();
        if (w < 0) {{
            break;
        }}
        ep = w >> 16;
        pc = w & 65535;
        if (ep != cur) {{
            sq = sq + 1;
        }} else {{
            n = n + 1;
            delay {1 + k % 3};
            if (pc % {mod} == 0 && red < 12) {{
                redirect{k}.write(pc * 7 % 1000);
                cur = cur + 1;
                red = red + 1;
            }}
        }}
    }}
    stat{k}.write(n);
    stat{k}.write(sq);
}}
"""


def main():
    out = ["// Generated by gen_multicore.py.", "design multicore;", ""]
    for k in range(CORES):
        out.append(f"fifo insn{k} depth 4;")
        out.append(f"fifo redirect{k} depth 1;")
        out.append(f"fifo stat{k} depth 2;")
    out.append("")
    out.append("output executed, squashed;")
    text = "\n".join(out) + "\n"
    for k in range(CORES):
        text += core(k)
    ins = ", ".join(f"in stat{k}" for k in range(CORES))
    body = "".join(
        f"    n = stat{k}.read();\n    e = e + n;\n    n = stat{k}.read();\n    s = s + n;\n" for k in range(CORES)
    )
    text += f"""
module aggregate({ins}) {{
    reg n, e, s;
{body}    output executed = e;
    output squashed = s;
}}
"""
    top = ", ".join([f"fetch{k}, exec{k}" for k in range(CORES)] + ["aggregate"])
    text += f"\ntop {top};\n"
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
