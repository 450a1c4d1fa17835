"""Command line front end: benchmark sweeps, differential checking, dumps.

Exit codes: 0 on success, 1 when a check finds a divergence or invariant
violation, 2 on bad arguments (argparse's own convention).
"""

from __future__ import annotations

import argparse
import os
import sys

from .words import WORD_BITS, bit_repeat, bit_repeat_shift
from .verify import VARIANTS, OpScript, differential_run, make_variant, variant_supported
from .bench import DEFAULT_FREQS, Workload, render_figures, rows_to_csv, run_sweep

VARIANT_CHOICES = tuple(sorted(VARIANTS)) + ("all",)


def build_parser():
    p = argparse.ArgumentParser(
        prog="initarray-bench",
        description="Benchmark and check the initializable array variants.",
    )
    p.add_argument("--n", type=int, default=4096, help="array length (default 4096)")
    p.add_argument("--elem-bits", type=int, default=16, help="element width in bits (default 16)")
    p.add_argument("--variant", choices=VARIANT_CHOICES, default="all",
                   help="which structure to drive (default all)")
    p.add_argument("--freq", type=float, action="append", default=None, metavar="F",
                   help="accesses-per-init as a fraction of n; repeatable "
                        f"(default {', '.join(str(f) for f in DEFAULT_FREQS)})")
    p.add_argument("--ops", type=int, default=10000,
                   help="operation budget per measurement (default 10000)")
    p.add_argument("--seed", type=int, default=1, help="RNG seed (default 1)")
    p.add_argument("--csv", metavar="PATH",
                   help="write the sweep as CSV here instead of stdout")
    p.add_argument("--no-plot", action="store_true",
                   help="skip rendering the figure next to --csv output")
    p.add_argument("--dump", metavar="PATH",
                   help="after the run, serialize one structure's storage here "
                        "(the general variant unless --variant picks another)")
    p.add_argument("--check", action="store_true",
                   help="differential-check the variants against the naive "
                        "reference (with invariant scanning) instead of timing")
    p.add_argument("--simulate-w16", action="store_true",
                   help="print the bit-repeat of --value under a 16-bit word")
    p.add_argument("--value", default="1100", metavar="BITS",
                   help="binary element value for --simulate-w16 (default 1100)")
    return p


def _dump_variant(name, args):
    arr = make_variant(name, args.n, args.elem_bits)
    script = OpScript.random(args.n, args.elem_bits, args.ops, args.seed)
    script.run(arr)
    with open(args.dump, "wb") as fh:
        fh.write(arr.dump())
    print(f"dumped {name} storage ({args.n} x {args.elem_bits} bits) to {args.dump}", file=sys.stderr)


def cmd_simulate_w16(args):
    try:
        value = int(args.value, 2)
    except ValueError:
        print(f"--value must be a binary string, got {args.value!r}", file=sys.stderr)
        return 2
    eb = args.elem_bits if args.elem_bits != 16 else 4
    if value >> eb:
        print(f"value {args.value} does not fit in {eb} bits", file=sys.stderr)
        return 2
    mult = bit_repeat(value, eb, 16)
    shift = bit_repeat_shift(value, eb, 16)
    if mult != shift:
        print(f"multiply and shift paths disagree: {mult:#x} vs {shift:#x}", file=sys.stderr)
        return 1
    print(format(mult, "016b"))
    return 0


def cmd_check(args):
    names = [v for v in sorted(VARIANTS) if v != "naive"] if args.variant == "all" else [args.variant]
    names = [v for v in names if v != "naive"]
    usable = []
    for name in names:
        if variant_supported(name, args.n, args.elem_bits):
            usable.append(name)
        else:
            print(f"note: {name} cannot take n={args.n}, elem_bits={args.elem_bits}; skipped",
                  file=sys.stderr)
    if not usable:
        print("nothing to check", file=sys.stderr)
        return 2
    script = OpScript.random(args.n, args.elem_bits, args.ops, args.seed)
    pairs = [(name, make_variant(name, args.n, args.elem_bits)) for name in usable]
    scan = {name for name in usable if name in ("special", "general")}
    result = differential_run(script, pairs, scan=scan)
    if not result.ok:
        print(result.message)
        return 1
    print(f"OK: {len(script.ops)} ops on n={args.n}, elem_bits={args.elem_bits}, "
          f"variants {', '.join(usable)}, scan on {', '.join(sorted(scan)) or 'none'}, "
          f"seed {args.seed}")
    if args.dump:
        _dump_variant("general" if args.variant == "all" else args.variant, args)
    return 0


def cmd_sweep(args):
    freqs = args.freq if args.freq else list(DEFAULT_FREQS)
    names = sorted(VARIANTS) if args.variant == "all" else [args.variant]
    workloads = [Workload(args.n, args.elem_bits, f, args.ops, args.seed) for f in freqs]
    skipped = []
    rows = run_sweep(workloads, names, skipped=skipped)
    for name, n, eb in sorted(set(skipped)):
        print(f"note: {name} cannot take n={n}, elem_bits={eb}; skipped", file=sys.stderr)
    text = rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.csv}", file=sys.stderr)
        if rows and not args.no_plot:
            fig = os.path.splitext(args.csv)[0] + ".png"
            render_figures(rows, fig)
            print(f"rendered {fig}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    if args.dump:
        _dump_variant("general" if args.variant == "all" else args.variant, args)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.n < 1:
        print("--n must be at least 1", file=sys.stderr)
        return 2
    if args.elem_bits < 1 or args.elem_bits > 4 * WORD_BITS:
        print(f"--elem-bits must be in [1, {4 * WORD_BITS}]", file=sys.stderr)
        return 2
    if args.simulate_w16:
        return cmd_simulate_w16(args)
    if args.check:
        return cmd_check(args)
    return cmd_sweep(args)


if __name__ == "__main__":
    sys.exit(main())
