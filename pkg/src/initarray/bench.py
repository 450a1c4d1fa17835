"""Microbenchmark sweep over the array variants.

A workload is an epoch pattern: one iinit followed by a batch of writes and a
batch of reads over random indices, where the access count per epoch is a
fraction (freq) of the array length. Low freq makes init cost dominate, which
is exactly the regime the constant-time variants exist for.

Timing reps run without a ledger so the accounting does not pollute the
numbers; a separate warmup rep runs ledgered and contributes the worst per-op
word-access count to the row.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass

from .words import WORD_BITS, CostLedger
from .verify import make_variant, variant_supported

DEFAULT_FREQS = (0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 10.0)

CSV_COLUMNS = (
    "variant", "n", "elem_bits", "freq",
    "init_ns", "read_ns", "write_ns", "word_accesses", "extra_bits",
)


@dataclass(frozen=True)
class Workload:
    n: int
    elem_bits: int
    freq: float
    ops: int = 10000
    seed: int = 1
    read_mix: float = 0.5

    def plan(self):
        """(epochs, writes per epoch, reads per epoch)."""
        per_epoch = max(2, round(self.freq * self.n))
        epochs = max(1, self.ops // per_epoch)
        writes = max(1, int(per_epoch * (1.0 - self.read_mix)))
        reads = max(1, per_epoch - writes)
        return epochs, writes, reads


@dataclass
class BenchRow:
    variant: str
    n: int
    elem_bits: int
    freq: float
    init_ns: float
    read_ns: float
    write_ns: float
    word_accesses: int
    extra_bits: int

    def as_csv_fields(self):
        return (
            self.variant, str(self.n), str(self.elem_bits), f"{self.freq:g}",
            f"{self.init_ns:.1f}", f"{self.read_ns:.1f}", f"{self.write_ns:.1f}",
            str(self.word_accesses), str(self.extra_bits),
        )


def _run_epochs(arr, workload, rng):
    """One rep: returns (init_ns_list, write_ns_per_op_list, read_ns_per_op_list)."""
    epochs, writes, reads = workload.plan()
    mask = (1 << workload.elem_bits) - 1
    init_ns = []
    write_ns = []
    read_ns = []
    perf = time.perf_counter_ns
    iinit = arr.iinit
    iwrite = arr.iwrite
    iread = arr.iread
    n = workload.n
    for _ in range(epochs):
        v = rng.getrandbits(workload.elem_bits) & mask
        widx = [rng.randrange(n) for _ in range(writes)]
        wval = [rng.getrandbits(workload.elem_bits) for _ in range(writes)]
        ridx = [rng.randrange(n) for _ in range(reads)]
        t0 = perf()
        iinit(v)
        t1 = perf()
        for k in range(writes):
            iwrite(widx[k], wval[k])
        t2 = perf()
        for i in ridx:
            iread(i)
        t3 = perf()
        init_ns.append(t1 - t0)
        write_ns.append((t2 - t1) / writes)
        read_ns.append((t3 - t2) / reads)
    return init_ns, write_ns, read_ns


def bench_variant(name, workload, reps=5, word_bits=WORD_BITS):
    """Median per-op timings for one variant under one workload."""
    # accounting rep: ledgered, also serves as warmup
    lg = CostLedger()
    arr = make_variant(name, workload.n, workload.elem_bits, word_bits, ledger=lg)
    _run_epochs(arr, workload, random.Random(workload.seed))
    accesses = lg.op_max
    extra = arr.extra_bits()
    init_ns = []
    write_ns = []
    read_ns = []
    for rep in range(reps):
        arr = make_variant(name, workload.n, workload.elem_bits, word_bits)
        i, w, r = _run_epochs(arr, workload, random.Random(workload.seed + rep + 1))
        init_ns.extend(i)
        write_ns.extend(w)
        read_ns.extend(r)
    return BenchRow(
        variant=name,
        n=workload.n,
        elem_bits=workload.elem_bits,
        freq=workload.freq,
        init_ns=statistics.median(init_ns),
        read_ns=statistics.median(read_ns),
        write_ns=statistics.median(write_ns),
        word_accesses=accesses,
        extra_bits=extra,
    )


def run_sweep(workloads, names, reps=5, word_bits=WORD_BITS, skipped=None):
    """BenchRow per (workload, variant), skipping shapes a variant cannot take."""
    rows = []
    for wl in workloads:
        for name in names:
            if not variant_supported(name, wl.n, wl.elem_bits):
                if skipped is not None:
                    skipped.append((name, wl.n, wl.elem_bits))
                continue
            rows.append(bench_variant(name, wl, reps, word_bits))
    return rows


def rows_to_csv(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_fields())
    return out.getvalue()


def render_figures(rows, path):
    """Plot ns/op against access frequency, one panel per operation.

    Returns the path written. matplotlib is imported here so nothing else in
    the package depends on it.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = (("init_ns", "iinit"), ("write_ns", "iwrite"), ("read_ns", "iread"))
    variants = sorted({r.variant for r in rows})
    fig, axes = plt.subplots(1, 3, figsize=(13, 4.2), sharex=True)
    for ax, (attr, title) in zip(axes, panels):
        for name in variants:
            pts = sorted((r.freq, getattr(r, attr)) for r in rows if r.variant == name)
            if not pts:
                continue
            extra = next(r.extra_bits for r in rows if r.variant == name)
            ax.plot(
                [p[0] for p in pts],
                [p[1] for p in pts],
                marker="o",
                label=f"{name} (+{extra} bits)",
            )
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_title(title)
        ax.set_xlabel("accesses between inits / n")
        ax.grid(True, which="both", alpha=0.3)
    axes[0].set_ylabel("ns per op (median)")
    axes[0].legend(fontsize=8)
    fig.suptitle(f"initializable array sweep, n={rows[0].n}, l={rows[0].elem_bits}" if rows else "empty sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
