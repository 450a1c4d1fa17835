"""Initializable arrays: iinit / iread / iwrite, all constant time.

Variants, ordered by extra mutable state on top of the N*l data bits:

  NaiveArray     linear iinit, zero extra bits (the reference)
  BitmapArray    linear iinit, N + l extra bits
  FolkloreArray  O(1) iinit via chaining stamps, 2*l*(N+1) extra bits
  SpecialArray   O(1) iinit in place, 2*l extra bits (even N, l >= log2 N)
  GeneralArray   O(1) iinit in place, exactly 1 extra bit (any N, any l)
"""

from .words import (
    SMALL_FILL_WORDS,
    WORD_BITS,
    CostLedger,
    PackedArray,
    WordBuffer,
    bit_repeat,
    bit_repeat_shift,
    comb_constant,
    dump_bytes,
    parse_dump,
    repeat_value,
    small_fill,
)
from .folklore import FolkloreArray
from .inplace_special import ChainedBlockCore, SpecialArray
from .inplace_general import GeneralArray, GeneralParams, MetaLayout, derive_params, meta_layout
from .verify import (
    VARIANTS,
    BitmapArray,
    DiffResult,
    NaiveArray,
    OpScript,
    assert_constant_cost,
    differential_run,
    make_variant,
    scan_invariants,
    variant_supported,
)
from .bench import (
    CSV_COLUMNS,
    DEFAULT_FREQS,
    BenchRow,
    Workload,
    bench_variant,
    render_figures,
    rows_to_csv,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "BitmapArray",
    "CSV_COLUMNS",
    "ChainedBlockCore",
    "CostLedger",
    "DEFAULT_FREQS",
    "DiffResult",
    "FolkloreArray",
    "GeneralArray",
    "GeneralParams",
    "MetaLayout",
    "NaiveArray",
    "OpScript",
    "PackedArray",
    "SMALL_FILL_WORDS",
    "SpecialArray",
    "VARIANTS",
    "WORD_BITS",
    "WordBuffer",
    "Workload",
    "assert_constant_cost",
    "bench_variant",
    "bit_repeat",
    "bit_repeat_shift",
    "comb_constant",
    "derive_params",
    "differential_run",
    "dump_bytes",
    "make_variant",
    "meta_layout",
    "parse_dump",
    "render_figures",
    "repeat_value",
    "rows_to_csv",
    "run_sweep",
    "scan_invariants",
    "small_fill",
    "variant_supported",
    "__version__",
]
