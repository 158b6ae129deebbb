"""Finite-state morphology via resource-typed automaton intersection."""

from .alphabet import Alphabet, Kind, Symbol
from .analyses import (
    Lexicon,
    StemSpec,
    bambara_pipeline,
    build_stem,
    load_grammar,
    semai_pipeline,
    wordform,
)
from .compiler import (
    CompiledGrammar,
    compile_grammar,
    compile_rule,
    ignore_technicals,
    not_contains,
)
from .dump import dump_dot, dump_text
from .enrich import add_repeats, add_self_loops, add_skips, enrich
from .errors import (
    AutomatonError,
    CompileError,
    EnumerationCapError,
    ExpansionBudgetError,
    GrammarError,
    InventoryError,
    RedupError,
    StemRejectedError,
)
from .fsa import (
    Arc,
    Fsa,
    Label,
    accepts,
    build_from_string,
    canonical,
    combine,
    determinize,
    empty_string_fsa,
    enumerate_label_paths,
    enumerate_language,
    is_empty,
    language_equal,
    minimize,
    never_fsa,
    normalize,
    project_surface,
    surface_strings,
    symbol_fsa,
    trim,
)
from .interpret import (
    ProductStats,
    close,
    intersect_open,
    prepare_parse_input,
    universal_producer,
)
from .lazy import (
    LazyFsa,
    is_empty_lazy,
    lazy_close,
    lazy_enrich,
    lazy_intersect,
    materialize,
    total_expansions,
)

__version__ = "0.1.0"
