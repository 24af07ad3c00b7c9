"""Asynchronous l-complete approximations of finite and quantized systems, with simulation checks."""
from .automata import Fsm, Word, parse_word, prefix_language_compare, reachable_at, trim, word_token
from .lcomplete import ApproxMachine, approximate, is_l_complete, z_trajectory
from .quantizer import CompiledSystem, Interval, IntervalSet, QuantizerSpec, compile_spec, reach_past
from .relations import Relation, build_R0, build_Rl, build_RX, reach_past_at
from .simcheck import check_relation, check_step, greatest_simulation, theorem1_report
from .verdict import Counterexample, Verdict
from .windows import WindowSet, extract_windows, windows_oracle

__version__ = "0.1.0"

__all__ = [
    "ApproxMachine", "CompiledSystem", "Counterexample", "Fsm", "Interval", "IntervalSet",
    "QuantizerSpec", "Relation", "Verdict", "WindowSet", "Word", "approximate", "build_R0",
    "build_RX", "build_Rl", "check_relation", "check_step", "compile_spec", "extract_windows",
    "greatest_simulation", "is_l_complete", "parse_word", "prefix_language_compare", "reach_past",
    "reach_past_at", "reachable_at", "theorem1_report", "trim", "windows_oracle", "word_token",
    "z_trajectory",
]
