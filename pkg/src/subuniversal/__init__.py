"""Output frequency distributions of sub-universal models of computation
(finite-state transducers, context-free grammars, runtime-bounded and
non-halting Turing machines, cellular automata) and the complexity
estimates derived from them."""

__version__ = "0.1.0"

from .analysis import (RankComparison, baseline_rankings, compare, compare_matrix,
                       missed_strings, rank_correlation)
from .automata import CaRule, ca_distribution, ca_evolve
from .distributions import (EmpiricalDistribution, IncompatibleDistributions, complexity_table,
                            consolidate, ctm_complexity, load, merge, save)
from .estimators import (CellularAutomatonCTM, EntropyBaseline, GrammarComplexity, LZWBaseline,
                         NonHaltingTMCTM, TransducerComplexity, TuringMachineCTM, check_strings)
from .grammars import CnfGrammar, cfg_distribution, cyk_member, enumerate_grammars
from .machines import (MachineCensus, TuringMachine, ctm_census, ctm_distribution,
                       nonhalting_tm_distribution, simulate)
from .strings import (DegenerateInputWarning, canonical, complement, lzw_compressed_length,
                      reverse, shannon_entropy)
from .transducers import (DescriptionTable, Transducer, decode_transducer, encode_transducer,
                          fsa_ap, fsa_ap_complexity, fsa_complexity, fsa_distribution)

__all__ = [name for name in dir() if not name.startswith("_")]
