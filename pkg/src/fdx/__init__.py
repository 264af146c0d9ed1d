"""Fair division of indivisible items with externalities."""

from .allocators import (
    SolverConfig,
    allocate_extern,
    allocate_nonconsensus,
    consensus_partition,
    expected_utilities,
    truthful_allocate,
)
from .auxiliary import AuxBundle, assumption_check, build_aux, witness_discards
from .discrepancy import DiscrepancyInstance, SolveResult, adisc_eval, solve, wdisc_brute
from .envy import (
    EfcCertificate,
    brute_min_discard_pair,
    brute_min_efc,
    certify_efc,
    envy_margin,
    extern_envy,
    min_discard_pair,
)
from .generators import (
    HyperedgeSets,
    lb_asym_instance,
    mm_sets,
    random_instance,
    star_extern_instance,
    sylvester_hadamard,
)
from .model import Allocation, AsymInstance, Coloring, ExternInstance, allocation_value, swap_bundles, validate
from .reductions import lift_additive, lift_binary, to_asym

__version__ = "0.1.0"
