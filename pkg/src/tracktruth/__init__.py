"""Iterated belief revision as a learning method on finite epistemic spaces."""

from .core import (
    EpistemicSpace,
    Observable,
    PlausibilitySpace,
    Preorder,
    SpaceError,
    World,
    enumerate_preorders,
    enumerate_total_preorders,
    is_negation_closed,
    is_strongly_separated,
    min_elements,
    observables_of,
    restrict,
    restrict_complement,
    validate_space,
)
from .revision import Method, RevisionState, conjecture, cond_step, iterate, lex_step, mini_step
from .streams import StreamSpec, canonical_sc_stream, is_complete, is_fair, is_sound
from .telltale import (
    TellTaleFailure,
    TellTaleMap,
    cond_telltale_exists,
    dftt_construct,
    finite_identifier,
    is_finitely_identifiable,
    mini_telltale_exists,
)
from .verifier import (
    FAIR,
    SOUND_COMPLETE,
    Verdict,
    cross_check,
    decide_appropriate,
    decide_fair_appropriate,
    decide_in_limit,
    locking_sequence_search,
    run_trace,
    sweep_priors,
)

__version__ = "0.1.0"

__all__ = [
    "EpistemicSpace",
    "Observable",
    "PlausibilitySpace",
    "Preorder",
    "SpaceError",
    "World",
    "enumerate_preorders",
    "enumerate_total_preorders",
    "is_negation_closed",
    "is_strongly_separated",
    "min_elements",
    "observables_of",
    "restrict",
    "restrict_complement",
    "validate_space",
    "TellTaleFailure",
    "TellTaleMap",
    "cond_telltale_exists",
    "dftt_construct",
    "finite_identifier",
    "is_finitely_identifiable",
    "mini_telltale_exists",
    "FAIR",
    "SOUND_COMPLETE",
    "Verdict",
    "cross_check",
    "decide_appropriate",
    "decide_fair_appropriate",
    "decide_in_limit",
    "locking_sequence_search",
    "run_trace",
    "sweep_priors",
    "Method",
    "RevisionState",
    "conjecture",
    "cond_step",
    "iterate",
    "lex_step",
    "mini_step",
    "StreamSpec",
    "canonical_sc_stream",
    "is_complete",
    "is_fair",
    "is_sound",
]
