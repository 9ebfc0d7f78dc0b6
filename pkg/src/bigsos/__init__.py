"""Monotone biGSOS specifications, executable.

Rule banks with lookahead premises and complex conclusion targets are
interpreted over finite term universes: the least supported model is the
limit of Kleene iteration from the all-bottom model, sound under truncation
(outside terms read as bottom).  On top of the models sit simulation and
bisimulation checks, depth-bounded unfolding comparisons, and a law suite
for the lifting/monad facts the construction relies on.
"""

from .behaviour import (BOTTOM, CountableLTS, LtsValue, PartialStream, Relation,
                        StreamStep, WeightedLTS, WtsValue)
from .engine import (ConvergenceReport, GenCoalgebra, Model, UnfoldTree,
                     gen_to_model, least_model, lift_coalgebra, model_to_dot,
                     model_to_json, phi_step, unfold, unfold_to_json)
from .errors import (ArityError, BigsosError, CarrierMismatchError,
                     InconsistentStreamError, LabelEvalError, NonConvergenceError,
                     NonMonotoneError, ParseError, StateMapError,
                     UnboundVariableError, UnknownOperatorError, UnknownStateError)
from .relations import (CongruenceReport, EquivResult, LawConfig, LawResult,
                        MonotonicityReport, bisimilarity_classes, check_equivalence,
                        congruence_test, depth_similarity, distinguishing_depth,
                        greatest_simulation, law_suite, monotonicity_semantic_test)
from .speclang import (Rule, Spec, check_monotone, lookahead_depth, parse_spec,
                       print_spec, validate_spec)
from .terms import (App, Operator, Signature, Term, UniversePolicy, Var,
                    enumerate_universe, parse_term, print_term, substitute)

__version__ = "0.1.0"
