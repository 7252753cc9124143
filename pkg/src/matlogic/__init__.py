"""Workbench for propositional logics given by finite matrices and atlases.

Subpackages by theme:

- ``lang``: formulas, signatures, parsing, canonical enumeration
- ``algebra``: finite algebras, term clones, congruences, products
- ``matrices``: matrices, atlases, validity, consequence, presets
- ``lindenbaum``: representative formulas and free matrix algebras
- ``decide``: triviality, theorem inclusion, atlas inclusion/equivalence
- ``eqlogic``: equational derivation checking and consequence
- ``intprover``: terminating intuitionistic sequent prover
- ``cli``: the ``matlogic`` batch command
"""

from .algebra import (
    Congruence,
    FiniteAlgebra,
    TermFunction,
    clone_functions,
    congruence_closure_pairs,
    direct_product,
    evaluate_term,
    find_isomorphism,
    generated_subalgebra,
    generates_carrier,
    greatest_congruence_below,
    identity_congruence,
    is_congruence,
    minimal_generating_set,
    quotient_by_congruence,
    term_table,
)
from .decide import (
    DecisionReport,
    atlas_equivalence,
    atlas_inclusion,
    has_theorems,
    theorem_inclusion,
    weak_equivalence,
)
from .eqlogic import (
    BridgeResult,
    CheckResult,
    EDerivation,
    Equality,
    EqConsequenceResult,
    Step,
    SYSTEMS,
    bridge_implicational,
    check_e_derivation,
    decide_ground_equational,
    eq_consequence,
    ground_closure,
    parse_equality,
    s_translate,
)
from .intprover import (
    ProofTree,
    Sequent,
    check_proof,
    expand_iff,
    g3_prove,
    glivenko_check,
    int_leq,
    int_ll,
    int_relation,
    int_sim,
    provable,
    rn_classify,
    rn_power,
)
from .lang import (
    App,
    Const,
    Formula,
    ParseError,
    Signature,
    Substitution,
    Var,
    app,
    conj,
    const,
    disj,
    enumerate_formulas,
    format_formula,
    iff,
    imp,
    neg,
    parse_formula,
    subformulas,
    var,
    variables,
    CLASSICAL_SIGNATURE,
    INT_SIGNATURE,
)
from .limits import CapExceeded, DEFAULT_CAPS, ResourceCaps
from .lindenbaum import (
    RepresentativeSet,
    free_matrix_algebra,
    indistinguishable,
    representatives,
    representatives_by_enumeration,
    restricted_theorems,
)
from .matrices import (
    Atlas,
    ConsequenceResult,
    Matrix,
    PRESET_NAMES,
    ValidityResult,
    atlas_from_family,
    boolean_matrix,
    combine_atlases,
    combine_matrices,
    consequence,
    godel_chain,
    greatest_compatible_congruence,
    is_valid,
    make_preset,
    reduced_matrix,
)

__version__ = "0.1.0"
