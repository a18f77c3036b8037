"""Closure operators on subgroups of finite and finitely generated abelian groups."""

from .closure import (
    CENTER,
    DERIVED,
    SOCLE,
    C,
    CPRIME,
    ClosureOperatorId,
    Preradical,
    apply,
    audit_axioms,
    audit_operator,
    c2,
    c3,
    closed_class_sup_closed,
    is_additive_on,
    is_idempotent_on,
    shipped_operators,
    simple_image_onto_test,
)
from .errors import *  # noqa: F401,F403
from .group import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    all_subgroups,
    center,
    commutator_subgroup,
    generate_group,
    homomorphism,
    is_normal,
    join,
    meet,
    normal_closure,
    quotient,
    socle,
)
from .named import load_group, named_group, select_corpus
from .perm import Permutation
from .subnormal import is_subnormal, join_experiment, normal_closure_series, oracle_subnormal

__version__ = "0.1.0"
