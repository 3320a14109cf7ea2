"""Commensurability of free products of finitely generated abelian groups.

Decides commensurability (equivalently, quasi-isometry) and builds
machine-checkable finite-index-subgroup certificates.
"""

from .actions import (CoverAction, FactorAction, StabilizerType, Violation, free_rank, orbits,
                      stabilizer_type, subgroup_presentation, validate)
from .builders import (EqualizationPlan, WitnessChain, build_step1, build_step2, build_torsion_removal,
                       build_witness, plan_step1)
from .certificate import (Certificate, Report, WitnessCertificate, certificate_from_chain, verify_certificate,
                          verify_witness, witness_certificate)
from .core import (AbelianFactor, Presentation, QIClass, canonical_torsion, chi, classify, decide, free_group,
                   normalize, signature)
from .errors import (InputError, InvalidCoverError, MalformedFactorError, NotCommensurableError, ParseError,
                     PreconditionError, SchemaError, SpecError)
from .gog import CoveringGraph, CoverPlan, build_gog_cover, chi_gog, embeddable, plan_cover
from .lattice import hnf, snf
from .parser import GraphOfGroupsSpec, format_group, parse_factor, parse_gog, parse_group

__version__ = "0.1.0"
