"""Finite join-semilattices with an extra relation, their spectra of round
prime filters, and the duality with finite spaces and their bases."""

from .axioms import AXIOMS, PREDOMAIN, AxiomReport, check_axioms, find_violation, is_predomain
from .kernels import get_backend, set_backend, use_backend
from .morphism import (
    PartialMap,
    RelMorphism,
    check_morphism,
    compose,
    morphism_of_map,
    spectrum_map,
    vee_closure,
)
from .order import ElementSet, Structure, make_structure, structure_document, validate_structure
from .space import FiniteSpace, derive_structure, point_filter, space_from_document
from .spectrum import enumerate_spectrum, extend_to_prime
from .topology import Topology, sober_check, way_below

__version__ = "0.1.0"

__all__ = [
    "AXIOMS",
    "PREDOMAIN",
    "AxiomReport",
    "ElementSet",
    "FiniteSpace",
    "PartialMap",
    "RelMorphism",
    "Structure",
    "Topology",
    "check_axioms",
    "check_morphism",
    "compose",
    "derive_structure",
    "enumerate_spectrum",
    "extend_to_prime",
    "find_violation",
    "get_backend",
    "is_predomain",
    "make_structure",
    "morphism_of_map",
    "point_filter",
    "set_backend",
    "sober_check",
    "space_from_document",
    "spectrum_map",
    "structure_document",
    "use_backend",
    "validate_structure",
    "vee_closure",
    "way_below",
]
