"""Degrees and cohomology classes of equisingular strata of plane curves."""

from .degen import DegenCatalog, DegenStep, StratumRef, load_degen_catalog, resolve_class
from .diagram import NewtonDiagram, SingularityDescriptor, load_catalog
from .linear import degree, multidegree
from .ring import ClassElement, DegreeScalar, RingSpec, exact_divide, standard_ring

__version__ = "0.1.0"

__all__ = [
    "ClassElement",
    "DegenCatalog",
    "DegenStep",
    "DegreeScalar",
    "NewtonDiagram",
    "RingSpec",
    "SingularityDescriptor",
    "StratumRef",
    "degree",
    "exact_divide",
    "load_catalog",
    "load_degen_catalog",
    "multidegree",
    "resolve_class",
    "standard_ring",
]
