"""Klein foams and equipped families of real forms, modelled with permutations."""

__version__ = "0.1.0"

from .errors import (ConsistencyError, ExpansionError, FoamlabError, InadmissibleComponentError,
                     IncompatibleLiftsError, InconsistentLiftError, LimitError, ParseError)
from .permcore import Permutation, group_closure
from .realcover import ComponentCover, RealBase, count_ovals, genus_rh, involution_lifts
from .famforge import EquippedFamily, build_family, verify_axioms
from .foamkit import Foam, GeneralizedGraph, assemble_compressed, compress, expand, weak_iso

__all__ = [
    "ConsistencyError", "ExpansionError", "FoamlabError", "InadmissibleComponentError",
    "IncompatibleLiftsError", "InconsistentLiftError", "LimitError", "ParseError",
    "Permutation", "group_closure", "ComponentCover", "RealBase", "count_ovals", "genus_rh",
    "involution_lifts", "EquippedFamily", "build_family", "verify_axioms", "Foam",
    "GeneralizedGraph", "assemble_compressed", "compress", "expand", "weak_iso",
]
