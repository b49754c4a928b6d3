"""Planar plants, grafting, footpath 2-cells, congruence checks and finite models."""

from .alphabet import Alphabet
from .congruence import Budget, Equal, NotEstablished, Related, Session, enumerate_paths
from .errors import GrafterError
from .garden import GardenEntry, GardenStore, generate
from .grafting import GraftingSpec, graft_all, k_graftings, tensor
from .model import Counterexample, FiniteModel, Holds, Natural
from .plant import Arity, Plant, canonicalize, compose, iso_eq, occurrences, substitute, validate
from .render import render
from .twocell import Pasting, Step, TwoCellSum, flatten, normalize, typecheck

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "Arity", "Budget", "Counterexample", "Equal", "FiniteModel", "GardenEntry",
    "GardenStore", "GrafterError", "GraftingSpec", "Holds", "Natural", "NotEstablished", "Pasting",
    "Plant", "Related", "Session", "Step", "TwoCellSum", "canonicalize", "compose", "enumerate_paths",
    "flatten", "generate", "graft_all", "iso_eq", "k_graftings", "normalize", "occurrences", "render",
    "substitute", "tensor", "typecheck", "validate",
]
