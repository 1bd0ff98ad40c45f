"""Compressed full-text index over similar strings laid out as a gapped column grid."""
from .alignment import GapMap, Segmentation, SimilarStrings, segment, transform
from .errors import FMAError
from .fma import FMIndex, Occurrence, SearchState
from .image import load_index, save_index
from .ingest import VariantSet, Variant, from_variants, parse_alignment

__all__ = ["GapMap", "Segmentation", "SimilarStrings", "segment", "transform", "FMAError",
           "FMIndex", "Occurrence", "SearchState", "load_index", "save_index", "VariantSet",
           "Variant", "from_variants", "parse_alignment"]
__version__ = "0.1.0"
