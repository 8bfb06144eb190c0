"""Energy, index and decomposition search for completely reducible connections."""

from .formulas import *  # noqa: F401,F403
from .formulas import __all__ as _formulas_all
from .search import DecompRow, SearchError, candidate_vectors, nice_decomposition_search, DEFAULT_WINDOW
from .tables import REFERENCE_TABLES, ReferenceTable, RowResult, TableRow, format_text, regenerate, to_json, check_examples

__all__ = list(_formulas_all) + [
    "DecompRow", "SearchError", "candidate_vectors", "nice_decomposition_search", "DEFAULT_WINDOW",
    "REFERENCE_TABLES", "ReferenceTable", "RowResult", "TableRow", "format_text", "regenerate", "to_json",
    "check_examples",
]
