"""Cross-language patent retrieval: query translation, TF-IDF cosine search, evaluation."""

from patclir.errors import FormatError, ValidationError

__version__ = "0.1.0"

__all__ = ["FormatError", "ValidationError", "__version__"]
