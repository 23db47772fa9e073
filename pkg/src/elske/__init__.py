"""Efficient top-k keyphrase extraction for large document collections."""

from .baseline import TimingReport, baseline_top_k, enumerate_all_ngrams, timed_compare
from .condensing import CondenseParams, condense
from .errors import DatasetError, ElskeError, IndexFormatError, IngestionError
from .extraction import (
    CandidateSet,
    NgramCounts,
    PipelineConfig,
    count_unigrams_bigrams,
    discard_same_frequency_subphrases,
    extract,
    extract_long_phrases,
    finalize_candidates,
    top_k_uni_bigrams,
)
from .index import ReferenceIndex, build_index, load_index, persist_index, read_index, save_index
from .kernels import BACKEND as KERNEL_BACKEND
from .scoring import (
    ScoredCandidate,
    ScoringParams,
    frequency_threshold,
    pf_idf,
    pf_idf_many,
    scaling_exponent,
)
from .text import (
    SourceCorpus,
    TokenizedDoc,
    Vocabulary,
    default_stopword_lines,
    ingest_collection,
    ingest_document,
    load_stopwords,
    tokenize,
)

__version__ = "0.1.0"
