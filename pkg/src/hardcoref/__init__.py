"""Hard coreference resolution with predicate-schema knowledge."""
from .docmodel import Document, Mention, Token, dataset_stats, load_corpus
from .infer import SYSTEMS, LinkAssignment, bll_decode, ilp_decode, run_system
from .kb import KnowledgeBase, build_kb, load_kb, save_kb
from .model import ModelWeights, train_blmp
from .scoring import LAYOUT_VERSION, score_pair

__version__ = "0.1.0"

__all__ = [
    "Document", "Mention", "Token", "dataset_stats", "load_corpus",
    "SYSTEMS", "LinkAssignment", "bll_decode", "ilp_decode", "run_system",
    "KnowledgeBase", "build_kb", "load_kb", "save_kb",
    "ModelWeights", "train_blmp", "LAYOUT_VERSION", "score_pair",
]
