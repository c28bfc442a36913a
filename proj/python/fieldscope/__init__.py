"""Field delineation over publication metadata.

Thin wrapper around the C++ extension. The heavy lifting (wildcard keyword
matching, scored-lexicon features, random forest, linear head over frozen
embeddings, stratified splitting, metrics, record linkage) lives in the
``_fieldscope`` extension; this package re-exports the public surface.
"""

try:  # installed wheel layout: fieldscope/_fieldscope*.so
    from . import _fieldscope as _ext
except ImportError:  # build-tree layout: extension directly on sys.path
    import _fieldscope as _ext

FieldscopeError = _ext.FieldscopeError
ForestModel = _ext.ForestModel
KeywordLexicon = _ext.KeywordLexicon
LinearModel = _ext.LinearModel
ScoredLexicon = _ext.ScoredLexicon
SubjectConfig = _ext.SubjectConfig
cluster = _ext.cluster
compute_metrics = _ext.compute_metrics
derive_relevance_label = _ext.derive_relevance_label
extract_features = _ext.extract_features
feature_names = _ext.feature_names
load_model_kind = _ext.load_model_kind
normalize = _ext.normalize
pair_matches = _ext.pair_matches
stratified_split = _ext.stratified_split
train_forest = _ext.train_forest
train_linear = _ext.train_linear

__version__ = _ext.__version__

__all__ = [
    "FieldscopeError",
    "ForestModel",
    "KeywordLexicon",
    "LinearModel",
    "ScoredLexicon",
    "SubjectConfig",
    "__version__",
    "cluster",
    "compute_metrics",
    "derive_relevance_label",
    "extract_features",
    "feature_names",
    "load_model_kind",
    "normalize",
    "pair_matches",
    "stratified_split",
    "train_forest",
    "train_linear",
]
