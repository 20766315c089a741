"""Exception hierarchy shared across the workbench.

Every error carries a stable machine-readable ``code`` so the CLI can emit
a JSON error envelope without string matching.
"""


class QembedError(Exception):
    code = "qembed_error"


class EmptyText(QembedError):
    code = "empty_text"


class EmptyCorpus(QembedError):
    code = "empty_corpus"


class AxesRankDeficient(QembedError):
    code = "axes_rank_deficient"


class ThetaDimension(QembedError):
    code = "theta_dimension"


class ObservablePoolExhausted(QembedError):
    code = "observable_pool_exhausted"


class ZeroVector(QembedError):
    code = "zero_vector"


class NoWindows(QembedError):
    code = "no_windows"


class AllZeroEmbedding(QembedError):
    code = "all_zero_embedding"


class SingularSystem(QembedError):
    code = "singular_system"


class TrainingDiverged(QembedError):
    code = "training_diverged"


class InsufficientOverlap(QembedError):
    code = "insufficient_overlap"


class InsufficientSamples(QembedError):
    code = "insufficient_samples"


class ChannelMismatch(QembedError):
    code = "channel_mismatch"


class MappingError(QembedError):
    code = "mapping_error"


class EmptyCandidates(QembedError):
    code = "empty_candidates"


class MissingRanking(QembedError):
    code = "missing_ranking"


class Undefined(QembedError):
    """Raised when a statistic has no defined value (e.g. zero variance)."""

    code = "undefined"
