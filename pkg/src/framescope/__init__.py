"""framescope: collaborative moral-framing annotation for news.

Lexicon-based frame detection, highlight/tag/vote/comment workflows with
contribution-gated discussion, frame-aware article recommendations, and the
statistical toolkit used to evaluate such deployments.
"""

__version__ = "0.1.0"

from .frames import CANONICAL_TAGS, Foundation, FrameTag, Polarity
from .lexicon import (
    FrameVector,
    Lexicon,
    SuggestedTags,
    load_lexicon,
    load_stub_lexicon,
    parse_lexicon,
    score,
    suggest_tags,
    tokenize,
)
from .anchors import AnchorResolution, AnchorStatus, TextAnchor, create_anchor, resolve
from .model import Store, canonicalize
from .recommend import CorpusIndex, Recommendation, build_index
from .recommend import recommend as recommend_articles
from .analysis import (
    CodedResponse,
    EmpathySample,
    EngagementReport,
    PermutationResult,
    ReframingChange,
    classify_reframing,
    engagement_report,
    mean_percent_change,
    permutation_test,
)

__all__ = [
    "CANONICAL_TAGS",
    "AnchorResolution",
    "AnchorStatus",
    "CodedResponse",
    "CorpusIndex",
    "EmpathySample",
    "EngagementReport",
    "Foundation",
    "FrameTag",
    "FrameVector",
    "Lexicon",
    "PermutationResult",
    "Polarity",
    "Recommendation",
    "ReframingChange",
    "Store",
    "SuggestedTags",
    "TextAnchor",
    "build_index",
    "canonicalize",
    "classify_reframing",
    "create_anchor",
    "engagement_report",
    "load_lexicon",
    "load_stub_lexicon",
    "mean_percent_change",
    "parse_lexicon",
    "permutation_test",
    "recommend_articles",
    "resolve",
    "score",
    "suggest_tags",
    "tokenize",
]
