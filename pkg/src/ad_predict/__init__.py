"""ad-predict: anxious depression screening from tweet timelines.

Pipeline stages:
- corpus: tweet records -> per-user timelines in a 30-day observation window
- textprep: clean, expand slang/emoji, tokenize, drop stopwords, stem
- lexicons: anxiety lexicon (seed + synonyms) and word polarity scores
- features: the per-user 5-bit vector <w,t,f,s,c>
- learners: naive Bayes, random forest, gradient boosting, majority vote
- evaluation: stratified holdout / k-fold harness and synthetic data
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("ad-predict")
except PackageNotFoundError:
    __version__ = "0.1.0-dev"  # Fallback for source checkouts

from ad_predict.models import FeatureVector, Tweet, UserTimeline

__all__ = ["FeatureVector", "Tweet", "UserTimeline", "__version__"]
